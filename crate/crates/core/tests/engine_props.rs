//! Property and invariant tests for the inference engine.

mod common;

use common::*;
use logicnet::bounds::{Bounds, TruthState};
use logicnet::formula::{Formula, KnowledgeBase};
use logicnet::graph::{CompileConfig, NeuronGraph};
use logicnet::inference::{Engine, InferConfig, ModelParams};
use logicnet::learning::{
    composite_loss, finite_diff_gradient, LossSet, ParamRef, TrainConfig,
};
use logicnet::parse::{format_kb, parse_formula, parse_kb};
use logicnet::rng::SplitMix64;
use logicnet::semantics::Family;
use proptest::prelude::*;

fn arb_formula() -> impl Strategy<Value = String> {
    // textual formulas over three propositions with optional weights
    let leaf = prop_oneof![Just("a".to_string()), Just("b".to_string()), Just("c".to_string())];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| format!("~{}", paren(&f))),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("{} & {}", paren(&l), paren(&r))),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("{} | {}", paren(&l), paren(&r))),
            (inner.clone(), inner.clone(), 1u32..=99)
                .prop_map(|(l, r, w)| format!("{}^0.{:02} | {}", paren(&l), w, paren(&r))),
            (inner.clone(), inner).prop_map(|(l, r)| format!("{} -> {}", paren(&l), paren(&r))),
        ]
    })
}

fn paren(f: &str) -> String {
    if f.len() == 1 {
        f.to_string()
    } else {
        format!("({})", f)
    }
}

proptest! {
    // parse . format . parse is a fixed point, and numeric annotations
    // survive the round trip
    #[test]
    fn parse_format_roundtrip(text in arb_formula()) {
        let f1: Formula<f64> = parse_formula(&text).expect("generated formula parses");
        let rendered = f1.to_string();
        let f2: Formula<f64> = parse_formula(&rendered)
            .unwrap_or_else(|e| panic!("reparse of {:?}: {}", rendered, e));
        prop_assert_eq!(&f1, &f2);
        prop_assert_eq!(rendered.clone(), f2.to_string());
    }
}

/// A consistent fuzzy KB (bounds bracket a hidden classical model)
/// built directly, for order-independence checks.
fn consistent_kb(rng: &mut SplitMix64) -> KnowledgeBase<f64> {
    let n_atoms = 3 + rng.below(5);
    loop {
        let n_axioms = 2 + rng.below(4);
        let (kb, _) = random_satisfiable_kb(rng, n_atoms, n_axioms);
        if NeuronGraph::compile(&kb, CompileConfig::default()).is_ok() {
            return kb;
        }
    }
}

fn converged_atom_bounds(kb: &KnowledgeBase<f64>) -> Vec<(String, Bounds<f64>)> {
    let graph = NeuronGraph::compile(kb, CompileConfig::default()).expect("compiles");
    let model = ModelParams::from_graph(&graph);
    let mut eng = Engine::new(
        &graph,
        &model,
        InferConfig {
            epsilon: 0.0,
            max_iters: 400,
            w_min: 0.01,
        },
    );
    eng.infer();
    graph
        .atom_nodes
        .iter()
        .map(|(name, &node)| (name.clone(), eng.bounds(node, 0)))
        .collect()
}

#[test]
fn pass_order_independence_on_consistent_kbs() {
    // final converged bounds are identical under any root visitation
    // order (monotone aggregation); checked for consistent systems,
    // where no contradiction localization is in play
    let mut rng = SplitMix64::new(0xabcd_0001);
    for _ in 0..25 {
        let kb = consistent_kb(&mut rng);
        let reference = converged_atom_bounds(&kb);
        for _ in 0..3 {
            let mut shuffled = kb.clone();
            // Fisher-Yates over the axiom list
            for i in (1..shuffled.axioms.len()).rev() {
                let j = rng.below(i + 1);
                shuffled.axioms.swap(i, j);
            }
            let permuted = converged_atom_bounds(&shuffled);
            for ((name, a), (name2, b)) in reference.iter().zip(&permuted) {
                assert_eq!(name, name2);
                assert_eq!(
                    (a.lower, a.upper),
                    (b.lower, b.upper),
                    "bounds for {} differ under permutation",
                    name
                );
            }
        }
    }
}

#[test]
fn godel_family_is_classically_sound() {
    // the Gödel downward rules are hand-derived inverses; check them
    // against brute-force classical entailment like the default family
    let mut rng = SplitMix64::new(0xabcd_0002);
    for _ in 0..60 {
        let n_atoms = 3 + rng.below(6);
        let n_axioms = 2 + rng.below(4);
        let (kb, _) = random_satisfiable_kb(&mut rng, n_atoms, n_axioms);
        let models = classical_models(&kb, n_atoms);
        let compile = CompileConfig {
            family: Family::Godel,
            ..CompileConfig::default()
        };
        let graph = match NeuronGraph::compile(&kb, compile) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let model = ModelParams::from_graph(&graph);
        let mut eng = Engine::new(&graph, &model, InferConfig::default());
        eng.infer();
        for i in 0..n_atoms {
            let node = graph.atom_nodes[&format!("p{}", i)];
            let b = eng.bounds(node, 0);
            match b.classify(1.0) {
                TruthState::True => {
                    assert!(models.iter().all(|m| m & (1 << i) != 0), "p{} not entailed", i)
                }
                TruthState::False => {
                    assert!(models.iter().all(|m| m & (1 << i) == 0), "p{} not refuted", i)
                }
                _ => {}
            }
        }
    }
}

#[test]
fn quantifier_duality() {
    // ~forall x. P(x) and exists x. ~P(x) converge to the same bounds
    let text = "\
pred P/1
const u v w
fact P(u) : [0.2,0.6]
fact P(v) : [0.9,1]
query qa : ~(forall x. P(x))
query qb : exists x. ~P(x)
";
    let kb = parse_kb::<f64>(text).expect("parses");
    let graph = NeuronGraph::compile(&kb, CompileConfig::default()).expect("compiles");
    let model = ModelParams::from_graph(&graph);
    let mut eng = Engine::new(&graph, &model, InferConfig::default());
    let rep = eng.infer();
    let find = |id: &str| {
        rep.queries
            .iter()
            .find(|q| q.id == id)
            .expect("query")
            .answers[0]
            .clone()
    };
    let a = find("qa");
    let b = find("qb");
    assert_eq!((a.lower, a.upper), (b.lower, b.upper));
}

#[test]
fn grounding_tables_only_tighten_and_never_shrink() {
    let text = "\
pred F/2
pred S/1
const u v w
axiom sym : ~F(x,y) | F(y,x)
axiom prop : ~S(x) | ~F(x,y) | S(y)
fact F(u,v) : [1,1]
fact S(u) : [1,1]
";
    let kb = parse_kb::<f64>(text).expect("parses");
    let graph = NeuronGraph::compile(&kb, CompileConfig::default()).expect("compiles");
    let model = ModelParams::from_graph(&graph);
    let mut eng = Engine::new(&graph, &model, InferConfig::default());
    let f_node = graph.atom_nodes["F"];
    let before: Vec<Bounds<f64>> = (0..graph.nodes[f_node].len())
        .map(|t| eng.bounds(f_node, t))
        .collect();
    let tuple_count = graph.nodes[f_node].len();
    for _ in 0..5 {
        eng.step();
        assert_eq!(graph.nodes[f_node].len(), tuple_count, "tuples are never deleted");
        for t in 0..tuple_count {
            let b = eng.bounds(f_node, t);
            assert!(b.lower >= before[t].lower && b.upper <= before[t].upper);
        }
    }
    // the symmetric pair was materialised and derived
    let t: Box<[u32]> = [graph.const_id("v").unwrap(), graph.const_id("u").unwrap()].into();
    let e = graph.nodes[f_node].entry(&t).expect("propagated tuple");
    assert_eq!(eng.bounds(f_node, e), Bounds::new(1.0, 1.0));
}

#[test]
fn guided_policy_derives_symmetric_images() {
    // operand occurrences contribute their groundings to the parent,
    // so the reversed pair materialises and derives even without the
    // full universe closure
    let text = "\
pred F/2
const u v w
axiom sym : ~F(x,y) | F(y,x)
fact F(u,v) : [1,1]
query rev : F(v,u)
";
    let kb = parse_kb::<f64>(text).expect("parses");
    let compile = CompileConfig {
        guided: true,
        ..CompileConfig::default()
    };
    let graph = NeuronGraph::compile(&kb, compile).expect("compiles");
    let model = ModelParams::from_graph(&graph);
    let mut eng = Engine::new(&graph, &model, InferConfig::default());
    let rep = eng.infer();
    let q = &rep.queries[0].answers[0];
    assert_eq!((q.lower, q.upper), (1.0, 1.0));
}

#[test]
fn reported_final_loss_is_reproducible() {
    // recomputing the composite loss from the trained parameters
    // reproduces the reported value
    let kb = read_kb_file("smokers5.kb");
    let graph = NeuronGraph::compile(&kb, CompileConfig::default()).expect("compiles");
    let cfg = TrainConfig {
        epochs: 30,
        factalign_over: LossSet::ObservedFacts,
        tightbounds_over: LossSet::AxiomRoots,
        ..TrainConfig::default()
    };
    let (report, model, _) = logicnet::learning::train(&graph, &cfg);
    let originals = ModelParams::from_graph(&graph);
    let mut eng = Engine::new(
        &graph,
        &model,
        InferConfig {
            epsilon: cfg.epsilon,
            max_iters: cfg.max_iters,
            w_min: cfg.w_min,
        },
    );
    eng.infer();
    let again = composite_loss(
        &mut eng,
        &originals,
        cfg.factalign_over,
        cfg.tightbounds_over,
        cfg.trainable,
    )
    .parts;
    assert!((again.loss - report.final_loss.loss).abs() < 1e-9);
    assert!((again.contradiction - report.final_loss.contradiction).abs() < 1e-9);
    assert!((again.factalign - report.final_loss.factalign).abs() < 1e-9);
    assert!((again.tightbounds - report.final_loss.tightbounds).abs() < 1e-9);
}

#[test]
fn guided_policy_answers_reachable_queries() {
    let text = "\
pred P/1
pred Q/1
const u v
axiom rule : P(x) -> Q(x)
fact P(u) : [1,1]
query goal : Q(u)
";
    let kb = parse_kb::<f64>(text).expect("parses");
    let compile = CompileConfig {
        guided: true,
        ..CompileConfig::default()
    };
    let graph = NeuronGraph::compile(&kb, compile).expect("compiles");
    let model = ModelParams::from_graph(&graph);
    let mut eng = Engine::new(&graph, &model, InferConfig::default());
    let rep = eng.infer();
    let q = &rep.queries[0].answers[0];
    assert_eq!((q.lower, q.upper), (1.0, 1.0));
    // and the graph stayed smaller than the naive closure
    let naive = NeuronGraph::compile(&kb, CompileConfig::default()).expect("compiles");
    assert!(graph.entry_count() < naive.entry_count());
}

#[test]
fn analytic_loss_gradient_matches_finite_difference() {
    // at a smooth, unclamped operating point the tape gradient of the
    // composite loss matches the full re-inference central difference
    let text = "\
pred x/0
pred y/0
axiom imp : x -> y : [0.85,1]
fact x() : [0.7,0.8]
fact y() : [0.1,0.6]
";
    let kb = parse_kb::<f64>(text).expect("parses");
    let compile = CompileConfig {
        alpha: 0.75,
        ..CompileConfig::default()
    };
    let graph = NeuronGraph::compile(&kb, compile).expect("compiles");
    let model = ModelParams::from_graph(&graph);
    let cfg = TrainConfig {
        factalign_over: LossSet::TrainableParams,
        tightbounds_over: LossSet::AxiomRoots,
        ..TrainConfig::default()
    };
    let trainable = cfg.trainable;
    let mut eng = Engine::tracked(&graph, &model, InferConfig::default(), trainable);
    eng.infer();
    let cl = composite_loss(&mut eng, &model, cfg.factalign_over, cfg.tightbounds_over, trainable);
    let adj = eng.tape.backward(cl.loss);
    let params = [
        (ParamRef::FactLower(0), eng.binds.fact_bounds[0].0),
        (ParamRef::FactUpper(0), eng.binds.fact_bounds[0].1),
        (ParamRef::FactLower(1), eng.binds.fact_bounds[1].0),
        (ParamRef::FactUpper(1), eng.binds.fact_bounds[1].1),
    ];
    for (pref, leaf) in params {
        let analytic = adj[leaf.index()];
        let (fd, one_sided) = finite_diff_gradient(&graph, &model, &model, &cfg, pref, 1e-6);
        assert!(!one_sided, "{:?} interior", pref);
        let err = (analytic - fd).abs() / analytic.abs().max(fd.abs()).max(1.0);
        assert!(
            err <= 1e-4,
            "{:?}: analytic {} vs finite difference {}",
            pref,
            analytic,
            fd
        );
    }
}

#[test]
fn transparent_gradient_diverges_from_oracle_in_clamped_region() {
    // with fully transparent clamping the loss keeps a gradient inside
    // the saturated region even though the value oracle is flat there;
    // the divergence is the documented behaviour, not an error
    let text = "\
pred a/0
pred b/0
axiom or1 : a | b : [0,0]
fact a() : [0.9,1]
fact b() : [0.9,1]
";
    let kb = parse_kb::<f64>(text).expect("parses");
    let graph = NeuronGraph::compile(&kb, CompileConfig::default()).expect("compiles");
    let model = ModelParams::from_graph(&graph);
    let cfg = TrainConfig {
        factalign_over: LossSet::TrainableParams,
        tightbounds_over: LossSet::AxiomRoots,
        ..TrainConfig::default()
    };
    let trainable = cfg.trainable;
    let mut eng = Engine::tracked(&graph, &model, InferConfig::default(), trainable);
    eng.infer();
    let cl = composite_loss(&mut eng, &model, cfg.factalign_over, cfg.tightbounds_over, trainable);
    let adj = eng.tape.backward(cl.loss);
    // the disjunction preactivates at 1.8, deep in the upper clamp:
    // perturbing a fact lower leaves the value oracle flat, while the
    // transparent tape still reports the path through the clamp
    let a_lower = eng.binds.fact_bounds[0].0;
    let analytic = adj[a_lower.index()];
    let (fd, _) = finite_diff_gradient(&graph, &model, &model, &cfg, ParamRef::FactLower(0), 1e-4);
    assert!(
        analytic.abs() > 1e-6,
        "transparent gradient survives saturation: {}",
        analytic
    );
    assert!(fd.abs() < 1e-9, "value oracle is flat in the clamp: {}", fd);
}

#[test]
fn classical_tables_hold_in_f32_too() {
    // the kernels are generic over the scalar; a classical sweep in f32
    // exercises that path
    use logicnet::semantics::{up_and, up_implies, up_or, ConnectiveParams};
    for family in [Family::Lukasiewicz, Family::Godel, Family::Tailored] {
        let params: ConnectiveParams<f32> = ConnectiveParams::unit(family, 1.0f32, 2);
        for mask in 0..4u32 {
            let xs = [
                Bounds::truth(if mask & 1 != 0 { 1.0f32 } else { 0.0 }),
                Bounds::truth(if mask & 2 != 0 { 1.0f32 } else { 0.0 }),
            ];
            let (lo, _) = up_and(&params, &xs);
            assert_eq!(lo.value, if mask == 3 { 1.0 } else { 0.0 });
            let (lo, _) = up_or(&params, &xs);
            assert_eq!(lo.value, if mask != 0 { 1.0 } else { 0.0 });
            let (lo, _) = up_implies(&params, xs[0], xs[1]);
            let want = if mask & 1 == 0 || mask & 2 != 0 { 1.0 } else { 0.0 };
            assert_eq!(lo.value, want);
        }
    }
}

#[test]
fn binary_decomposition_is_available_and_classical() {
    let kb = parse_kb::<f64>(
        "pred a/0\npred b/0\npred c/0\npred d/0\naxiom o : a | b | c -> d\nfact a() : [1,1]\nquery g : d\n",
    )
    .expect("parses");
    let mut kb2 = kb.clone();
    for ax in kb2.axioms.iter_mut() {
        ax.formula = logicnet::formula::decompose_binary(ax.formula.clone());
    }
    for (k, label) in [(kb, "nary"), (kb2, "binary")] {
        let graph = NeuronGraph::compile(&k, CompileConfig::default()).expect("compiles");
        let model = ModelParams::from_graph(&graph);
        let mut eng = Engine::new(&graph, &model, InferConfig::default());
        let rep = eng.infer();
        let q = &rep.queries[0].answers[0];
        assert_eq!((q.lower, q.upper), (1.0, 1.0), "{} decomposition", label);
    }
}

#[test]
fn kb_file_formats_are_stable() {
    // shipped knowledge bases parse, format, and re-parse identically
    for file in ["smokers5.kb", "smokers8.kb", "university.kb", "modus_ponens.kb"] {
        let kb = read_kb_file(file);
        let rendered = format_kb(&kb);
        let again = parse_kb::<f64>(&rendered).expect("round trip");
        assert_eq!(kb, again, "{}", file);
    }
}

#[test]
fn structural_counts_match_construction() {
    // one node per connective occurrence plus one per predicate: the
    // implication KB has two atoms and the implication itself
    let kb = parse_kb::<f64>("pred x/0\npred y/0\naxiom i : x -> y\nfact x() : [1,1]\n").unwrap();
    let graph = NeuronGraph::compile(&kb, CompileConfig::default()).unwrap();
    assert_eq!(graph.node_count(), 3);
    // empty KB compiles to an empty graph
    let empty = parse_kb::<f64>("").unwrap();
    let graph = NeuronGraph::compile(&empty, CompileConfig::default()).unwrap();
    assert_eq!(graph.node_count(), 0);
    // the smokers KB's size is fixed by construction: one atom node per
    // predicate, one alias-free root per axiom/query plus connectives
    let kb = read_kb_file("smokers8.kb");
    let graph = NeuronGraph::compile(&kb, CompileConfig::default()).unwrap();
    assert_eq!(graph.node_count(), 25);
    assert_eq!(graph.entry_count(), 9104);
}

#[test]
fn convergence_bound_matches_theorem() {
    // sum of per-iteration deltas is bounded by the total bounds travel
    let mut rng = SplitMix64::new(0xabcd_0003);
    for _ in 0..20 {
        let kb = consistent_kb(&mut rng);
        let graph = NeuronGraph::compile(&kb, CompileConfig::default()).unwrap();
        let model = ModelParams::from_graph(&graph);
        let mut eng = Engine::new(&graph, &model, InferConfig::default());
        let rep = eng.infer();
        assert!(rep.converged);
        let total: f64 = rep.deltas.iter().sum();
        assert!(total <= 2.0 * graph.entry_count() as f64 + 1e-9);
    }
}
