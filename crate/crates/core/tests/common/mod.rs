//! Shared generators and oracles for the integration suites.

use logicnet::bounds::Bounds;
use logicnet::formula::{Axiom, Fact, Formula, KnowledgeBase, Weighted};
use logicnet::rng::SplitMix64;

pub fn kb_path(name: &str) -> String {
    format!("{}/../../kb/{}", env!("CARGO_MANIFEST_DIR"), name)
}

pub fn read_kb_file(name: &str) -> KnowledgeBase<f64> {
    let text = std::fs::read_to_string(kb_path(name)).expect("kb file exists");
    logicnet::parse::parse_kb(&text).expect("kb parses")
}

/// Random propositional formula over `n` nullary predicates.
pub fn random_formula(rng: &mut SplitMix64, n: usize, depth: usize) -> Formula<f64> {
    let atom = |rng: &mut SplitMix64| Formula::<f64>::atom(&format!("p{}", rng.below(n)), &[]);
    if depth == 0 || rng.chance(0.4) {
        return atom(rng);
    }
    match rng.below(4) {
        0 => Formula::Not(Box::new(random_formula(rng, n, depth - 1))),
        1 | 2 => {
            let arity = 2 + rng.below(2);
            let operands = (0..arity)
                .map(|_| Weighted {
                    weight: 1.0,
                    formula: random_formula(rng, n, depth - 1),
                })
                .collect();
            if rng.chance(0.5) {
                Formula::And { operands, bias: 1.0 }
            } else {
                Formula::Or { operands, bias: 1.0 }
            }
        }
        _ => Formula::Implies {
            antecedent: Box::new(Weighted {
                weight: 1.0,
                formula: random_formula(rng, n, depth - 1),
            }),
            consequent: Box::new(Weighted {
                weight: 1.0,
                formula: random_formula(rng, n, depth - 1),
            }),
            bias: 1.0,
        },
    }
}

/// Classical evaluation of a propositional formula under a bitmask
/// interpretation (predicate `p<i>` is bit `i`).
pub fn eval_classical(f: &Formula<f64>, interp: u32) -> bool {
    match f {
        Formula::Atom { pred, .. } => {
            let i: u32 = pred[1..].parse().expect("p<i> atom");
            interp & (1 << i) != 0
        }
        Formula::Not(c) => !eval_classical(c, interp),
        Formula::And { operands, .. } => operands.iter().all(|w| eval_classical(&w.formula, interp)),
        Formula::Or { operands, .. } => operands.iter().any(|w| eval_classical(&w.formula, interp)),
        Formula::Implies { antecedent, consequent, .. } => {
            !eval_classical(&antecedent.formula, interp)
                || eval_classical(&consequent.formula, interp)
        }
        _ => unreachable!("propositional formulae only"),
    }
}

/// A random satisfiable classical KB: formulas are generated freely
/// and negated when false under a hidden model, so the model always
/// satisfies every axiom and fact.
pub fn random_satisfiable_kb(
    rng: &mut SplitMix64,
    n_atoms: usize,
    n_axioms: usize,
) -> (KnowledgeBase<f64>, u32) {
    let model: u32 = (rng.next_u64() as u32) & ((1 << n_atoms) - 1);
    let mut kb = KnowledgeBase::<f64>::default();
    for i in 0..n_atoms {
        kb.predicates.insert(format!("p{}", i), 0);
    }
    for a in 0..n_axioms {
        let f = random_formula(rng, n_atoms, 3);
        let f = if eval_classical(&f, model) {
            f
        } else {
            Formula::Not(Box::new(f))
        };
        kb.axioms.push(Axiom {
            id: format!("ax{}", a),
            formula: f,
            bounds: Bounds::new(1.0, 1.0),
        });
    }
    // reveal a random subset of atom values as facts
    for i in 0..n_atoms {
        if rng.chance(0.4) {
            let v = if model & (1 << i) != 0 { 1.0 } else { 0.0 };
            kb.add_fact(Fact {
                pred: format!("p{}", i),
                args: vec![],
                bounds: Bounds::new(v, v),
            });
        }
    }
    (kb, model)
}

/// All interpretations satisfying every axiom and fact classically.
pub fn classical_models(kb: &KnowledgeBase<f64>, n_atoms: usize) -> Vec<u32> {
    let mut out = Vec::new();
    'outer: for interp in 0..(1u32 << n_atoms) {
        for ax in &kb.axioms {
            if !eval_classical(&ax.formula, interp) {
                continue 'outer;
            }
        }
        for fact in &kb.facts {
            let i: u32 = fact.pred[1..].parse().unwrap();
            let val = interp & (1 << i) != 0;
            if fact.bounds.lower >= 0.5 && !val {
                continue 'outer;
            }
            if fact.bounds.upper <= 0.5 && val {
                continue 'outer;
            }
        }
        out.push(interp);
    }
    out
}
