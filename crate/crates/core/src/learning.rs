//! Gradient-based training of connective weights and initial bounds.
//!
//! Each epoch resets bounds to the current trainable initial values,
//! runs inference to convergence on a recording tape, evaluates the
//! composite logical loss
//!
//! ```text
//! (1 + contradiction) / (1 + factalign + tightbounds)
//! ```
//!
//! back-propagates, clips gradients, steps with a linearly decaying
//! learning rate and projects parameters back into their domains.
//! The optimizer is plain projected gradient descent; the classical
//! parameter constraints remain available as a diagnostic through
//! [`check_constraints`].

use crate::autodiff::Tv;
use crate::bounds::Bounds;
use crate::graph::{NeuronGraph, NodeId, NodeKind};
use crate::inference::{ConvergenceReport, Engine, InferConfig, ModelParams, Trainable};
use crate::semantics::Family;
use crate::{lit, Real};
use serde::Serialize;

/// Node sets the loss expectations can run over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LossSet {
    /// The trainable fact/axiom bound parameters themselves.
    TrainableParams,
    /// Entries of predicate (atom) tables, compared to their initial
    /// assignment (given facts, unknown otherwise).
    FactTables,
    /// Predicate-table entries that carry information: given as facts
    /// or touched by inference. Groundings still at the open-world
    /// default are skipped.
    ObservedFacts,
    /// Entries of axiom root tables.
    AxiomRoots,
    /// Every grounding of every node.
    AllEntries,
}

impl LossSet {
    pub fn parse(s: &str) -> Option<LossSet> {
        match s {
            "params" | "trainable" => Some(LossSet::TrainableParams),
            "facts" | "fact_tables" => Some(LossSet::FactTables),
            "observed" | "observed_facts" => Some(LossSet::ObservedFacts),
            "axioms" | "axiom_roots" => Some(LossSet::AxiomRoots),
            "all" | "all_entries" => Some(LossSet::AllEntries),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TrainConfig<T> {
    pub epochs: usize,
    pub lr_start: T,
    pub lr_end: T,
    pub grad_clip: T,
    pub w_min: T,
    pub trainable: Trainable,
    pub weight_normalization: bool,
    pub epsilon: T,
    pub max_iters: usize,
    pub factalign_over: LossSet,
    pub tightbounds_over: LossSet,
    pub seed: u64,
}

impl<T: Real> Default for TrainConfig<T> {
    fn default() -> Self {
        TrainConfig {
            epochs: 100,
            lr_start: lit(0.1),
            lr_end: T::zero(),
            grad_clip: lit(0.1),
            w_min: lit(0.01),
            trainable: Trainable {
                weights: true,
                axiom_bounds: true,
                fact_bounds: true,
            },
            weight_normalization: true,
            epsilon: lit(1e-4),
            max_iters: 1000,
            factalign_over: LossSet::TrainableParams,
            tightbounds_over: LossSet::AllEntries,
            seed: 0,
        }
    }
}

/// Loss component values for one evaluation.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LossParts<T> {
    pub loss: T,
    pub contradiction: T,
    pub factalign: T,
    pub tightbounds: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct EpochRow<T> {
    pub epoch: usize,
    pub loss: T,
    pub contradiction: T,
    pub factalign: T,
    pub tightbounds: T,
    pub contradiction_count: usize,
    pub learning_rate: T,
    pub inference_converged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamsDump<T> {
    /// `(node, operand, weight)` for every connective operand.
    pub weights: Vec<(NodeId, usize, T)>,
    pub axiom_bounds: Vec<(String, T, T)>,
    pub fact_bounds: Vec<(String, Vec<String>, T, T)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrainReport<T> {
    pub seed: u64,
    pub epochs: Vec<EpochRow<T>>,
    pub final_loss: LossParts<T>,
    /// Crossed entries remaining in the penalised node set (what the
    /// objective optimises); inference reports count every node.
    pub final_contradiction_count: usize,
    pub final_params: ParamsDump<T>,
}

/// Sum of `max(0, L - U)` over the penalised nodes and groundings, on
/// the engine's tape. Intra-classical crossings are excluded under the
/// tailored family, where they no longer signal disagreement.
/// Quantifier nodes sit outside the penalised set: they are
/// parameterless pass-throughs, and a crossing there echoes the state
/// of the grounding table they aggregate. Reports still count them.
pub fn contradiction_loss<T: Real>(eng: &mut Engine<'_, T>) -> Tv {
    let tailored = matches!(
        eng.graph.config.family,
        Family::Tailored | Family::Logistic
    );
    let alpha = eng.graph.config.alpha;
    let mut total = eng.tape.leaf(T::zero());
    for node in 0..eng.graph.nodes.len() {
        if matches!(
            eng.graph.nodes[node].kind,
            NodeKind::ForAll | NodeKind::Exists
        ) {
            continue;
        }
        for entry in 0..eng.graph.nodes[node].tuples.len() {
            let b = eng.bounds(node, entry);
            if !b.is_contradictory() {
                continue;
            }
            if tailored && b.is_intra_classical(alpha) {
                continue;
            }
            let tb = eng.state_bounds(node, entry);
            let gap = eng.tape.sub(tb.lower, tb.upper);
            let term = eng.tape.relu(gap);
            total = eng.tape.add(total, term);
        }
    }
    total
}

/// Initial bounds an entry started the epoch with (given facts, axiom
/// assertions, unknown otherwise), as plain values.
fn initial_bounds<T: Real>(graph: &NeuronGraph<T>, node: NodeId, entry: usize) -> Bounds<T> {
    for f in &graph.facts {
        if f.node == node && f.entry == entry {
            return f.bounds;
        }
    }
    for r in &graph.roots {
        if r.node == node {
            if let Some(b) = r.bounds {
                return b;
            }
        }
    }
    Bounds::unknown()
}

fn set_members<T: Real>(eng: &Engine<'_, T>, set: LossSet) -> Vec<(NodeId, usize)> {
    let graph = eng.graph;
    let mut out = Vec::new();
    match set {
        LossSet::TrainableParams => unreachable!("handled separately"),
        LossSet::FactTables => {
            for (&node, _) in graph.atom_nodes.iter().map(|(_, n)| (n, ())) {
                for entry in 0..graph.nodes[node].tuples.len() {
                    out.push((node, entry));
                }
            }
        }
        LossSet::ObservedFacts => {
            for (&node, _) in graph.atom_nodes.iter().map(|(_, n)| (n, ())) {
                for entry in 0..graph.nodes[node].tuples.len() {
                    let b = eng.bounds(node, entry);
                    let given = graph.facts.iter().any(|f| f.node == node && f.entry == entry);
                    if given || b.lower > T::zero() || b.upper < T::one() {
                        out.push((node, entry));
                    }
                }
            }
        }
        LossSet::AxiomRoots => {
            for r in graph.roots.iter().filter(|r| r.bounds.is_some()) {
                for entry in 0..graph.nodes[r.node].tuples.len() {
                    out.push((r.node, entry));
                }
            }
        }
        LossSet::AllEntries => {
            for node in 0..graph.nodes.len() {
                for entry in 0..graph.nodes[node].tuples.len() {
                    out.push((node, entry));
                }
            }
        }
    }
    out
}

/// `E[|L' - L| + |U' - U|]` over the configured set. For the
/// trainable-parameter set, `trainable` selects which groups count.
pub fn factalign_loss<T: Real>(
    eng: &mut Engine<'_, T>,
    originals: &ModelParams<T>,
    set: LossSet,
    trainable: Trainable,
) -> Tv {
    let mut total = eng.tape.leaf(T::zero());
    let mut count = 0usize;
    if set == LossSet::TrainableParams {
        if trainable.fact_bounds {
            for (i, &(lo, hi)) in eng.binds.fact_bounds.clone().iter().enumerate() {
                let orig = originals.fact_bounds[i];
                let dl = eng.tape.add_const(lo, -orig.lower);
                let dl = eng.tape.abs(dl);
                let du = eng.tape.add_const(hi, -orig.upper);
                let du = eng.tape.abs(du);
                let s = eng.tape.add(dl, du);
                total = eng.tape.add(total, s);
                count += 1;
            }
        }
        if trainable.axiom_bounds {
            for (i, b) in eng.binds.axiom_bounds.clone().iter().enumerate() {
                if let (Some((lo, hi)), Some(orig)) = (b, originals.axiom_bounds[i]) {
                    let dl = eng.tape.add_const(*lo, -orig.lower);
                    let dl = eng.tape.abs(dl);
                    let du = eng.tape.add_const(*hi, -orig.upper);
                    let du = eng.tape.abs(du);
                    let s = eng.tape.add(dl, du);
                    total = eng.tape.add(total, s);
                    count += 1;
                }
            }
        }
    } else {
        for (node, entry) in set_members(eng, set) {
            let init = initial_bounds(eng.graph, node, entry);
            let tb = eng.state_bounds(node, entry);
            let dl = eng.tape.add_const(tb.lower, -init.lower);
            let dl = eng.tape.abs(dl);
            let du = eng.tape.add_const(tb.upper, -init.upper);
            let du = eng.tape.abs(du);
            let s = eng.tape.add(dl, du);
            total = eng.tape.add(total, s);
            count += 1;
        }
    }
    if count > 1 {
        eng.tape.scale(total, T::one() / lit(count as f64))
    } else {
        total
    }
}

/// `E[exp(L - U)]` over the configured set, skipping contradictory
/// entries (their separation is owned by the contradiction term).
pub fn tightbounds_loss<T: Real>(eng: &mut Engine<'_, T>, set: LossSet) -> Tv {
    let members = if set == LossSet::TrainableParams {
        Vec::new()
    } else {
        set_members(eng, set)
    };
    let mut total = eng.tape.leaf(T::zero());
    let mut count = 0usize;
    if set == LossSet::TrainableParams {
        for &(lo, hi) in eng.binds.fact_bounds.clone().iter() {
            let gap = eng.tape.sub(lo, hi);
            let e = eng.tape.exp(gap);
            total = eng.tape.add(total, e);
            count += 1;
        }
    } else {
        for (node, entry) in members {
            let b = eng.bounds(node, entry);
            if b.is_contradictory() {
                continue;
            }
            let tb = eng.state_bounds(node, entry);
            let gap = eng.tape.sub(tb.lower, tb.upper);
            let e = eng.tape.exp(gap);
            total = eng.tape.add(total, e);
            count += 1;
        }
    }
    if count > 1 {
        eng.tape.scale(total, T::one() / lit(count as f64))
    } else {
        total
    }
}

/// Tape handles for the composite loss and its components.
pub struct CompositeLoss<T> {
    pub loss: Tv,
    pub contradiction: Tv,
    pub factalign: Tv,
    pub tightbounds: Tv,
    pub parts: LossParts<T>,
}

/// The composite loss `(1 + contradiction) / (1 + factalign +
/// tightbounds)`, on the tape.
pub fn composite_loss<T: Real>(
    eng: &mut Engine<'_, T>,
    originals: &ModelParams<T>,
    factalign_over: LossSet,
    tightbounds_over: LossSet,
    trainable: Trainable,
) -> CompositeLoss<T> {
    let c = contradiction_loss(eng);
    let fa = factalign_loss(eng, originals, factalign_over, trainable);
    let tb = tightbounds_loss(eng, tightbounds_over);
    let num = eng.tape.add_const(c, T::one());
    let den0 = eng.tape.add(fa, tb);
    let den = eng.tape.add_const(den0, T::one());
    let loss = eng.tape.div(num, den);
    let parts = LossParts {
        loss: eng.tape.val(loss),
        contradiction: eng.tape.val(c),
        factalign: eng.tape.val(fa),
        tightbounds: eng.tape.val(tb),
    };
    CompositeLoss {
        loss,
        contradiction: c,
        factalign: fa,
        tightbounds: tb,
        parts,
    }
}

/// One classical-behaviour constraint with its margin; negative
/// margins are violations and `required_slack` is what a slack
/// variable would have to absorb.
#[derive(Clone, Debug, Serialize)]
pub struct ConstraintCheck<T> {
    pub node: NodeId,
    pub kind: NodeKind,
    pub constraint: String,
    pub margin: T,
    pub satisfied: bool,
    pub required_slack: T,
}

/// Evaluate the classical-input constraints for every connective.
/// Disjunctions and implications use the disjunction form
/// (`alpha w_i - beta + 1 >= alpha` per operand and
/// `sum (1 - alpha) w_i - beta + 1 <= 1 - alpha`), conjunctions the
/// De Morgan image.
pub fn check_constraints<T: Real>(
    graph: &NeuronGraph<T>,
    model: &ModelParams<T>,
    alpha: T,
) -> Vec<ConstraintCheck<T>> {
    let mut out = Vec::new();
    for (id, node) in graph.nodes.iter().enumerate() {
        let kind = node.kind;
        if !matches!(kind, NodeKind::And | NodeKind::Or | NodeKind::Implies) {
            continue;
        }
        let ws = &model.weights[id];
        let beta = model.biases[id];
        let co = T::one() - alpha;
        match kind {
            NodeKind::And => {
                for (i, &w) in ws.iter().enumerate() {
                    let margin = co - (beta - w * alpha);
                    out.push(check(id, kind, format!("false_if_operand_{}_false", i), margin));
                }
                let sum = ws.iter().fold(T::zero(), |a, &w| a + w);
                let margin = (beta - sum * co) - alpha;
                out.push(check(id, kind, "true_if_all_true".to_string(), margin));
            }
            _ => {
                for (i, &w) in ws.iter().enumerate() {
                    let margin = (alpha * w - beta + T::one()) - alpha;
                    out.push(check(id, kind, format!("true_if_operand_{}_true", i), margin));
                }
                let sum = ws.iter().fold(T::zero(), |a, &w| a + w);
                let margin = co - (sum * co - beta + T::one());
                out.push(check(id, kind, "false_if_all_false".to_string(), margin));
            }
        }
    }
    out
}

fn check<T: Real>(node: NodeId, kind: NodeKind, constraint: String, margin: T) -> ConstraintCheck<T> {
    ConstraintCheck {
        node,
        kind,
        constraint,
        margin,
        satisfied: margin >= T::zero(),
        required_slack: (-margin).max(T::zero()),
    }
}

/// Identifies one scalar parameter for the finite-difference oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ParamRef {
    Weight { node: NodeId, operand: usize },
    AxiomLower(usize),
    AxiomUpper(usize),
    FactLower(usize),
    FactUpper(usize),
}

fn param_get<T: Real>(model: &ModelParams<T>, p: ParamRef) -> T {
    match p {
        ParamRef::Weight { node, operand } => model.weights[node][operand],
        ParamRef::AxiomLower(i) => model.axiom_bounds[i].unwrap().lower,
        ParamRef::AxiomUpper(i) => model.axiom_bounds[i].unwrap().upper,
        ParamRef::FactLower(i) => model.fact_bounds[i].lower,
        ParamRef::FactUpper(i) => model.fact_bounds[i].upper,
    }
}

fn param_set<T: Real>(model: &mut ModelParams<T>, p: ParamRef, v: T) {
    match p {
        ParamRef::Weight { node, operand } => model.weights[node][operand] = v,
        ParamRef::AxiomLower(i) => {
            let b = model.axiom_bounds[i].unwrap();
            model.axiom_bounds[i] = Some(Bounds::new(v, b.upper));
        }
        ParamRef::AxiomUpper(i) => {
            let b = model.axiom_bounds[i].unwrap();
            model.axiom_bounds[i] = Some(Bounds::new(b.lower, v));
        }
        ParamRef::FactLower(i) => model.fact_bounds[i].lower = v,
        ParamRef::FactUpper(i) => model.fact_bounds[i].upper = v,
    }
}

fn loss_at<T: Real>(
    graph: &NeuronGraph<T>,
    model: &ModelParams<T>,
    originals: &ModelParams<T>,
    cfg: &TrainConfig<T>,
) -> T {
    let infer_cfg = InferConfig {
        epsilon: cfg.epsilon,
        max_iters: cfg.max_iters,
        w_min: cfg.w_min,
    };
    let mut eng = Engine::new(graph, model, infer_cfg);
    eng.infer();
    let cl = composite_loss(&mut eng, originals, cfg.factalign_over, cfg.tightbounds_over, cfg.trainable);
    cl.parts.loss
}

/// Central finite difference of the composite loss with full
/// re-inference at each evaluation. Falls back to a one-sided
/// difference at a domain boundary; the second return value flags it.
pub fn finite_diff_gradient<T: Real>(
    graph: &NeuronGraph<T>,
    model: &ModelParams<T>,
    originals: &ModelParams<T>,
    cfg: &TrainConfig<T>,
    param: ParamRef,
    h: T,
) -> (T, bool) {
    let v = param_get(model, param);
    let (domain_lo, domain_hi) = match param {
        ParamRef::Weight { .. } => (T::zero(), T::infinity()),
        _ => (T::zero(), T::one()),
    };
    let lo_ok = v - h >= domain_lo;
    let hi_ok = v + h <= domain_hi;
    let eval = |x: T| -> T {
        let mut m = model.clone();
        param_set(&mut m, param, x);
        loss_at(graph, &m, originals, cfg)
    };
    if lo_ok && hi_ok {
        let two = T::one() + T::one();
        ((eval(v + h) - eval(v - h)) / (two * h), false)
    } else if hi_ok {
        ((eval(v + h) - eval(v)) / h, true)
    } else {
        ((eval(v) - eval(v - h)) / h, true)
    }
}

fn learning_rate<T: Real>(cfg: &TrainConfig<T>, epoch: usize) -> T {
    if cfg.epochs == 0 {
        return cfg.lr_start;
    }
    let t = lit::<T>(epoch as f64 / cfg.epochs as f64);
    cfg.lr_start + (cfg.lr_end - cfg.lr_start) * t
}

/// Run projected gradient descent over the selected parameter groups.
pub fn train<T: Real>(
    graph: &NeuronGraph<T>,
    cfg: &TrainConfig<T>,
) -> (TrainReport<T>, ModelParams<T>, ConvergenceReport<T>) {
    let originals = ModelParams::from_graph(graph);
    let mut model = originals.clone();
    let infer_cfg = InferConfig {
        epsilon: cfg.epsilon,
        max_iters: cfg.max_iters,
        w_min: cfg.w_min,
    };
    let mut rows = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        let mut eng = Engine::tracked(graph, &model, infer_cfg, cfg.trainable);
        let inf = eng.infer();
        let cl = composite_loss(
            &mut eng,
            &originals,
            cfg.factalign_over,
            cfg.tightbounds_over,
            cfg.trainable,
        );
        let parts = cl.parts;
        // The denominator normalises the objective but does not drive
        // updates: parameters move only to remove contradiction, scaled
        // by the current normaliser. Backpropagating through the
        // denominator would reward drifting away from the facts even
        // after consistency is reached.
        let scale = T::one() / (T::one() + parts.factalign + parts.tightbounds);
        let adj = eng.tape.backward(cl.contradiction);
        let lr = learning_rate(cfg, epoch);
        rows.push(EpochRow {
            epoch,
            loss: parts.loss,
            contradiction: parts.contradiction,
            factalign: parts.factalign,
            tightbounds: parts.tightbounds,
            contradiction_count: inf.contradiction_count,
            learning_rate: lr,
            inference_converged: inf.converged,
        });
        // clip the normalised gradient, then apply the scheduled rate
        let step = |g: T| lr * (g * scale).max(-cfg.grad_clip).min(cfg.grad_clip);
        if cfg.trainable.weights {
            for node in 0..graph.nodes.len() {
                for i in 0..model.weights[node].len() {
                    let leaf = eng.binds.weights[node][i];
                    model.weights[node][i] = model.weights[node][i] - step(adj[leaf.index()]);
                }
            }
        }
        if cfg.trainable.axiom_bounds {
            for (r, b) in eng.binds.axiom_bounds.iter().enumerate() {
                if let (Some((lo, hi)), Some(bounds)) = (b, model.axiom_bounds[r]) {
                    model.axiom_bounds[r] = Some(Bounds::new(
                        bounds.lower - step(adj[lo.index()]),
                        bounds.upper - step(adj[hi.index()]),
                    ));
                }
            }
        }
        if cfg.trainable.fact_bounds {
            for (i, &(lo, hi)) in eng.binds.fact_bounds.iter().enumerate() {
                model.fact_bounds[i].lower = model.fact_bounds[i].lower - step(adj[lo.index()]);
                model.fact_bounds[i].upper = model.fact_bounds[i].upper - step(adj[hi.index()]);
            }
        }
        project(graph, &mut model, cfg);
    }
    // final evaluation at the trained parameters
    let mut eng = Engine::new(graph, &model, infer_cfg);
    let inf = eng.infer();
    let final_parts = composite_loss(
        &mut eng,
        &originals,
        cfg.factalign_over,
        cfg.tightbounds_over,
        cfg.trainable,
    )
    .parts;
    let penalized = penalized_contradictions(&eng);
    let report = TrainReport {
        seed: cfg.seed,
        epochs: rows,
        final_loss: final_parts,
        final_contradiction_count: penalized,
        final_params: dump_params(graph, &model),
    };
    (report, model, inf)
}

/// Count of crossed entries in the node set the contradiction loss
/// penalises (every node except the quantifier pass-throughs).
pub fn penalized_contradictions<T: Real>(eng: &Engine<'_, T>) -> usize {
    let tailored = matches!(
        eng.graph.config.family,
        Family::Tailored | Family::Logistic
    );
    let alpha = eng.graph.config.alpha;
    let mut count = 0;
    for node in 0..eng.graph.nodes.len() {
        if matches!(
            eng.graph.nodes[node].kind,
            NodeKind::ForAll | NodeKind::Exists
        ) {
            continue;
        }
        for entry in 0..eng.graph.nodes[node].tuples.len() {
            let b = eng.bounds(node, entry);
            if b.is_contradictory() && !(tailored && b.is_intra_classical(alpha)) {
                count += 1;
            }
        }
    }
    count
}

/// Project parameters back into their domains: weights to
/// `[w_min, 1]` (optionally rescaled by `w_max` first), bounds to
/// `[0, 1]`; crossed trainable fact bounds collapse to their midpoint.
fn project<T: Real>(graph: &NeuronGraph<T>, model: &mut ModelParams<T>, cfg: &TrainConfig<T>) {
    if cfg.trainable.weights {
        for node in 0..graph.nodes.len() {
            let ws = &mut model.weights[node];
            if ws.is_empty() {
                continue;
            }
            if cfg.weight_normalization {
                let wmax = ws.iter().fold(T::zero(), |a, &w| a.max(w));
                if wmax > T::one() {
                    for w in ws.iter_mut() {
                        *w = *w / wmax;
                    }
                }
            }
            for w in ws.iter_mut() {
                *w = (*w).max(cfg.w_min).min(T::one());
            }
        }
    }
    if cfg.trainable.axiom_bounds {
        for b in model.axiom_bounds.iter_mut().flatten() {
            b.lower = b.lower.max(T::zero()).min(T::one());
            b.upper = b.upper.max(T::zero()).min(T::one());
        }
    }
    if cfg.trainable.fact_bounds {
        let half = lit::<T>(0.5);
        for b in model.fact_bounds.iter_mut() {
            b.lower = b.lower.max(T::zero()).min(T::one());
            b.upper = b.upper.max(T::zero()).min(T::one());
            if b.lower > b.upper {
                let mid = (b.lower + b.upper) * half;
                b.lower = mid;
                b.upper = mid;
            }
        }
    }
}

fn dump_params<T: Real>(graph: &NeuronGraph<T>, model: &ModelParams<T>) -> ParamsDump<T> {
    let mut weights = Vec::new();
    for (node, ws) in model.weights.iter().enumerate() {
        for (i, &w) in ws.iter().enumerate() {
            weights.push((node, i, w));
        }
    }
    let axiom_bounds = graph
        .roots
        .iter()
        .zip(&model.axiom_bounds)
        .filter_map(|(r, b)| b.map(|b| (r.id.clone(), b.lower, b.upper)))
        .collect();
    let fact_bounds = graph
        .facts
        .iter()
        .zip(&model.fact_bounds)
        .map(|(f, b)| {
            let node = &graph.nodes[f.node];
            (
                node.label.clone(),
                graph.tuple_names(&node.tuples[f.entry]),
                b.lower,
                b.upper,
            )
        })
        .collect();
    ParamsDump {
        weights,
        axiom_bounds,
        fact_bounds,
    }
}
