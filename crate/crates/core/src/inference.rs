//! The upward-downward recurrent inference procedure.
//!
//! Each pass walks every root's syntax tree: upward evaluates
//! connectives from operand bounds, downward applies the inverse rules
//! to tighten operand bounds from connective bounds. Proof aggregation
//! only ever tightens, so bounds sequences are monotone and the loop
//! converges; iteration stops when the aggregate bounds change drops
//! to `epsilon`.
//!
//! Downward propagation is withheld from entries whose bounds are
//! already crossed: a contradiction stays recorded where the clash
//! happened instead of bulldozing every bound beneath it, which keeps
//! inconsistencies attributable to the axiom that caused them.
//!
//! During training the engine runs on a recording tape, so every bound
//! it produces carries its computation history.

use crate::autodiff::{Tape, Tv, TvBounds};
use crate::bounds::{Bounds, TruthState};
use crate::fol::{quantify_upward, Quantifier};
use crate::graph::{NeuronGraph, NodeId, NodeKind, OperandEntry, RootInfo};
use crate::semantics::{self, ConnectiveParams, Downward, Wrt};
use crate::{lit, Real};
use serde::Serialize;

/// Current parameter values for a compiled graph. Compilation freezes
/// the structure; these values are what learning updates between
/// epochs.
#[derive(Clone, Debug)]
pub struct ModelParams<T> {
    /// Per node: operand weights (empty for parameterless nodes).
    pub weights: Vec<Vec<T>>,
    /// Per node: bias.
    pub biases: Vec<T>,
    /// Per root: initial bounds (axioms only; `None` for queries).
    pub axiom_bounds: Vec<Option<Bounds<T>>>,
    /// Per compiled fact: initial bounds.
    pub fact_bounds: Vec<Bounds<T>>,
}

impl<T: Real> ModelParams<T> {
    pub fn from_graph(g: &NeuronGraph<T>) -> Self {
        ModelParams {
            weights: g
                .nodes
                .iter()
                .map(|n| n.params.as_ref().map(|p| p.weights.clone()).unwrap_or_default())
                .collect(),
            biases: g
                .nodes
                .iter()
                .map(|n| n.params.as_ref().map(|p| p.beta).unwrap_or_else(T::one))
                .collect(),
            axiom_bounds: g.roots.iter().map(|r| r.bounds).collect(),
            fact_bounds: g.facts.iter().map(|f| f.bounds).collect(),
        }
    }
}

/// Which parameter groups are registered on the tape as trainable
/// leaves.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Trainable {
    pub weights: bool,
    pub axiom_bounds: bool,
    pub fact_bounds: bool,
}

/// Tape leaves for the trainable parameters.
#[derive(Clone, Debug, Default)]
pub struct ParamBinds {
    pub weights: Vec<Vec<Tv>>,
    pub axiom_bounds: Vec<Option<(Tv, Tv)>>,
    pub fact_bounds: Vec<(Tv, Tv)>,
    pub trainable: Trainable,
}

#[derive(Clone, Copy, Debug)]
pub struct InferConfig<T> {
    pub epsilon: T,
    pub max_iters: usize,
    /// Downward rules offer no proof through operands lighter than this.
    pub w_min: T,
}

impl<T: Real> Default for InferConfig<T> {
    fn default() -> Self {
        InferConfig {
            epsilon: lit(1e-4),
            max_iters: 1000,
            w_min: lit(0.01),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContradictionEntry<T> {
    pub node: NodeId,
    pub axiom: Option<String>,
    pub grounding: Vec<String>,
    pub lower: T,
    pub upper: T,
    /// Both bounds on the same classical side; the tailored family
    /// does not treat these as real contradictions.
    pub intra_classical: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QueryAnswer<T> {
    pub id: String,
    pub answers: Vec<GroundingAnswer<T>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroundingAnswer<T> {
    pub grounding: Vec<String>,
    pub lower: T,
    pub upper: T,
    pub state: TruthState,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomSummary<T> {
    pub id: String,
    /// Componentwise minimum over the root's groundings (the
    /// universal reading of a free-variable axiom).
    pub lower: T,
    pub upper: T,
    pub contradictions: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport<T> {
    pub iterations: usize,
    pub converged: bool,
    /// Aggregate `sum(|dL| + |dU|)` per iteration.
    pub deltas: Vec<T>,
    pub contradiction_count: usize,
    pub contradiction_sum: T,
    pub contradictions: Vec<ContradictionEntry<T>>,
    pub axioms: Vec<AxiomSummary<T>>,
    pub queries: Vec<QueryAnswer<T>>,
}

/// One inference run over a compiled graph. Owns the tape and the
/// per-entry bounds state; not reentrant.
pub struct Engine<'g, T> {
    pub graph: &'g NeuronGraph<T>,
    pub config: InferConfig<T>,
    pub tape: Tape<T>,
    pub binds: ParamBinds,
    /// Effective connective parameters for this run (current weights).
    params: Vec<Option<ConnectiveParams<T>>>,
    /// Bounds state per node per entry.
    state: Vec<Vec<TvBounds>>,
    /// Iteration stamp of the last change per node per entry.
    stamp: Vec<Vec<u32>>,
    iter: u32,
    delta: T,
}

impl<'g, T: Real> Engine<'g, T> {
    /// Build an engine with an untracked tape (pure inference).
    pub fn new(graph: &'g NeuronGraph<T>, model: &ModelParams<T>, config: InferConfig<T>) -> Self {
        Self::with_tape(graph, model, config, Tape::new(false), Trainable::default())
    }

    /// Build an engine on a recording tape with the selected parameter
    /// groups registered as leaves.
    pub fn tracked(
        graph: &'g NeuronGraph<T>,
        model: &ModelParams<T>,
        config: InferConfig<T>,
        trainable: Trainable,
    ) -> Self {
        Self::with_tape(graph, model, config, Tape::new(true), trainable)
    }

    fn with_tape(
        graph: &'g NeuronGraph<T>,
        model: &ModelParams<T>,
        config: InferConfig<T>,
        mut tape: Tape<T>,
        trainable: Trainable,
    ) -> Self {
        let mut binds = ParamBinds {
            trainable,
            ..ParamBinds::default()
        };
        // parameter leaves first so their adjoints are easy to read off
        binds.weights = model
            .weights
            .iter()
            .map(|ws| ws.iter().map(|&w| tape.leaf(w)).collect())
            .collect();
        binds.axiom_bounds = model
            .axiom_bounds
            .iter()
            .map(|b| b.map(|b| (tape.leaf(b.lower), tape.leaf(b.upper))))
            .collect();
        binds.fact_bounds = model
            .fact_bounds
            .iter()
            .map(|b| (tape.leaf(b.lower), tape.leaf(b.upper)))
            .collect();
        let params = graph
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                n.params.as_ref().map(|p| ConnectiveParams {
                    family: p.family,
                    alpha: p.alpha,
                    beta: model.biases[i],
                    weights: model.weights[i].clone(),
                    grad_scale: p.grad_scale,
                })
            })
            .collect();
        let mut eng = Engine {
            graph,
            config,
            tape,
            binds,
            params,
            state: Vec::new(),
            stamp: Vec::new(),
            iter: 0,
            delta: T::zero(),
        };
        eng.reset();
        eng
    }

    /// Initialise bounds: unknown everywhere, facts at their initial
    /// bounds, axiom roots at theirs (shared across groundings so
    /// gradients accumulate).
    fn reset(&mut self) {
        let zero = self.tape.leaf(T::zero());
        let one = self.tape.leaf(T::one());
        self.state = self
            .graph
            .nodes
            .iter()
            .map(|n| vec![TvBounds { lower: zero, upper: one }; n.tuples.len()])
            .collect();
        self.stamp = self
            .graph
            .nodes
            .iter()
            .map(|n| vec![0u32; n.tuples.len()])
            .collect();
        for (i, fact) in self.graph.facts.iter().enumerate() {
            let (lo, hi) = self.binds.fact_bounds[i];
            self.state[fact.node][fact.entry] = TvBounds { lower: lo, upper: hi };
        }
        for (r, root) in self.graph.roots.iter().enumerate() {
            if let Some((lo, hi)) = self.binds.axiom_bounds[r] {
                for e in self.state[root.node].iter_mut() {
                    *e = TvBounds { lower: lo, upper: hi };
                }
            }
        }
    }

    #[inline]
    pub fn bounds(&self, node: NodeId, entry: usize) -> Bounds<T> {
        let tb = self.state[node][entry];
        Bounds::new(self.tape.val(tb.lower), self.tape.val(tb.upper))
    }

    /// Tape handles for an entry's bounds (loss construction).
    #[inline]
    pub fn state_bounds(&self, node: NodeId, entry: usize) -> TvBounds {
        self.state[node][entry]
    }

    #[inline]
    fn tv_bounds(&self, node: NodeId, entry: usize) -> TvBounds {
        self.state[node][entry]
    }

    fn aggregate_lower(&mut self, node: NodeId, entry: usize, proposal: Tv) {
        let cur = self.state[node][entry].lower;
        let (old, new) = (self.tape.val(cur), self.tape.val(proposal));
        if new > old {
            self.state[node][entry].lower = proposal;
            self.stamp[node][entry] = self.iter;
            self.delta = self.delta + (new - old);
        }
    }

    fn aggregate_upper(&mut self, node: NodeId, entry: usize, proposal: Tv) {
        let cur = self.state[node][entry].upper;
        let (old, new) = (self.tape.val(cur), self.tape.val(proposal));
        if new < old {
            self.state[node][entry].upper = proposal;
            self.stamp[node][entry] = self.iter;
            self.delta = self.delta + (old - new);
        }
    }

    fn dirty(&self, node: NodeId, entry: usize) -> bool {
        self.stamp[node][entry] + 1 >= self.iter
    }

    /// Leaves-to-root evaluation under one root.
    pub fn upward_pass(&mut self, root: NodeId) {
        let mut seen = vec![false; self.graph.nodes.len()];
        self.upward(root, &mut seen);
    }

    /// Root-to-leaves inverse-rule application under one root.
    pub fn downward_pass(&mut self, root: NodeId) {
        let mut seen = vec![false; self.graph.nodes.len()];
        self.downward(root, &mut seen);
    }

    /// One full pass: upward then downward over every root, in order.
    /// Returns the aggregate bounds change.
    pub fn step(&mut self) -> T {
        self.iter += 1;
        self.delta = T::zero();
        let roots: Vec<RootInfo<T>> = self.graph.roots.clone();
        for root in &roots {
            self.upward_pass(root.node);
            self.downward_pass(root.node);
        }
        self.delta
    }

    /// Run to convergence and report.
    pub fn infer(&mut self) -> ConvergenceReport<T> {
        let mut deltas = Vec::new();
        let mut converged = false;
        let mut iterations = 0;
        while iterations < self.config.max_iters {
            iterations += 1;
            let delta = self.step();
            deltas.push(delta);
            if delta <= self.config.epsilon {
                converged = true;
                break;
            }
        }
        self.report(iterations, converged, deltas)
    }

    fn upward(&mut self, id: NodeId, seen: &mut Vec<bool>) {
        if seen[id] {
            return;
        }
        seen[id] = true;
        let ops = self.graph.nodes[id].operands.clone();
        for op in &ops {
            self.upward(op.node, seen);
        }
        if ops.is_empty() {
            return; // atom
        }
        let kind = self.graph.nodes[id].kind;
        for t in 0..self.graph.nodes[id].tuples.len() {
            // recompute only when an input changed recently
            let inputs_dirty = self.operand_entries_dirty(id, t);
            if !inputs_dirty {
                continue;
            }
            match kind {
                NodeKind::Alias => {
                    if let OperandEntry::One(ce) = self.graph.nodes[id].operand_entries[t][0] {
                        let child = self.tv_bounds(ops[0].node, ce);
                        self.aggregate_lower(id, t, child.lower);
                        self.aggregate_upper(id, t, child.upper);
                    }
                }
                NodeKind::Not => {
                    if let OperandEntry::One(ce) = self.graph.nodes[id].operand_entries[t][0] {
                        let child = self.tv_bounds(ops[0].node, ce);
                        let lo = self.complement(child.upper);
                        let hi = self.complement(child.lower);
                        self.aggregate_lower(id, t, lo);
                        self.aggregate_upper(id, t, hi);
                    }
                }
                NodeKind::ForAll | NodeKind::Exists => {
                    let kindq = if kind == NodeKind::ForAll {
                        Quantifier::ForAll
                    } else {
                        Quantifier::Exists
                    };
                    let group = match &self.graph.nodes[id].operand_entries[t][0] {
                        OperandEntry::Group(g) => g.clone(),
                        OperandEntry::One(e) => vec![*e],
                    };
                    let child_bounds: Vec<Bounds<T>> = group
                        .iter()
                        .map(|&e| {
                            let tb = self.tv_bounds(ops[0].node, e);
                            Bounds::new(self.tape.val(tb.lower), self.tape.val(tb.upper))
                        })
                        .collect();
                    let (agg, srcs) = quantify_upward(kindq, &child_bounds);
                    if let Some((ilo, ihi)) = srcs {
                        let lo_tv = self.tv_bounds(ops[0].node, group[ilo]).lower;
                        let hi_tv = self.tv_bounds(ops[0].node, group[ihi]).upper;
                        let _ = agg;
                        self.aggregate_lower(id, t, lo_tv);
                        self.aggregate_upper(id, t, hi_tv);
                    }
                }
                NodeKind::And | NodeKind::Or | NodeKind::Implies => {
                    let params = self.params[id].clone().expect("connective has parameters");
                    let (entries, op_tvs, op_bounds) = self.gather_operands(id, t, &ops);
                    let _ = entries;
                    let (lo_dv, hi_dv) = match kind {
                        NodeKind::And => semantics::up_and(&params, &op_bounds),
                        NodeKind::Or => semantics::up_or(&params, &op_bounds),
                        NodeKind::Implies => {
                            semantics::up_implies(&params, op_bounds[0], op_bounds[1])
                        }
                        _ => unreachable!(),
                    };
                    let lo = self.apply_dv(id, &lo_dv, &op_tvs, None);
                    let hi = self.apply_dv(id, &hi_dv, &op_tvs, None);
                    self.aggregate_lower(id, t, lo);
                    self.aggregate_upper(id, t, hi);
                }
                NodeKind::Atom => unreachable!("atoms have no operands"),
            }
        }
    }

    fn downward(&mut self, id: NodeId, seen: &mut Vec<bool>) {
        if seen[id] {
            return;
        }
        seen[id] = true;
        let ops = self.graph.nodes[id].operands.clone();
        if ops.is_empty() {
            return;
        }
        let kind = self.graph.nodes[id].kind;
        for t in 0..self.graph.nodes[id].tuples.len() {
            let z = self.tv_bounds(id, t);
            let zb = Bounds::new(self.tape.val(z.lower), self.tape.val(z.upper));
            // a contradictory entry offers no proofs; the clash stays
            // where it was detected
            if zb.is_contradictory() {
                continue;
            }
            if !self.dirty(id, t) && !self.operand_entries_dirty(id, t) {
                continue;
            }
            match kind {
                NodeKind::Alias => {
                    if let OperandEntry::One(ce) = self.graph.nodes[id].operand_entries[t][0] {
                        self.aggregate_lower(ops[0].node, ce, z.lower);
                        self.aggregate_upper(ops[0].node, ce, z.upper);
                    }
                }
                NodeKind::Not => {
                    if let OperandEntry::One(ce) = self.graph.nodes[id].operand_entries[t][0] {
                        let lo = self.complement(z.upper);
                        let hi = self.complement(z.lower);
                        self.aggregate_lower(ops[0].node, ce, lo);
                        self.aggregate_upper(ops[0].node, ce, hi);
                    }
                }
                NodeKind::ForAll => {
                    // every grounding inherits the universal's lower bound
                    let group = match &self.graph.nodes[id].operand_entries[t][0] {
                        OperandEntry::Group(g) => g.clone(),
                        OperandEntry::One(e) => vec![*e],
                    };
                    for ce in group {
                        self.aggregate_lower(ops[0].node, ce, z.lower);
                    }
                }
                NodeKind::Exists => {
                    // no witness is chosen: only the upper broadcasts
                    let group = match &self.graph.nodes[id].operand_entries[t][0] {
                        OperandEntry::Group(g) => g.clone(),
                        OperandEntry::One(e) => vec![*e],
                    };
                    for ce in group {
                        self.aggregate_upper(ops[0].node, ce, z.upper);
                    }
                }
                NodeKind::And | NodeKind::Or => {
                    let params = self.params[id].clone().expect("connective has parameters");
                    let (entries, op_tvs, op_bounds) = self.gather_operands(id, t, &ops);
                    for j in 0..ops.len() {
                        let d = match kind {
                            NodeKind::And => semantics::down_and(
                                &params,
                                self.config.w_min,
                                j,
                                &op_bounds,
                                zb,
                            ),
                            _ => semantics::down_or(
                                &params,
                                self.config.w_min,
                                j,
                                &op_bounds,
                                zb,
                            ),
                        };
                        self.push_downward(ops[j].node, entries[j], d, &op_tvs, z, id);
                    }
                }
                NodeKind::Implies => {
                    let params = self.params[id].clone().expect("connective has parameters");
                    let (entries, op_tvs, op_bounds) = self.gather_operands(id, t, &ops);
                    let (for_x, for_y) = semantics::down_implies(
                        &params,
                        self.config.w_min,
                        op_bounds[0],
                        op_bounds[1],
                        zb,
                    );
                    self.push_downward(ops[0].node, entries[0], for_x, &op_tvs, z, id);
                    self.push_downward(ops[1].node, entries[1], for_y, &op_tvs, z, id);
                }
                NodeKind::Atom => unreachable!(),
            }
        }
        for op in &ops {
            self.downward(op.node, seen);
        }
    }

    fn operand_entries_dirty(&self, id: NodeId, t: usize) -> bool {
        let node = &self.graph.nodes[id];
        for (o, op) in node.operands.iter().enumerate() {
            match &node.operand_entries[t][o] {
                OperandEntry::One(e) => {
                    if self.stamp[op.node][*e] + 1 >= self.iter {
                        return true;
                    }
                }
                OperandEntry::Group(g) => {
                    for &e in g {
                        if self.stamp[op.node][e] + 1 >= self.iter {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    fn gather_operands(
        &self,
        id: NodeId,
        t: usize,
        ops: &[crate::graph::OperandRef],
    ) -> (Vec<usize>, Vec<TvBounds>, Vec<Bounds<T>>) {
        let node = &self.graph.nodes[id];
        let mut entries = Vec::with_capacity(ops.len());
        let mut tvs = Vec::with_capacity(ops.len());
        let mut bounds = Vec::with_capacity(ops.len());
        for (o, op) in ops.iter().enumerate() {
            match &node.operand_entries[t][o] {
                OperandEntry::One(e) => {
                    entries.push(*e);
                    let tb = self.state[op.node][*e];
                    tvs.push(tb);
                    bounds.push(Bounds::new(self.tape.val(tb.lower), self.tape.val(tb.upper)));
                }
                OperandEntry::Group(_) => {
                    unreachable!("quantified dimensions only occur under quantifier nodes")
                }
            }
        }
        (entries, tvs, bounds)
    }

    fn apply_dv(
        &mut self,
        node: NodeId,
        dv: &semantics::DualValue<T>,
        op_tvs: &[TvBounds],
        z: Option<TvBounds>,
    ) -> Tv {
        let binds = &self.binds;
        let weight_tvs = if binds.trainable.weights {
            Some(&binds.weights[node])
        } else {
            None
        };
        self.tape.apply(dv, |w| match w {
            Wrt::InputLower(i) => Some(op_tvs[i].lower),
            Wrt::InputUpper(i) => Some(op_tvs[i].upper),
            Wrt::OutputLower => z.map(|z| z.lower),
            Wrt::OutputUpper => z.map(|z| z.upper),
            Wrt::Weight(i) => weight_tvs.map(|v| v[i]),
            // biases are fixed model constants in this engine
            Wrt::Bias => None,
            Wrt::Input(_) => None,
        })
    }

    fn push_downward(
        &mut self,
        child: NodeId,
        entry: usize,
        d: Downward<T>,
        op_tvs: &[TvBounds],
        z: TvBounds,
        parent: NodeId,
    ) {
        if let Some(dv) = d.lower {
            let tv = self.apply_dv(parent, &dv, op_tvs, Some(z));
            self.aggregate_lower(child, entry, tv);
        }
        if let Some(dv) = d.upper {
            let tv = self.apply_dv(parent, &dv, op_tvs, Some(z));
            self.aggregate_upper(child, entry, tv);
        }
    }

    fn complement(&mut self, x: Tv) -> Tv {
        let v = T::one() - self.tape.val(x);
        self.tape.node(v, &[(x, -T::one())])
    }

    /// Contradiction accounting over every node and grounding.
    pub fn contradictions(&self) -> Vec<ContradictionEntry<T>> {
        let mut out = Vec::new();
        let alpha = self.graph.config.alpha;
        for (id, node) in self.graph.nodes.iter().enumerate() {
            for (t, tuple) in node.tuples.iter().enumerate() {
                let b = self.bounds(id, t);
                if b.is_contradictory() {
                    let axiom = self
                        .graph
                        .roots
                        .iter()
                        .find(|r| r.node == id)
                        .map(|r| r.id.clone());
                    out.push(ContradictionEntry {
                        node: id,
                        axiom,
                        grounding: self.graph.tuple_names(tuple),
                        lower: b.lower,
                        upper: b.upper,
                        intra_classical: b.is_intra_classical(alpha),
                    });
                }
            }
        }
        out
    }

    fn report(&self, iterations: usize, converged: bool, deltas: Vec<T>) -> ConvergenceReport<T> {
        let contradictions = self.contradictions();
        let contradiction_sum = contradictions
            .iter()
            .fold(T::zero(), |a, c| a + (c.lower - c.upper));
        let alpha = self.graph.config.alpha;
        let axioms = self
            .graph
            .roots
            .iter()
            .filter(|r| r.bounds.is_some())
            .map(|r| {
                let node = r.node;
                let mut lo = T::one();
                let mut hi = T::one();
                let mut contra = 0;
                for t in 0..self.graph.nodes[node].tuples.len() {
                    let b = self.bounds(node, t);
                    if b.is_contradictory() {
                        contra += 1;
                    }
                    lo = lo.min(b.lower);
                    hi = hi.min(b.upper);
                }
                AxiomSummary {
                    id: r.id.clone(),
                    lower: lo,
                    upper: hi,
                    contradictions: contra,
                }
            })
            .collect();
        let queries = self
            .graph
            .roots
            .iter()
            .filter(|r| r.bounds.is_none())
            .map(|r| {
                let node = r.node;
                let answers = self.graph.nodes[node]
                    .tuples
                    .iter()
                    .enumerate()
                    .map(|(t, tuple)| {
                        let b = self.bounds(node, t);
                        GroundingAnswer {
                            grounding: self.graph.tuple_names(tuple),
                            lower: b.lower,
                            upper: b.upper,
                            state: b.classify(alpha),
                        }
                    })
                    .collect();
                QueryAnswer {
                    id: r.id.clone(),
                    answers,
                }
            })
            .collect();
        ConvergenceReport {
            iterations,
            converged,
            deltas,
            contradiction_count: contradictions.len(),
            contradiction_sum,
            contradictions,
            axioms,
            queries,
        }
    }

    /// Snapshot a node's table (for dumps, CSV and tests).
    pub fn table(&self, node: NodeId) -> crate::fol::GroundingTable<T> {
        let n = &self.graph.nodes[node];
        crate::fol::GroundingTable {
            vars: n.vars.clone(),
            rows: n
                .tuples
                .iter()
                .enumerate()
                .map(|(t, tuple)| (self.graph.tuple_names(tuple), self.bounds(node, t)))
                .collect(),
        }
    }
}

/// Compile-and-infer convenience for tests and the CLI.
pub fn infer_kb<T: Real>(
    kb: &crate::formula::KnowledgeBase<T>,
    compile: crate::graph::CompileConfig<T>,
    config: InferConfig<T>,
) -> Result<(NeuronGraph<T>, ModelParams<T>, ConvergenceReport<T>), crate::graph::CompileError> {
    let graph = NeuronGraph::compile(kb, compile)?;
    let model = ModelParams::from_graph(&graph);
    let report = {
        let mut eng = Engine::new(&graph, &model, config);
        eng.infer()
    };
    Ok((graph, model, report))
}
