//! Compilation of a knowledge base into the neuron graph.
//!
//! One node per connective occurrence, one shared node per predicate.
//! First-order nodes carry a variable signature and a grounding table;
//! propositional nodes are the nullary case. Grounding structure is
//! materialised once at compile time: under the default (naive) policy
//! the free variables of each axiom and every quantified dimension
//! range over the whole constant universe, which reduces inference to
//! the propositional case per grounding; the guided policy keeps only
//! groundings reachable from facts and query constants.

use crate::bounds::{Bounds, TruthState};
use crate::fol::{join_operands, ConstId, Quantifier, Slot, Tuple, VariableMap};
use crate::formula::{Formula, KnowledgeBase, Term};
use crate::semantics::{ConnectiveParams, Family};
use crate::Real;
use serde::Serialize;
use std::collections::BTreeMap;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Atom,
    /// Pass-through wrapper that gives an atom occurrence used as an
    /// axiom or query root its own bounds table.
    Alias,
    Not,
    And,
    Or,
    Implies,
    ForAll,
    Exists,
}

impl NodeKind {
    pub fn quantifier(&self) -> Option<Quantifier> {
        match self {
            NodeKind::ForAll => Some(Quantifier::ForAll),
            NodeKind::Exists => Some(Quantifier::Exists),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OperandRef {
    pub node: NodeId,
    pub map: VariableMap,
}

#[derive(Clone, Debug)]
pub struct Node<T> {
    pub kind: NodeKind,
    /// Predicate name for atoms; informational elsewhere.
    pub label: String,
    pub params: Option<ConnectiveParams<T>>,
    pub operands: Vec<OperandRef>,
    /// Variable signature (column names).
    pub vars: Vec<String>,
    /// Materialised groundings, sorted.
    pub tuples: Vec<Tuple>,
    pub index: BTreeMap<Tuple, usize>,
    /// Per tuple, per operand: the child entry (or quantified group).
    pub operand_entries: Vec<Vec<OperandEntry>>,
}

#[derive(Clone, Debug)]
pub enum OperandEntry {
    One(usize),
    Group(Vec<usize>),
}

impl<T> Node<T> {
    pub fn entry(&self, tuple: &[ConstId]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// A fact compiled to an atom-table entry.
#[derive(Clone, Debug)]
pub struct CompiledFact<T> {
    pub node: NodeId,
    pub entry: usize,
    pub bounds: Bounds<T>,
}

#[derive(Clone, Debug)]
pub struct RootInfo<T> {
    pub node: NodeId,
    pub id: String,
    /// Initial truth bounds for axioms; queries are not asserted.
    pub bounds: Option<Bounds<T>>,
}

#[derive(Clone, Copy, Debug)]
pub struct CompileConfig<T> {
    pub family: Family,
    pub alpha: T,
    pub grad_scale: T,
    /// Restrict grounding propagation to tuples reachable from facts
    /// and query constants instead of the full universe.
    pub guided: bool,
}

impl<T: Real> Default for CompileConfig<T> {
    fn default() -> Self {
        CompileConfig {
            family: Family::Lukasiewicz,
            alpha: T::one(),
            grad_scale: T::one(),
            guided: false,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CompileError {
    #[error("{0}")]
    Kb(#[from] crate::formula::KbError),
    #[error("invalid connective parameters: {0}")]
    Params(String),
    #[error("the probability family supports propositional graphs only (no quantifiers)")]
    ProbQuantifier,
    #[error("variable {0} is quantified twice in nested scopes")]
    ShadowedVariable(String),
}

/// A built subformula: the node, the occurrence's variable names in
/// order of first appearance, and for atom occurrences the argument
/// template the parent map is derived from.
struct BuiltChild {
    node: NodeId,
    vars: Vec<String>,
    args: Option<Vec<ArgTemplate>>,
}

#[derive(Clone)]
enum ArgTemplate {
    Var(String),
    Const(ConstId),
}

#[derive(Clone, Debug)]
pub struct NeuronGraph<T> {
    pub nodes: Vec<Node<T>>,
    /// Axiom roots in KB order, then query roots.
    pub roots: Vec<RootInfo<T>>,
    pub atom_nodes: BTreeMap<String, NodeId>,
    pub constants: Vec<String>,
    pub facts: Vec<CompiledFact<T>>,
    pub config: CompileConfig<T>,
    pub axiom_count: usize,
}

impl<T: Real> NeuronGraph<T> {
    pub fn compile(kb: &KnowledgeBase<T>, config: CompileConfig<T>) -> Result<Self, CompileError> {
        kb.validate()?;
        let mut g = NeuronGraph {
            nodes: Vec::new(),
            roots: Vec::new(),
            atom_nodes: BTreeMap::new(),
            constants: kb.constants.clone(),
            facts: Vec::new(),
            config,
            axiom_count: kb.axioms.len(),
        };
        for (pred, &arity) in &kb.predicates {
            let vars = (0..arity).map(|i| format!("_{}", i)).collect();
            let id = g.push_node(Node {
                kind: NodeKind::Atom,
                label: pred.clone(),
                params: None,
                operands: Vec::new(),
                vars,
                tuples: Vec::new(),
                index: BTreeMap::new(),
                operand_entries: Vec::new(),
            });
            g.atom_nodes.insert(pred.clone(), id);
        }
        for ax in &kb.axioms {
            let node = g.build_root(&ax.formula)?;
            g.roots.push(RootInfo {
                node,
                id: ax.id.clone(),
                bounds: Some(ax.bounds),
            });
        }
        for q in &kb.queries {
            let node = g.build_root(&q.formula)?;
            g.roots.push(RootInfo {
                node,
                id: q.id.clone(),
                bounds: None,
            });
        }
        g.materialize(kb)?;
        for fact in &kb.facts {
            let node = g.atom_nodes[&fact.pred];
            let tuple: Tuple = fact
                .args
                .iter()
                .map(|a| g.const_id(a).expect("fact constants are registered"))
                .collect();
            let entry = g.nodes[node].entry(&tuple).expect("fact tuples are materialised");
            g.facts.push(CompiledFact {
                node,
                entry,
                bounds: fact.bounds,
            });
        }
        Ok(g)
    }

    pub fn const_id(&self, name: &str) -> Option<ConstId> {
        self.constants.iter().position(|c| c == name).map(|i| i as ConstId)
    }

    pub fn const_name(&self, id: ConstId) -> &str {
        &self.constants[id as usize]
    }

    fn push_node(&mut self, node: Node<T>) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn connective_params(
        &self,
        weights: Vec<T>,
        bias: T,
    ) -> Result<ConnectiveParams<T>, CompileError> {
        let p = ConnectiveParams {
            family: self.config.family,
            alpha: self.config.alpha,
            beta: bias,
            weights,
            grad_scale: self.config.grad_scale,
        };
        p.validate().map_err(CompileError::Params)?;
        Ok(p)
    }

    /// Roots that are bare atom occurrences get a pass-through alias so
    /// the axiom's bounds live on the occurrence, not the shared atom.
    fn build_root(&mut self, f: &Formula<T>) -> Result<NodeId, CompileError> {
        let built = self.build(f, &mut Vec::new())?;
        if built.args.is_none() {
            return Ok(built.node);
        }
        let vars = built.vars.clone();
        let map = occurrence_map(&built, &vars);
        Ok(self.push_node(Node {
            kind: NodeKind::Alias,
            label: String::new(),
            params: None,
            operands: vec![OperandRef { node: built.node, map }],
            vars,
            tuples: Vec::new(),
            index: BTreeMap::new(),
            operand_entries: Vec::new(),
        }))
    }

    fn build(&mut self, f: &Formula<T>, scope: &mut Vec<String>) -> Result<BuiltChild, CompileError> {
        match f {
            Formula::Atom { pred, args } => {
                let mut vars = Vec::new();
                let mut template = Vec::with_capacity(args.len());
                for a in args {
                    match a {
                        Term::Var(v) => {
                            if !vars.contains(v) {
                                vars.push(v.clone());
                            }
                            template.push(ArgTemplate::Var(v.clone()));
                        }
                        Term::Const(c) => {
                            let id = self
                                .const_id(c)
                                .expect("constants are registered before compilation");
                            template.push(ArgTemplate::Const(id));
                        }
                    }
                }
                Ok(BuiltChild {
                    node: self.atom_nodes[pred],
                    vars,
                    args: Some(template),
                })
            }
            Formula::Not(c) => {
                let child = self.build(c, scope)?;
                let vars = child.vars.clone();
                let map = occurrence_map(&child, &vars);
                let node = self.push_node(Node {
                    kind: NodeKind::Not,
                    label: String::new(),
                    params: None,
                    operands: vec![OperandRef { node: child.node, map }],
                    vars: vars.clone(),
                    tuples: Vec::new(),
                    index: BTreeMap::new(),
                    operand_entries: Vec::new(),
                });
                Ok(BuiltChild { node, vars, args: None })
            }
            Formula::And { operands, bias } | Formula::Or { operands, bias } => {
                let is_and = matches!(f, Formula::And { .. });
                let mut built = Vec::new();
                let mut weights = Vec::new();
                for w in operands {
                    built.push(self.build(&w.formula, scope)?);
                    weights.push(w.weight);
                }
                let vars = union_vars(built.iter().map(|b| b.vars.as_slice()));
                let ops = built
                    .iter()
                    .map(|b| OperandRef {
                        node: b.node,
                        map: occurrence_map(b, &vars),
                    })
                    .collect();
                let params = self.connective_params(weights, *bias)?;
                let node = self.push_node(Node {
                    kind: if is_and { NodeKind::And } else { NodeKind::Or },
                    label: String::new(),
                    params: Some(params),
                    operands: ops,
                    vars: vars.clone(),
                    tuples: Vec::new(),
                    index: BTreeMap::new(),
                    operand_entries: Vec::new(),
                });
                Ok(BuiltChild { node, vars, args: None })
            }
            Formula::Implies { antecedent, consequent, bias } => {
                let a = self.build(&antecedent.formula, scope)?;
                let c = self.build(&consequent.formula, scope)?;
                let vars = union_vars([a.vars.as_slice(), c.vars.as_slice()].into_iter());
                let ops = vec![
                    OperandRef { node: a.node, map: occurrence_map(&a, &vars) },
                    OperandRef { node: c.node, map: occurrence_map(&c, &vars) },
                ];
                let params =
                    self.connective_params(vec![antecedent.weight, consequent.weight], *bias)?;
                let node = self.push_node(Node {
                    kind: NodeKind::Implies,
                    label: String::new(),
                    params: Some(params),
                    operands: ops,
                    vars: vars.clone(),
                    tuples: Vec::new(),
                    index: BTreeMap::new(),
                    operand_entries: Vec::new(),
                });
                Ok(BuiltChild { node, vars, args: None })
            }
            Formula::ForAll { vars: qvars, body } | Formula::Exists { vars: qvars, body } => {
                if self.config.family == Family::Probability {
                    return Err(CompileError::ProbQuantifier);
                }
                for v in qvars {
                    if scope.contains(v) {
                        return Err(CompileError::ShadowedVariable(v.clone()));
                    }
                }
                let n = scope.len();
                scope.extend(qvars.iter().cloned());
                let child = self.build(body, scope)?;
                scope.truncate(n);
                let vars: Vec<String> = child
                    .vars
                    .iter()
                    .filter(|v| !qvars.contains(v))
                    .cloned()
                    .collect();
                // quantified dimensions get stable indices per variable
                let dims: Vec<&String> =
                    child.vars.iter().filter(|v| qvars.contains(v)).collect();
                let map = occurrence_map_quantified(&child, &vars, &dims);
                let kind = if matches!(f, Formula::ForAll { .. }) {
                    NodeKind::ForAll
                } else {
                    NodeKind::Exists
                };
                let node = self.push_node(Node {
                    kind,
                    label: String::new(),
                    params: None,
                    operands: vec![OperandRef { node: child.node, map }],
                    vars: vars.clone(),
                    tuples: Vec::new(),
                    index: BTreeMap::new(),
                    operand_entries: Vec::new(),
                });
                Ok(BuiltChild { node, vars, args: None })
            }
        }
    }

    /// Materialise every node's grounding set.
    fn materialize(&mut self, kb: &KnowledgeBase<T>) -> Result<(), CompileError> {
        let universe: Vec<ConstId> = (0..self.constants.len() as ConstId).collect();
        // a proposition always has its one (empty) grounding
        for (_, &node) in self.atom_nodes.iter() {
            if self.nodes[node].vars.is_empty() {
                insert_tuple(&mut self.nodes[node], Vec::new().into_boxed_slice());
            }
        }
        // seed atoms with fact tuples
        for fact in &kb.facts {
            let node = self.atom_nodes[&fact.pred];
            let tuple: Tuple = fact
                .args
                .iter()
                .map(|a| self.const_id(a).expect("registered"))
                .collect();
            insert_tuple(&mut self.nodes[node], tuple);
        }
        if !self.config.guided {
            // naive policy: root signatures range over the whole universe
            let roots: Vec<(NodeId, usize)> = self
                .roots
                .iter()
                .map(|r| (r.node, self.nodes[r.node].vars.len()))
                .collect();
            for (node, arity) in roots {
                for tuple in cartesian(&universe, arity) {
                    insert_tuple(&mut self.nodes[node], tuple);
                }
            }
        } else {
            for r in 0..self.roots.len() {
                let node = self.roots[r].node;
                if self.nodes[node].vars.is_empty() {
                    insert_tuple(&mut self.nodes[node], Vec::new().into_boxed_slice());
                }
            }
        }
        loop {
            let mut changed = false;
            for id in 0..self.nodes.len() {
                // downward: parent tuples create child tuples; open
                // (quantified) dimensions expand over the universe under
                // the naive policy
                let parent_tuples = self.nodes[id].tuples.clone();
                let ops = self.nodes[id].operands.clone();
                for op in &ops {
                    for t in &parent_tuples {
                        if op.map.has_open() {
                            if self.config.guided {
                                continue;
                            }
                            for child_tuple in open_expansions(&op.map, t, &universe) {
                                changed |= insert_tuple(&mut self.nodes[op.node], child_tuple);
                            }
                        } else if let Some(ct) = op.map.child_tuple(t) {
                            changed |= insert_tuple(&mut self.nodes[op.node], ct);
                        }
                    }
                }
                // upward joins only matter under the guided policy; the
                // naive policy already materialises full signatures
                if self.config.guided && !ops.is_empty() {
                    let arity = self.nodes[id].vars.len();
                    // values already present at the parent seed the
                    // expansion of unconstrained columns
                    let mut seed: Vec<Vec<ConstId>> = vec![Vec::new(); arity];
                    for t in &self.nodes[id].tuples {
                        for (i, &c) in t.iter().enumerate() {
                            if !seed[i].contains(&c) {
                                seed[i].push(c);
                            }
                        }
                    }
                    let children: Vec<(&[Tuple], &VariableMap)> = ops
                        .iter()
                        .map(|op| (self.nodes[op.node].tuples.as_slice(), &op.map))
                        .collect();
                    let joined = join_operands(arity, &children, &seed);
                    for t in joined {
                        changed |= insert_tuple(&mut self.nodes[id], t);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // freeze: sort tuples, rebuild indices, resolve operand entries
        for id in 0..self.nodes.len() {
            self.nodes[id].tuples.sort();
            self.nodes[id].index = self.nodes[id]
                .tuples
                .iter()
                .enumerate()
                .map(|(i, t)| (t.clone(), i))
                .collect();
        }
        for id in 0..self.nodes.len() {
            let node = &self.nodes[id];
            if node.operands.is_empty() {
                continue;
            }
            let mut entries = Vec::with_capacity(node.tuples.len());
            for t in &node.tuples {
                let mut per_op = Vec::with_capacity(node.operands.len());
                for op in &node.operands {
                    if op.map.has_open() {
                        let child = &self.nodes[op.node];
                        let mut group = Vec::new();
                        for (ci, ct) in child.tuples.iter().enumerate() {
                            if open_match(&op.map, t, ct) {
                                group.push(ci);
                            }
                        }
                        per_op.push(OperandEntry::Group(group));
                    } else {
                        let ct = op.map.child_tuple(t).expect("no open slots");
                        // the fixpoint loop materialised every closed-map
                        // projection of every parent tuple
                        let ci = self.nodes[op.node]
                            .entry(&ct)
                            .expect("child tuples materialised");
                        per_op.push(OperandEntry::One(ci));
                    }
                }
                entries.push(per_op);
            }
            self.nodes[id].operand_entries = entries;
        }
        Ok(())
    }

    /// Total number of grounding entries across all nodes.
    pub fn entry_count(&self) -> usize {
        self.nodes.iter().map(|n| n.tuples.len()).sum()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn tuple_names(&self, tuple: &[ConstId]) -> Vec<String> {
        tuple.iter().map(|&c| self.constants[c as usize].clone()).collect()
    }
}

fn insert_tuple<T>(node: &mut Node<T>, tuple: Tuple) -> bool {
    if node.index.contains_key(&tuple) {
        return false;
    }
    node.index.insert(tuple.clone(), node.tuples.len());
    node.tuples.push(tuple);
    true
}

fn cartesian(universe: &[ConstId], arity: usize) -> Vec<Tuple> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * universe.len());
        for t in &out {
            for &c in universe {
                let mut t2 = t.clone();
                t2.push(c);
                next.push(t2);
            }
        }
        out = next;
    }
    out.into_iter().map(|t| t.into_boxed_slice()).collect()
}

fn open_expansions(map: &VariableMap, parent: &[ConstId], universe: &[ConstId]) -> Vec<Tuple> {
    // one value per open dimension, shared across slots with that tag
    let ndims = map
        .slots
        .iter()
        .filter_map(|s| match s {
            Slot::Open(d) => Some(*d + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut out = Vec::new();
    let mut dims = vec![0 as ConstId; ndims];
    expand_dims(map, parent, universe, 0, &mut dims, &mut out);
    out
}

fn expand_dims(
    map: &VariableMap,
    parent: &[ConstId],
    universe: &[ConstId],
    dim: usize,
    dims: &mut Vec<ConstId>,
    out: &mut Vec<Tuple>,
) {
    if dim == dims.len() {
        let tuple: Tuple = map
            .slots
            .iter()
            .map(|s| match *s {
                Slot::FromParent(p) => parent[p],
                Slot::Fixed(c) => c,
                Slot::Open(d) => dims[d],
            })
            .collect();
        out.push(tuple);
        return;
    }
    for &c in universe {
        dims[dim] = c;
        expand_dims(map, parent, universe, dim + 1, dims, out);
    }
}

fn open_match(map: &VariableMap, parent: &[ConstId], child: &[ConstId]) -> bool {
    // also require diagonal agreement between slots sharing a dimension
    let mut seen: Vec<Option<ConstId>> = Vec::new();
    for (j, s) in map.slots.iter().enumerate() {
        match *s {
            Slot::FromParent(p) => {
                if child[j] != parent[p] {
                    return false;
                }
            }
            Slot::Fixed(c) => {
                if child[j] != c {
                    return false;
                }
            }
            Slot::Open(d) => {
                if seen.len() <= d {
                    seen.resize(d + 1, None);
                }
                match seen[d] {
                    None => seen[d] = Some(child[j]),
                    Some(c) if c == child[j] => {}
                    Some(_) => return false,
                }
            }
        }
    }
    true
}

fn union_vars<'a>(children: impl Iterator<Item = &'a [String]>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for vs in children {
        for v in vs {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
    }
    out
}

/// Map from a built child to parent columns: atom occurrences follow
/// their argument template, other nodes their variable signature.
fn occurrence_map(child: &BuiltChild, parent_vars: &[String]) -> VariableMap {
    let pos = |v: &String| {
        Slot::FromParent(
            parent_vars
                .iter()
                .position(|p| p == v)
                .expect("child variable appears in parent signature"),
        )
    };
    let slots = match &child.args {
        Some(template) => template
            .iter()
            .map(|a| match a {
                ArgTemplate::Var(v) => pos(v),
                ArgTemplate::Const(c) => Slot::Fixed(*c),
            })
            .collect(),
        None => child.vars.iter().map(pos).collect(),
    };
    VariableMap { slots }
}

/// Like [`occurrence_map`] but variables in `dims` become open
/// (quantified) dimensions.
fn occurrence_map_quantified(
    child: &BuiltChild,
    parent_vars: &[String],
    dims: &[&String],
) -> VariableMap {
    let slot_for = |v: &String| match dims.iter().position(|d| *d == v) {
        Some(d) => Slot::Open(d),
        None => Slot::FromParent(
            parent_vars
                .iter()
                .position(|p| p == v)
                .expect("child variable appears in parent signature"),
        ),
    };
    let slots = match &child.args {
        Some(template) => template
            .iter()
            .map(|a| match a {
                ArgTemplate::Var(v) => slot_for(v),
                ArgTemplate::Const(c) => Slot::Fixed(*c),
            })
            .collect(),
        None => child.vars.iter().map(slot_for).collect(),
    };
    VariableMap { slots }
}

/// Classification snapshot of one grounding for reports.
#[derive(Clone, Debug, Serialize)]
pub struct EntryState<T> {
    pub node: NodeId,
    pub grounding: Vec<String>,
    pub lower: T,
    pub upper: T,
    pub state: TruthState,
}
