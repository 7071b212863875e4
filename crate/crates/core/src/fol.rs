//! First-order machinery: grounding tables, variable maps, joins,
//! quantifier reductions and variable binding.
//!
//! Every node in a first-order graph keys its bounds by tuples of
//! constants, one column per variable in its signature. Absent tuples
//! mean `[0, 1]` under the open-world assumption. Propositional nodes
//! are the nullary case: a single empty tuple.

use crate::bounds::Bounds;
use crate::formula::{Formula, Term, Weighted};
use crate::Real;


/// Interned constant.
pub type ConstId = u32;
/// A grounding: one constant per variable column.
pub type Tuple = Box<[ConstId]>;

/// How one child column is filled from a parent grounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Copy the parent tuple's column.
    FromParent(usize),
    /// A constant fixed by the formula (variable binding).
    Fixed(ConstId),
    /// A quantified dimension the parent does not carry. The index
    /// identifies the dimension, so repeated occurrences of one
    /// quantified variable stay diagonal.
    Open(usize),
}

/// Per-operand correspondence from parent columns to child columns.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VariableMap {
    pub slots: Vec<Slot>,
}

impl VariableMap {
    /// Build the child tuple for a parent grounding; `None` if the map
    /// has open (quantified) dimensions.
    pub fn child_tuple(&self, parent: &[ConstId]) -> Option<Tuple> {
        let mut out = Vec::with_capacity(self.slots.len());
        for s in &self.slots {
            match *s {
                Slot::FromParent(p) => out.push(parent[p]),
                Slot::Fixed(c) => out.push(c),
                Slot::Open(_) => return None,
            }
        }
        Some(out.into_boxed_slice())
    }

    /// Project a child tuple onto parent columns; `None` when a fixed
    /// slot disagrees or two child columns bound to the same parent
    /// column differ (repeated-variable filter).
    pub fn parent_assignment(
        &self,
        child: &[ConstId],
        parent_arity: usize,
    ) -> Option<Vec<Option<ConstId>>> {
        let mut out = vec![None; parent_arity];
        for (j, s) in self.slots.iter().enumerate() {
            match *s {
                Slot::FromParent(p) => match out[p] {
                    None => out[p] = Some(child[j]),
                    Some(c) if c == child[j] => {}
                    Some(_) => return None,
                },
                Slot::Fixed(c) => {
                    if child[j] != c {
                        return None;
                    }
                }
                Slot::Open(_) => {}
            }
        }
        Some(out)
    }

    pub fn has_open(&self) -> bool {
        self.slots.iter().any(|s| matches!(s, Slot::Open(_)))
    }
}

/// A snapshot of one node's grounding table, for inspection, CSV
/// export and tests.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundingTable<T> {
    pub vars: Vec<String>,
    pub rows: Vec<(Vec<String>, Bounds<T>)>,
}

impl<T: Real> GroundingTable<T> {
    /// Bounds for a grounding; absent rows are unknown.
    pub fn get(&self, key: &[&str]) -> Bounds<T> {
        self.rows
            .iter()
            .find(|(k, _)| k.iter().map(String::as_str).eq(key.iter().copied()))
            .map(|(_, b)| *b)
            .unwrap_or_else(Bounds::unknown)
    }

    /// CSV with one column per variable plus `L` and `U`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for v in &self.vars {
            out.push_str(v);
            out.push(',');
        }
        out.push_str("L,U\n");
        for (key, b) in &self.rows {
            for k in key {
                out.push_str(k);
                out.push(',');
            }
            out.push_str(&format!("{},{}\n", b.lower, b.upper));
        }
        out
    }
}

/// Materialise a parent node's groundings from its children: every
/// operand contributes its own groundings, projected to the parent's
/// columns; columns an operand does not constrain are expanded over
/// the values observed for them elsewhere (never the whole universe).
/// `seed_values` adds per-column values already known at the parent.
pub fn join_operands(
    parent_arity: usize,
    children: &[(&[Tuple], &VariableMap)],
    seed_values: &[Vec<ConstId>],
) -> Vec<Tuple> {
    let mut projections: Vec<Vec<Vec<Option<ConstId>>>> = Vec::with_capacity(children.len());
    let mut cols: Vec<Vec<ConstId>> = seed_values.to_vec();
    cols.resize(parent_arity, Vec::new());
    for (tuples, map) in children {
        let mut ps: Vec<Vec<Option<ConstId>>> = Vec::new();
        for t in tuples.iter() {
            if let Some(p) = map.parent_assignment(t, parent_arity) {
                for (i, v) in p.iter().enumerate() {
                    if let Some(c) = v {
                        if !cols[i].contains(c) {
                            cols[i].push(*c);
                        }
                    }
                }
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
        }
        projections.push(ps);
    }
    for c in cols.iter_mut() {
        c.sort();
    }
    let mut out: Vec<Tuple> = Vec::new();
    for ps in &projections {
        for partial in ps {
            expand(partial, 0, &mut Vec::new(), &cols, &mut out);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn expand(
    partial: &[Option<ConstId>],
    col: usize,
    acc: &mut Vec<ConstId>,
    column_values: &[Vec<ConstId>],
    out: &mut Vec<Tuple>,
) {
    if col == partial.len() {
        out.push(acc.clone().into_boxed_slice());
        return;
    }
    match partial[col] {
        Some(c) => {
            acc.push(c);
            expand(partial, col + 1, acc, column_values, out);
            acc.pop();
        }
        None => {
            for &c in &column_values[col] {
                acc.push(c);
                expand(partial, col + 1, acc, column_values, out);
                acc.pop();
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    ForAll,
    Exists,
}

/// Upward quantifier reduction over one group of groundings. Returns
/// the aggregated bounds and the indices of the entries the lower and
/// upper values came from (for gradient routing). An empty group makes
/// no claim: `[0, 1]`.
pub fn quantify_upward<T: Real>(
    kind: Quantifier,
    group: &[Bounds<T>],
) -> (Bounds<T>, Option<(usize, usize)>) {
    if group.is_empty() {
        return (Bounds::unknown(), None);
    }
    let mut lo = group[0].lower;
    let mut hi = group[0].upper;
    let (mut ilo, mut ihi) = (0, 0);
    for (i, b) in group.iter().enumerate().skip(1) {
        match kind {
            Quantifier::ForAll => {
                if b.lower < lo {
                    lo = b.lower;
                    ilo = i;
                }
                if b.upper < hi {
                    hi = b.upper;
                    ihi = i;
                }
            }
            Quantifier::Exists => {
                if b.lower > lo {
                    lo = b.lower;
                    ilo = i;
                }
                if b.upper > hi {
                    hi = b.upper;
                    ihi = i;
                }
            }
        }
    }
    (Bounds::new(lo, hi), Some((ilo, ihi)))
}

/// Downward quantifier rule: a universal offers its lower bound to
/// every grounding; an existential offers its upper bound. The
/// converse broadcasts would introduce Skolem functions and are not
/// made.
pub fn quantify_downward<T: Real>(kind: Quantifier, node: Bounds<T>) -> Bounds<T> {
    match kind {
        Quantifier::ForAll => Bounds::new(node.lower, T::one()),
        Quantifier::Exists => Bounds::new(T::zero(), node.upper),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BindError {
    #[error("variable {0} does not occur in the formula")]
    NoSuchVariable(String),
    #[error("unknown constant {0}")]
    UnknownConstant(String),
}

/// Substitute a constant for every occurrence of a variable. The
/// constant must exist in the universe; the variable must occur.
pub fn bind<T: Real>(
    formula: &Formula<T>,
    var: &str,
    constant: &str,
    universe: &[String],
) -> Result<Formula<T>, BindError> {
    if !universe.iter().any(|c| c == constant) {
        return Err(BindError::UnknownConstant(constant.to_string()));
    }
    if !formula.free_vars().iter().any(|v| v == var) {
        return Err(BindError::NoSuchVariable(var.to_string()));
    }
    Ok(substitute(formula, var, constant))
}

fn substitute<T: Real>(f: &Formula<T>, var: &str, constant: &str) -> Formula<T> {
    match f {
        Formula::Atom { pred, args } => Formula::Atom {
            pred: pred.clone(),
            args: args
                .iter()
                .map(|t| match t {
                    Term::Var(v) if v == var => Term::Const(constant.to_string()),
                    other => other.clone(),
                })
                .collect(),
        },
        Formula::Not(c) => Formula::Not(Box::new(substitute(c, var, constant))),
        Formula::And { operands, bias } => Formula::And {
            operands: operands
                .iter()
                .map(|w| Weighted {
                    weight: w.weight,
                    formula: substitute(&w.formula, var, constant),
                })
                .collect(),
            bias: *bias,
        },
        Formula::Or { operands, bias } => Formula::Or {
            operands: operands
                .iter()
                .map(|w| Weighted {
                    weight: w.weight,
                    formula: substitute(&w.formula, var, constant),
                })
                .collect(),
            bias: *bias,
        },
        Formula::Implies { antecedent, consequent, bias } => Formula::Implies {
            antecedent: Box::new(Weighted {
                weight: antecedent.weight,
                formula: substitute(&antecedent.formula, var, constant),
            }),
            consequent: Box::new(Weighted {
                weight: consequent.weight,
                formula: substitute(&consequent.formula, var, constant),
            }),
            bias: *bias,
        },
        Formula::ForAll { vars, body } if !vars.iter().any(|v| v == var) => Formula::ForAll {
            vars: vars.clone(),
            body: Box::new(substitute(body, var, constant)),
        },
        Formula::Exists { vars, body } if !vars.iter().any(|v| v == var) => Formula::Exists {
            vars: vars.clone(),
            body: Box::new(substitute(body, var, constant)),
        },
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;

    fn t(ids: &[u32]) -> Tuple {
        ids.to_vec().into_boxed_slice()
    }

    #[test]
    fn join_shared_variable() {
        // F(x,y) & S(y): F = {(a,b)}, S = {(b)}
        let f_tuples = [t(&[0, 1])];
        let s_tuples = [t(&[1])];
        let f_map = VariableMap { slots: vec![Slot::FromParent(0), Slot::FromParent(1)] };
        let s_map = VariableMap { slots: vec![Slot::FromParent(1)] };
        let joined = join_operands(
            2,
            &[(&f_tuples[..], &f_map), (&s_tuples[..], &s_map)],
            &[],
        );
        assert_eq!(joined, vec![t(&[0, 1])]);
        // every operand contributes its groundings: F(a,b) and S(a)
        // ground both (a,b) and, expanding x over its observed values,
        // (a,a)
        let s_tuples = [t(&[0])];
        let joined = join_operands(
            2,
            &[(&f_tuples[..], &f_map), (&s_tuples[..], &s_map)],
            &[],
        );
        assert_eq!(joined, vec![t(&[0, 0]), t(&[0, 1])]);
    }

    #[test]
    fn symmetric_occurrences_union_their_groundings() {
        // F(x,y) -> F(y,x) with F = {(a,b)}: the implication grounds
        // both (a,b) (from the antecedent) and (b,a) (from the
        // consequent occurrence read backwards)
        let f_tuples = [t(&[0, 1])];
        let fwd = VariableMap { slots: vec![Slot::FromParent(0), Slot::FromParent(1)] };
        let rev = VariableMap { slots: vec![Slot::FromParent(1), Slot::FromParent(0)] };
        let joined = join_operands(2, &[(&f_tuples[..], &fwd), (&f_tuples[..], &rev)], &[]);
        assert_eq!(joined, vec![t(&[0, 1]), t(&[1, 0])]);
    }

    #[test]
    fn repeated_variable_takes_diagonal() {
        // F(x,x) under parent vars [x]
        let tuples = [t(&[0, 0]), t(&[0, 1]), t(&[1, 1])];
        let map = VariableMap { slots: vec![Slot::FromParent(0), Slot::FromParent(0)] };
        let joined = join_operands(1, &[(&tuples[..], &map)], &[]);
        assert_eq!(joined, vec![t(&[0]), t(&[1])]);
    }

    #[test]
    fn fixed_slot_filters() {
        // F(a, y): only tuples with first column = a contribute
        let tuples = [t(&[0, 1]), t(&[1, 1])];
        let map = VariableMap { slots: vec![Slot::Fixed(0), Slot::FromParent(0)] };
        let joined = join_operands(1, &[(&tuples[..], &map)], &[]);
        assert_eq!(joined, vec![t(&[1])]);
    }

    #[test]
    fn quantifier_upward_values() {
        let group = [Bounds::new(1.0, 1.0), Bounds::new(0.6, 0.9)];
        let (forall, _) = quantify_upward(Quantifier::ForAll, &group);
        assert_eq!(forall, Bounds::new(0.6, 0.9));
        let (exists, _) = quantify_upward(Quantifier::Exists, &group);
        assert_eq!(exists, Bounds::new(1.0, 1.0));
        let (empty, src) = quantify_upward::<f64>(Quantifier::Exists, &[]);
        assert_eq!(empty, Bounds::unknown());
        assert!(src.is_none());
    }

    #[test]
    fn quantifier_downward_values() {
        assert_eq!(
            quantify_downward(Quantifier::ForAll, Bounds::new(1.0, 1.0)),
            Bounds::new(1.0, 1.0)
        );
        assert_eq!(
            quantify_downward(Quantifier::Exists, Bounds::new(0.0, 0.0)),
            Bounds::new(0.0, 0.0)
        );
        // an existential's truth does not pick a witness
        assert_eq!(
            quantify_downward(Quantifier::Exists, Bounds::new(1.0, 1.0)),
            Bounds::new(0.0, 1.0)
        );
    }

    #[test]
    fn bind_substitutes_and_checks() {
        let f: Formula<f64> = parse_formula("F(x,y)").unwrap();
        let universe = vec!["a".to_string()];
        let bound = bind(&f, "x", "a", &universe).unwrap();
        match &bound {
            Formula::Atom { args, .. } => {
                assert_eq!(args[0], Term::Const("a".into()));
                assert_eq!(args[1], Term::Var("y".into()));
            }
            other => panic!("unexpected {:?}", other),
        }
        assert!(matches!(
            bind(&f, "z", "a", &universe),
            Err(BindError::NoSuchVariable(_))
        ));
        assert!(matches!(
            bind(&f, "x", "zz", &universe),
            Err(BindError::UnknownConstant(_))
        ));
    }
}
