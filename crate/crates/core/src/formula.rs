//! Formula syntax trees and knowledge bases.
//!
//! Connectives carry per-operand weights and a bias; negation and the
//! quantifiers are pass-through nodes with no parameters. N-ary
//! conjunction and disjunction chains are flattened at parse time;
//! [`decompose_binary`] rewrites them into nested binary nodes when
//! that form is wanted instead.

use crate::bounds::Bounds;
use crate::{lit, Real};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Var(s) | Term::Const(s) => s,
        }
    }
}

/// A formula operand together with its importance weight.
#[derive(Clone, Debug, PartialEq)]
pub struct Weighted<T> {
    pub weight: T,
    pub formula: Formula<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Formula<T> {
    Atom { pred: String, args: Vec<Term> },
    Not(Box<Formula<T>>),
    And { operands: Vec<Weighted<T>>, bias: T },
    Or { operands: Vec<Weighted<T>>, bias: T },
    Implies { antecedent: Box<Weighted<T>>, consequent: Box<Weighted<T>>, bias: T },
    ForAll { vars: Vec<String>, body: Box<Formula<T>> },
    Exists { vars: Vec<String>, body: Box<Formula<T>> },
}

impl<T: Real> Formula<T> {
    pub fn atom(pred: &str, args: &[Term]) -> Self {
        Formula::Atom {
            pred: pred.to_string(),
            args: args.to_vec(),
        }
    }

    /// Free variables in first-appearance order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Formula::Atom { args, .. } => {
                for t in args {
                    if let Term::Var(v) = t {
                        if !bound.contains(v) && !out.contains(v) {
                            out.push(v.clone());
                        }
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And { operands, .. } | Formula::Or { operands, .. } => {
                for w in operands {
                    w.formula.collect_free(bound, out);
                }
            }
            Formula::Implies { antecedent, consequent, .. } => {
                antecedent.formula.collect_free(bound, out);
                consequent.formula.collect_free(bound, out);
            }
            Formula::ForAll { vars, body } | Formula::Exists { vars, body } => {
                let n = bound.len();
                bound.extend(vars.iter().cloned());
                body.collect_free(bound, out);
                bound.truncate(n);
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // precedence levels: atom/not = 4, and = 3, or = 2, implies = 1,
        // quantifier = 0
        let mine = match self {
            Formula::Atom { .. } | Formula::Not(_) => 4,
            Formula::And { .. } => 3,
            Formula::Or { .. } => 2,
            Formula::Implies { .. } => 1,
            Formula::ForAll { .. } | Formula::Exists { .. } => 0,
        };
        let paren = mine < prec;
        if paren {
            write!(f, "(")?;
        }
        match self {
            Formula::Atom { pred, args } => {
                write!(f, "{}", pred)?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", a.name())?;
                    }
                    write!(f, ")")?;
                }
            }
            Formula::Not(c) => {
                write!(f, "~")?;
                c.fmt_prec(f, 4)?;
            }
            Formula::And { operands, bias } => {
                fmt_chain(f, operands, "&", *bias, 3)?;
            }
            Formula::Or { operands, bias } => {
                fmt_chain(f, operands, "|", *bias, 2)?;
            }
            Formula::Implies { antecedent, consequent, bias } => {
                fmt_weighted(f, antecedent, 2)?;
                write!(f, " ->")?;
                if *bias != T::one() {
                    write!(f, "@{}", bias)?;
                }
                write!(f, " ")?;
                fmt_weighted(f, consequent, 1)?;
            }
            Formula::ForAll { vars, body } => {
                write!(f, "forall {}. ", vars.join(" "))?;
                body.fmt_prec(f, 0)?;
            }
            Formula::Exists { vars, body } => {
                write!(f, "exists {}. ", vars.join(" "))?;
                body.fmt_prec(f, 0)?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn fmt_weighted<T: Real>(
    f: &mut fmt::Formatter<'_>,
    w: &Weighted<T>,
    prec: u8,
) -> fmt::Result {
    // a weighted composite operand needs its own parentheses so the
    // weight reads as attached to the whole operand
    let needs_group = w.weight != T::one()
        && !matches!(w.formula, Formula::Atom { .. } | Formula::Not(_));
    if needs_group {
        write!(f, "(")?;
        w.formula.fmt_prec(f, 0)?;
        write!(f, ")")?;
    } else {
        w.formula.fmt_prec(f, prec)?;
    }
    if w.weight != T::one() {
        write!(f, "^{}", w.weight)?;
    }
    Ok(())
}

fn fmt_chain<T: Real>(
    f: &mut fmt::Formatter<'_>,
    operands: &[Weighted<T>],
    op: &str,
    bias: T,
    prec: u8,
) -> fmt::Result {
    for (i, w) in operands.iter().enumerate() {
        if i > 0 {
            write!(f, " {}", op)?;
            if i == 1 && bias != T::one() {
                write!(f, "@{}", bias)?;
            }
            write!(f, " ")?;
        }
        fmt_weighted(f, w, prec + 1)?;
    }
    Ok(())
}

impl<T: Real> fmt::Display for Formula<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axiom<T> {
    pub id: String,
    pub formula: Formula<T>,
    pub bounds: Bounds<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fact<T> {
    pub pred: String,
    pub args: Vec<String>,
    pub bounds: Bounds<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Query<T> {
    pub id: String,
    pub formula: Formula<T>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct KnowledgeBase<T> {
    /// Predicate name -> arity.
    pub predicates: BTreeMap<String, usize>,
    /// Constant universe in declaration/appearance order.
    pub constants: Vec<String>,
    pub axioms: Vec<Axiom<T>>,
    pub facts: Vec<Fact<T>>,
    pub queries: Vec<Query<T>>,
}

#[derive(Debug, thiserror::Error)]
pub enum KbError {
    #[error("predicate {0} used with arity {1} but declared with arity {2}")]
    ArityMismatch(String, usize, usize),
    #[error("predicate {0} is not declared")]
    UnknownPredicate(String),
    #[error("fact arguments must be constants: {0}")]
    NonGroundFact(String),
    #[error("fact bounds must satisfy 0 <= L <= U <= 1, got [{0}, {1}]")]
    BadFactBounds(f64, f64),
    #[error("duplicate declaration of predicate {0} with conflicting arity")]
    DuplicatePredicate(String),
    #[error("{0}")]
    Invalid(String),
}

impl<T: Real> KnowledgeBase<T> {
    pub fn add_constant(&mut self, name: &str) {
        if !self.constants.iter().any(|c| c == name) {
            self.constants.push(name.to_string());
        }
    }

    /// Merge a fact into the KB; duplicate groundings keep the tightest
    /// bounds.
    pub fn add_fact(&mut self, fact: Fact<T>) {
        for c in &fact.args {
            if !self.constants.iter().any(|k| k == c) {
                self.constants.push(c.clone());
            }
        }
        if let Some(existing) = self
            .facts
            .iter_mut()
            .find(|f| f.pred == fact.pred && f.args == fact.args)
        {
            existing.bounds = existing.bounds.merge_tightest(fact.bounds);
        } else {
            self.facts.push(fact);
        }
    }

    pub fn validate(&self) -> Result<(), KbError> {
        for ax in &self.axioms {
            self.check_formula(&ax.formula)?;
        }
        for q in &self.queries {
            self.check_formula(&q.formula)?;
        }
        for fact in &self.facts {
            match self.predicates.get(&fact.pred) {
                None => return Err(KbError::UnknownPredicate(fact.pred.clone())),
                Some(&a) if a != fact.args.len() => {
                    return Err(KbError::ArityMismatch(fact.pred.clone(), fact.args.len(), a))
                }
                _ => {}
            }
            let (lo, hi) = (fact.bounds.lower, fact.bounds.upper);
            if !(lo >= T::zero() && lo <= hi && hi <= T::one()) {
                return Err(KbError::BadFactBounds(
                    lo.to_f64().unwrap_or(f64::NAN),
                    hi.to_f64().unwrap_or(f64::NAN),
                ));
            }
        }
        Ok(())
    }

    fn check_formula(&self, f: &Formula<T>) -> Result<(), KbError> {
        match f {
            Formula::Atom { pred, args } => match self.predicates.get(pred) {
                None => Err(KbError::UnknownPredicate(pred.clone())),
                Some(&a) if a != args.len() => {
                    Err(KbError::ArityMismatch(pred.clone(), args.len(), a))
                }
                _ => Ok(()),
            },
            Formula::Not(c) => self.check_formula(c),
            Formula::And { operands, bias } | Formula::Or { operands, bias } => {
                if *bias < T::zero() || !bias.is_finite() {
                    return Err(KbError::Invalid("bias must be finite and nonnegative".into()));
                }
                for w in operands {
                    if w.weight < T::zero() || !w.weight.is_finite() {
                        return Err(KbError::Invalid(
                            "weights must be finite and nonnegative".into(),
                        ));
                    }
                    self.check_formula(&w.formula)?;
                }
                Ok(())
            }
            Formula::Implies { antecedent, consequent, bias } => {
                if *bias < T::zero() || !bias.is_finite() {
                    return Err(KbError::Invalid("bias must be finite and nonnegative".into()));
                }
                self.check_formula(&antecedent.formula)?;
                self.check_formula(&consequent.formula)
            }
            Formula::ForAll { body, .. } | Formula::Exists { body, .. } => {
                self.check_formula(body)
            }
        }
    }

    /// Resolve an identifier appearing in an axiom or query argument:
    /// declared constants stay constants, everything else is a variable.
    pub fn resolve_term(&self, name: &str) -> Term {
        if self.constants.iter().any(|c| c == name) {
            Term::Const(name.to_string())
        } else {
            Term::Var(name.to_string())
        }
    }
}

/// Rewrite n-ary conjunction/disjunction nodes into nested binary
/// ones (left-associated). The n-ary and decomposed forms are not
/// numerically equivalent for weighted connectives; this makes the
/// decomposed reading available behind a flag.
pub fn decompose_binary<T: Real>(f: Formula<T>) -> Formula<T> {
    match f {
        Formula::And { operands, bias } => rebuild_chain(operands, bias, true),
        Formula::Or { operands, bias } => rebuild_chain(operands, bias, false),
        Formula::Not(c) => Formula::Not(Box::new(decompose_binary(*c))),
        Formula::Implies { antecedent, consequent, bias } => Formula::Implies {
            antecedent: Box::new(Weighted {
                weight: antecedent.weight,
                formula: decompose_binary(antecedent.formula),
            }),
            consequent: Box::new(Weighted {
                weight: consequent.weight,
                formula: decompose_binary(consequent.formula),
            }),
            bias,
        },
        Formula::ForAll { vars, body } => Formula::ForAll {
            vars,
            body: Box::new(decompose_binary(*body)),
        },
        Formula::Exists { vars, body } => Formula::Exists {
            vars,
            body: Box::new(decompose_binary(*body)),
        },
        other => other,
    }
}

fn rebuild_chain<T: Real>(operands: Vec<Weighted<T>>, bias: T, is_and: bool) -> Formula<T> {
    let make = |operands: Vec<Weighted<T>>| {
        if is_and {
            Formula::And { operands, bias }
        } else {
            Formula::Or { operands, bias }
        }
    };
    let mut iter = operands.into_iter().map(|w| Weighted {
        weight: w.weight,
        formula: decompose_binary(w.formula),
    });
    let first = match iter.next() {
        Some(f) => f,
        None => return make(Vec::new()),
    };
    let second = match iter.next() {
        Some(s) => s,
        None => return make(vec![first]),
    };
    let mut acc = make(vec![first, second]);
    for next in iter {
        acc = make(vec![
            Weighted {
                weight: T::one(),
                formula: acc,
            },
            next,
        ]);
    }
    acc
}

/// Convenience: weight-1 wrapper.
pub fn w1<T: Real>(formula: Formula<T>) -> Weighted<T> {
    Weighted {
        weight: lit(1.0),
        formula,
    }
}
