//! Activation families: values, functional inverses and analytic
//! partial derivatives for every connective, in each supported logic.
//!
//! A connective's truth function is a parameterised activation over
//! its operand truth values. The engine evaluates these both forward
//! (upward pass) and inverted (downward pass); every kernel returns a
//! [`DualValue`] carrying exact local partials so the training tape
//! can chain them.

pub mod clamp;
pub mod godel;
pub mod logistic;
pub mod lukasiewicz;
pub mod prob;
pub mod tailored;

use crate::bounds::Bounds;
use crate::{lit, Real};
use serde::{Deserialize, Serialize};

pub use clamp::transparent_clamp;

/// Activation family tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Lukasiewicz,
    Godel,
    Tailored,
    Logistic,
    Probability,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_lowercase().as_str() {
            "lukasiewicz" | "luk" => Some(Family::Lukasiewicz),
            "godel" | "goedel" => Some(Family::Godel),
            "tailored" => Some(Family::Tailored),
            "logistic" => Some(Family::Logistic),
            "probability" | "prob" => Some(Family::Probability),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Lukasiewicz => "lukasiewicz",
            Family::Godel => "godel",
            Family::Tailored => "tailored",
            Family::Logistic => "logistic",
            Family::Probability => "probability",
        }
    }
}

/// Identifies which parameter or input a partial derivative is with
/// respect to. Upward kernels use `Bias`/`Weight`/`Input`; the
/// bounds-level wrappers and downward rules use the side-tagged
/// variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wrt {
    Bias,
    Weight(usize),
    Input(usize),
    InputLower(usize),
    InputUpper(usize),
    OutputLower,
    OutputUpper,
}

/// A value plus its local partial derivatives.
#[derive(Clone, Debug)]
pub struct DualValue<T> {
    pub value: T,
    pub partials: Vec<(Wrt, T)>,
}

impl<T: Real> DualValue<T> {
    pub fn constant(value: T) -> Self {
        DualValue {
            value,
            partials: Vec::new(),
        }
    }

    pub fn partial(&self, wrt: Wrt) -> T {
        self.partials
            .iter()
            .find(|(w, _)| *w == wrt)
            .map(|&(_, d)| d)
            .unwrap_or_else(T::zero)
    }

    /// Retag `Input(i)` partials with a bound side; used when a
    /// single-sided kernel is applied to one side of operand bounds.
    fn retag(mut self, f: impl Fn(usize) -> Wrt) -> Self {
        for (w, _) in self.partials.iter_mut() {
            if let Wrt::Input(i) = *w {
                *w = f(i);
            }
        }
        self
    }
}

/// Per-connective parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConnectiveParams<T> {
    pub family: Family,
    /// Threshold of truth in `(1/2, 1]`.
    pub alpha: T,
    /// Bias `beta >= 0`. The Gödel family applies it per operand; the
    /// tailored family ignores it (the activation fixes it analytically).
    pub beta: T,
    /// Operand importance weights, `w_i >= 0`.
    pub weights: Vec<T>,
    /// Gradient scale `a` for transparent clamping (1 = fully
    /// transparent, 0 = conventional clamp).
    pub grad_scale: T,
}

impl<T: Real> ConnectiveParams<T> {
    pub fn unit(family: Family, alpha: T, arity: usize) -> Self {
        ConnectiveParams {
            family,
            alpha,
            beta: T::one(),
            weights: vec![T::one(); arity],
            grad_scale: T::one(),
        }
    }

    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    pub fn weight_sum(&self) -> T {
        self.weights.iter().fold(T::zero(), |a, &w| a + w)
    }

    pub fn weight_max(&self) -> T {
        self.weights.iter().fold(T::zero(), |a, &w| a.max(w))
    }

    /// Check the structural invariants for this family.
    pub fn validate(&self) -> Result<(), String> {
        let half = lit::<T>(0.5);
        if !(self.alpha > half && self.alpha <= T::one()) {
            return Err(format!("alpha must be in (1/2, 1], got {}", self.alpha));
        }
        if !self.beta.is_finite() || self.beta < T::zero() {
            return Err(format!("bias must be finite and nonnegative, got {}", self.beta));
        }
        for (i, &w) in self.weights.iter().enumerate() {
            if !w.is_finite() || w < T::zero() {
                return Err(format!("weight {} must be finite and nonnegative, got {}", i, w));
            }
        }
        match self.family {
            Family::Tailored => {
                let sum = self.weight_sum();
                let wmax = self.weight_max();
                if sum > T::zero() {
                    let floor = sum / (sum + wmax);
                    if self.alpha < floor - lit(1e-12) {
                        return Err(format!(
                            "tailored family needs alpha > {} for these weights, got {}",
                            floor, self.alpha
                        ));
                    }
                }
                Ok(())
            }
            Family::Logistic => {
                if self.alpha >= T::one() {
                    Err("logistic family is undefined at alpha = 1".to_string())
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Optional lower/upper tightening proposals from a downward rule.
/// `None` means the rule's guard failed or the operand weight was
/// below `w_min`: no proof is offered.
#[derive(Clone, Debug, Default)]
pub struct Downward<T> {
    pub lower: Option<DualValue<T>>,
    pub upper: Option<DualValue<T>>,
}

pub(crate) fn complement_bounds<T: Real>(bs: &[Bounds<T>]) -> Vec<Bounds<T>> {
    bs.iter()
        .map(|b| Bounds::new(T::one() - b.upper, T::one() - b.lower))
        .collect()
}

// ---------------------------------------------------------------------------
// Upward dispatch over operand bounds.
//
// Lower outputs are computed from operand lowers and upper outputs
// from operand uppers, with antitone positions swapped (implication
// antecedents, complemented inputs).
// ---------------------------------------------------------------------------

pub fn up_and<T: Real>(p: &ConnectiveParams<T>, xs: &[Bounds<T>]) -> (DualValue<T>, DualValue<T>) {
    match p.family {
        Family::Lukasiewicz => {
            let lo: Vec<T> = xs.iter().map(|b| b.lower).collect();
            let hi: Vec<T> = xs.iter().map(|b| b.upper).collect();
            (
                lukasiewicz::luk_and(p, &lo).retag(Wrt::InputLower),
                lukasiewicz::luk_and(p, &hi).retag(Wrt::InputUpper),
            )
        }
        Family::Godel => {
            let betas = vec![p.beta; xs.len()];
            let lo: Vec<T> = xs.iter().map(|b| b.lower).collect();
            let hi: Vec<T> = xs.iter().map(|b| b.upper).collect();
            (
                godel::godel_and(&betas, &p.weights, &lo, p.grad_scale).retag(Wrt::InputLower),
                godel::godel_and(&betas, &p.weights, &hi, p.grad_scale).retag(Wrt::InputUpper),
            )
        }
        Family::Tailored => {
            let lo: Vec<T> = xs.iter().map(|b| b.lower).collect();
            let hi: Vec<T> = xs.iter().map(|b| b.upper).collect();
            (
                tailored::eval_inputs(tailored::Form::Conjunction, p, &lo).retag(Wrt::InputLower),
                tailored::eval_inputs(tailored::Form::Conjunction, p, &hi).retag(Wrt::InputUpper),
            )
        }
        Family::Logistic => {
            let lo: Vec<T> = xs.iter().map(|b| b.lower).collect();
            let hi: Vec<T> = xs.iter().map(|b| b.upper).collect();
            (
                logistic::eval_inputs(tailored::Form::Conjunction, p, &lo).retag(Wrt::InputLower),
                logistic::eval_inputs(tailored::Form::Conjunction, p, &hi).retag(Wrt::InputUpper),
            )
        }
        Family::Probability => prob::up_and(xs),
    }
}

pub fn up_or<T: Real>(p: &ConnectiveParams<T>, xs: &[Bounds<T>]) -> (DualValue<T>, DualValue<T>) {
    match p.family {
        Family::Lukasiewicz => {
            let lo: Vec<T> = xs.iter().map(|b| b.lower).collect();
            let hi: Vec<T> = xs.iter().map(|b| b.upper).collect();
            (
                lukasiewicz::luk_or(p, &lo).retag(Wrt::InputLower),
                lukasiewicz::luk_or(p, &hi).retag(Wrt::InputUpper),
            )
        }
        Family::Godel => {
            let betas = vec![p.beta; xs.len()];
            let lo: Vec<T> = xs.iter().map(|b| b.lower).collect();
            let hi: Vec<T> = xs.iter().map(|b| b.upper).collect();
            (
                godel::godel_or(&betas, &p.weights, &lo, p.grad_scale).retag(Wrt::InputLower),
                godel::godel_or(&betas, &p.weights, &hi, p.grad_scale).retag(Wrt::InputUpper),
            )
        }
        Family::Tailored => {
            let lo: Vec<T> = xs.iter().map(|b| b.lower).collect();
            let hi: Vec<T> = xs.iter().map(|b| b.upper).collect();
            (
                tailored::eval_inputs(tailored::Form::Disjunction, p, &lo).retag(Wrt::InputLower),
                tailored::eval_inputs(tailored::Form::Disjunction, p, &hi).retag(Wrt::InputUpper),
            )
        }
        Family::Logistic => {
            let lo: Vec<T> = xs.iter().map(|b| b.lower).collect();
            let hi: Vec<T> = xs.iter().map(|b| b.upper).collect();
            (
                logistic::eval_inputs(tailored::Form::Disjunction, p, &lo).retag(Wrt::InputLower),
                logistic::eval_inputs(tailored::Form::Disjunction, p, &hi).retag(Wrt::InputUpper),
            )
        }
        Family::Probability => prob::up_or(xs),
    }
}

/// Implication `x -> y`: lower output pairs the antecedent upper with
/// the consequent lower, and vice versa.
pub fn up_implies<T: Real>(
    p: &ConnectiveParams<T>,
    x: Bounds<T>,
    y: Bounds<T>,
) -> (DualValue<T>, DualValue<T>) {
    match p.family {
        Family::Lukasiewicz => {
            let lo = lukasiewicz::luk_residuum(p, x.upper, y.lower).retag(|i| match i {
                0 => Wrt::InputUpper(0),
                _ => Wrt::InputLower(1),
            });
            let hi = lukasiewicz::luk_residuum(p, x.lower, y.upper).retag(|i| match i {
                0 => Wrt::InputLower(0),
                _ => Wrt::InputUpper(1),
            });
            (lo, hi)
        }
        Family::Godel => {
            let lo = godel::godel_residuum(p, x.upper, y.lower).retag(|i| match i {
                0 => Wrt::InputUpper(0),
                _ => Wrt::InputLower(1),
            });
            let hi = godel::godel_residuum(p, x.lower, y.upper).retag(|i| match i {
                0 => Wrt::InputLower(0),
                _ => Wrt::InputUpper(1),
            });
            (lo, hi)
        }
        // The tailored approach derives implication logically:
        // x -> y  =  (1 - x) | y  on the disjunction form.
        Family::Tailored | Family::Logistic => {
            let complemented = [
                Bounds::new(T::one() - x.upper, T::one() - x.lower),
                Bounds::new(y.lower, y.upper),
            ];
            let (lo, hi) = up_or(p, &complemented);
            let fix = |dv: DualValue<T>| -> DualValue<T> {
                let mut dv = dv;
                for (w, d) in dv.partials.iter_mut() {
                    match *w {
                        // d/d(1-x) = -d/dx, and the sides swap back
                        Wrt::InputLower(0) => {
                            *w = Wrt::InputUpper(0);
                            *d = -*d;
                        }
                        Wrt::InputUpper(0) => {
                            *w = Wrt::InputLower(0);
                            *d = -*d;
                        }
                        _ => {}
                    }
                }
                dv
            };
            (fix(lo), fix(hi))
        }
        Family::Probability => prob::up_implies(x, y),
    }
}

// ---------------------------------------------------------------------------
// Downward dispatch.
// ---------------------------------------------------------------------------

/// Downward proposals for operand `j` of an n-ary disjunction.
pub fn down_or<T: Real>(
    p: &ConnectiveParams<T>,
    w_min: T,
    j: usize,
    operands: &[Bounds<T>],
    z: Bounds<T>,
) -> Downward<T> {
    match p.family {
        Family::Lukasiewicz => lukasiewicz::down_or(p, w_min, j, operands, z),
        Family::Godel => godel::down_or(p, w_min, j, operands, z),
        Family::Tailored => tailored::conditioned_down_or(p, w_min, j, operands, z),
        Family::Logistic => logistic::down_or(p, w_min, j, operands, z),
        Family::Probability => prob::down_or(j, operands, z),
    }
}

/// Downward proposals for operand `j` of an n-ary conjunction.
pub fn down_and<T: Real>(
    p: &ConnectiveParams<T>,
    w_min: T,
    j: usize,
    operands: &[Bounds<T>],
    z: Bounds<T>,
) -> Downward<T> {
    match p.family {
        Family::Lukasiewicz => lukasiewicz::down_and(p, w_min, j, operands, z),
        Family::Godel => godel::down_and(p, w_min, j, operands, z),
        Family::Tailored => tailored::conditioned_down_and(p, w_min, j, operands, z),
        Family::Logistic => logistic::down_and(p, w_min, j, operands, z),
        Family::Probability => prob::down_and(j, operands, z),
    }
}

/// Downward proposals for both operands of `x -> y`; returns
/// `(for_x, for_y)`.
pub fn down_implies<T: Real>(
    p: &ConnectiveParams<T>,
    w_min: T,
    x: Bounds<T>,
    y: Bounds<T>,
    z: Bounds<T>,
) -> (Downward<T>, Downward<T>) {
    match p.family {
        Family::Lukasiewicz => lukasiewicz::down_implies(p, w_min, x, y, z),
        Family::Godel => godel::down_implies(p, w_min, x, y, z),
        Family::Tailored | Family::Logistic => {
            // x -> y  =  (1 - x) | y: run the disjunction rules on the
            // complemented antecedent and translate back.
            let ops = [Bounds::new(T::one() - x.upper, T::one() - x.lower), y];
            let for_not_x = down_or(p, w_min, 0, &ops, z);
            let for_y = down_or(p, w_min, 1, &ops, z).map_inputs(flip_operand0);
            (complement_target(for_not_x, flip_operand0), for_y)
        }
        Family::Probability => prob::down_implies(x, y, z),
    }
}

/// Swap the partial tags of operand 0 between the lower and upper
/// side and negate them; used when operand 0 entered complemented.
fn flip_operand0<T: Real>(w: Wrt, d: T) -> (Wrt, T) {
    match w {
        Wrt::InputLower(0) => (Wrt::InputUpper(0), -d),
        Wrt::InputUpper(0) => (Wrt::InputLower(0), -d),
        other => (other, d),
    }
}

impl<T: Real> Downward<T> {
    fn map_inputs(mut self, f: impl Fn(Wrt, T) -> (Wrt, T)) -> Self {
        let fix = |dv: &mut DualValue<T>| {
            for pd in dv.partials.iter_mut() {
                let (w, d) = f(pd.0, pd.1);
                *pd = (w, d);
            }
        };
        if let Some(dv) = self.lower.as_mut() {
            fix(dv);
        }
        if let Some(dv) = self.upper.as_mut() {
            fix(dv);
        }
        self
    }
}

/// Proposals computed for `¬t` become proposals for `t` with the
/// bounds swapped and complemented.
fn complement_target<T: Real>(
    d: Downward<T>,
    f: impl Fn(Wrt, T) -> (Wrt, T) + Copy,
) -> Downward<T> {
    let comp = |dv: DualValue<T>| -> DualValue<T> {
        let mut out = DualValue {
            value: T::one() - dv.value,
            partials: dv.partials,
        };
        for pd in out.partials.iter_mut() {
            let (w, d) = f(pd.0, -pd.1);
            *pd = (w, d);
        }
        out
    };
    Downward {
        // new lower for t comes from the upper proposal for ¬t
        lower: d.upper.map(comp),
        upper: d.lower.map(comp),
    }
}
