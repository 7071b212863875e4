//! Weighted Łukasiewicz logic.
//!
//! The n-ary weighted t-norm and t-conorm are clamped affine forms:
//!
//! ```text
//! AND: clamp01( beta - sum_i w_i * (1 - x_i) )
//! OR:  clamp01( 1 - beta + sum_i w_i * x_i )
//! x -> y: clamp01( 1 - beta + w_x * (1 - x) + w_y * y )
//! ```
//!
//! The downward rules are the functional inverses of these forms,
//! solved for one operand with the remaining operands at the bound
//! that keeps the result sound; exponent weights come out as
//! `w_i / w_j` and the bias as `beta / w_j`.

use crate::bounds::Bounds;
use crate::semantics::clamp::clamp01;
use crate::semantics::{ConnectiveParams, Downward, DualValue, Wrt};
use crate::Real;

pub fn luk_and<T: Real>(p: &ConnectiveParams<T>, xs: &[T]) -> DualValue<T> {
    debug_assert_eq!(xs.len(), p.weights.len());
    let mut pre = p.beta;
    let mut partials = Vec::with_capacity(2 * xs.len() + 1);
    partials.push((Wrt::Bias, T::one()));
    for (i, (&x, &w)) in xs.iter().zip(&p.weights).enumerate() {
        pre = pre - w * (T::one() - x);
        partials.push((Wrt::Weight(i), x - T::one()));
        partials.push((Wrt::Input(i), w));
    }
    clamp01(DualValue { value: pre, partials }, p.grad_scale)
}

pub fn luk_or<T: Real>(p: &ConnectiveParams<T>, xs: &[T]) -> DualValue<T> {
    debug_assert_eq!(xs.len(), p.weights.len());
    let mut pre = T::one() - p.beta;
    let mut partials = Vec::with_capacity(2 * xs.len() + 1);
    partials.push((Wrt::Bias, -T::one()));
    for (i, (&x, &w)) in xs.iter().zip(&p.weights).enumerate() {
        pre = pre + w * x;
        partials.push((Wrt::Weight(i), x));
        partials.push((Wrt::Input(i), w));
    }
    clamp01(DualValue { value: pre, partials }, p.grad_scale)
}

/// Weighted residuum; antecedent is input 0, consequent input 1.
pub fn luk_residuum<T: Real>(p: &ConnectiveParams<T>, x: T, y: T) -> DualValue<T> {
    let (wx, wy) = (p.weights[0], p.weights[1]);
    let pre = T::one() - p.beta + wx * (T::one() - x) + wy * y;
    let partials = vec![
        (Wrt::Bias, -T::one()),
        (Wrt::Weight(0), T::one() - x),
        (Wrt::Input(0), -wx),
        (Wrt::Weight(1), y),
        (Wrt::Input(1), wy),
    ];
    clamp01(DualValue { value: pre, partials }, p.grad_scale)
}

/// Lower-bound proposal for disjunction operand `j`:
/// `clamp01( (beta - sum_{i != j} w_i U_i - 1 + L_z) / w_j )`,
/// guarded on `L_z > 1 - alpha`.
fn or_down_lower<T: Real>(
    p: &ConnectiveParams<T>,
    j: usize,
    operands: &[Bounds<T>],
    z: Bounds<T>,
) -> DualValue<T> {
    let wj = p.weights[j];
    let mut pre = p.beta - T::one() + z.lower;
    let mut partials = Vec::with_capacity(2 * operands.len() + 2);
    partials.push((Wrt::Bias, T::one() / wj));
    partials.push((Wrt::OutputLower, T::one() / wj));
    for (i, (b, &w)) in operands.iter().zip(&p.weights).enumerate() {
        if i == j {
            continue;
        }
        pre = pre - w * b.upper;
        partials.push((Wrt::Weight(i), -b.upper / wj));
        partials.push((Wrt::InputUpper(i), -w / wj));
    }
    let value = pre / wj;
    partials.push((Wrt::Weight(j), -value / wj));
    clamp01(DualValue { value, partials }, p.grad_scale)
}

fn or_down_upper<T: Real>(
    p: &ConnectiveParams<T>,
    j: usize,
    operands: &[Bounds<T>],
    z: Bounds<T>,
) -> DualValue<T> {
    let wj = p.weights[j];
    let mut pre = p.beta - T::one() + z.upper;
    let mut partials = Vec::with_capacity(2 * operands.len() + 2);
    partials.push((Wrt::Bias, T::one() / wj));
    partials.push((Wrt::OutputUpper, T::one() / wj));
    for (i, (b, &w)) in operands.iter().zip(&p.weights).enumerate() {
        if i == j {
            continue;
        }
        pre = pre - w * b.lower;
        partials.push((Wrt::Weight(i), -b.lower / wj));
        partials.push((Wrt::InputLower(i), -w / wj));
    }
    let value = pre / wj;
    partials.push((Wrt::Weight(j), -value / wj));
    clamp01(DualValue { value, partials }, p.grad_scale)
}

pub fn down_or<T: Real>(
    p: &ConnectiveParams<T>,
    w_min: T,
    j: usize,
    operands: &[Bounds<T>],
    z: Bounds<T>,
) -> Downward<T> {
    if p.weights[j] < w_min {
        return Downward::default();
    }
    let co = T::one() - p.alpha;
    Downward {
        lower: (z.lower > co).then(|| or_down_lower(p, j, operands, z)),
        upper: (z.upper < p.alpha).then(|| or_down_upper(p, j, operands, z)),
    }
}

/// Conjunction downward via De Morgan on the disjunction rules:
/// `clamp01( (w_j - beta + sum_{i != j} w_i (1 - U_i) + L_z) / w_j )`
/// for the lower, dually for the upper.
fn and_down<T: Real>(
    p: &ConnectiveParams<T>,
    j: usize,
    others: impl Iterator<Item = (usize, T)>, // (i, bound of x_i entering)
    z_bound: T,
    z_wrt: Wrt,
    other_wrt: impl Fn(usize) -> Wrt,
) -> DualValue<T> {
    let wj = p.weights[j];
    let mut pre = wj - p.beta + z_bound;
    let mut partials = Vec::new();
    partials.push((Wrt::Bias, -T::one() / wj));
    partials.push((z_wrt, T::one() / wj));
    for (i, xi) in others {
        let w = p.weights[i];
        pre = pre + w * (T::one() - xi);
        partials.push((Wrt::Weight(i), (T::one() - xi) / wj));
        partials.push((other_wrt(i), -w / wj));
    }
    let value = pre / wj;
    partials.push((Wrt::Weight(j), (T::one() - value) / wj));
    clamp01(DualValue { value, partials }, p.grad_scale)
}

pub fn down_and<T: Real>(
    p: &ConnectiveParams<T>,
    w_min: T,
    j: usize,
    operands: &[Bounds<T>],
    z: Bounds<T>,
) -> Downward<T> {
    if p.weights[j] < w_min {
        return Downward::default();
    }
    let co = T::one() - p.alpha;
    let others_hi = || {
        operands
            .iter()
            .enumerate()
            .filter(move |&(i, _)| i != j)
            .map(|(i, b)| (i, b.upper))
    };
    let others_lo = || {
        operands
            .iter()
            .enumerate()
            .filter(move |&(i, _)| i != j)
            .map(|(i, b)| (i, b.lower))
    };
    Downward {
        lower: (z.lower > co)
            .then(|| and_down(p, j, others_hi(), z.lower, Wrt::OutputLower, Wrt::InputUpper)),
        upper: (z.upper < p.alpha)
            .then(|| and_down(p, j, others_lo(), z.upper, Wrt::OutputUpper, Wrt::InputLower)),
    }
}

/// Downward rules for `x -> y`. Modus ponens tightens the consequent
/// lower, modus tollens the antecedent upper; the remaining two rules
/// are their duals.
pub fn down_implies<T: Real>(
    p: &ConnectiveParams<T>,
    w_min: T,
    x: Bounds<T>,
    y: Bounds<T>,
    z: Bounds<T>,
) -> (Downward<T>, Downward<T>) {
    let (wx, wy) = (p.weights[0], p.weights[1]);
    let co = T::one() - p.alpha;
    let a = p.grad_scale;

    let mut for_x = Downward::default();
    let mut for_y = Downward::default();

    if wx >= w_min {
        // x >= (w_x - beta + 1 - U_z + w_y L_y) / w_x   if U_z < alpha
        if z.upper < p.alpha {
            let value = (wx - p.beta + T::one() - z.upper + wy * y.lower) / wx;
            let partials = vec![
                (Wrt::Bias, -T::one() / wx),
                (Wrt::OutputUpper, -T::one() / wx),
                (Wrt::InputLower(1), wy / wx),
                (Wrt::Weight(1), y.lower / wx),
                (Wrt::Weight(0), (T::one() - value) / wx),
            ];
            for_x.lower = Some(clamp01(DualValue { value, partials }, a));
        }
        // x <= (w_x - beta + 1 - L_z + w_y U_y) / w_x   if L_z > 1 - alpha
        if z.lower > co {
            let value = (wx - p.beta + T::one() - z.lower + wy * y.upper) / wx;
            let partials = vec![
                (Wrt::Bias, -T::one() / wx),
                (Wrt::OutputLower, -T::one() / wx),
                (Wrt::InputUpper(1), wy / wx),
                (Wrt::Weight(1), y.upper / wx),
                (Wrt::Weight(0), (T::one() - value) / wx),
            ];
            for_x.upper = Some(clamp01(DualValue { value, partials }, a));
        }
    }
    if wy >= w_min {
        // y >= (L_z - 1 + beta - w_x (1 - L_x)) / w_y   if L_z > 1 - alpha
        if z.lower > co {
            let value = (z.lower - T::one() + p.beta - wx * (T::one() - x.lower)) / wy;
            let partials = vec![
                (Wrt::Bias, T::one() / wy),
                (Wrt::OutputLower, T::one() / wy),
                (Wrt::InputLower(0), wx / wy),
                (Wrt::Weight(0), (x.lower - T::one()) / wy),
                (Wrt::Weight(1), -value / wy),
            ];
            for_y.lower = Some(clamp01(DualValue { value, partials }, a));
        }
        // y <= (U_z - 1 + beta - w_x (1 - U_x)) / w_y   if U_z < alpha
        if z.upper < p.alpha {
            let value = (z.upper - T::one() + p.beta - wx * (T::one() - x.upper)) / wy;
            let partials = vec![
                (Wrt::Bias, T::one() / wy),
                (Wrt::OutputUpper, T::one() / wy),
                (Wrt::InputUpper(0), wx / wy),
                (Wrt::Weight(0), (x.upper - T::one()) / wy),
                (Wrt::Weight(1), -value / wy),
            ];
            for_y.upper = Some(clamp01(DualValue { value, partials }, a));
        }
    }
    (for_x, for_y)
}
