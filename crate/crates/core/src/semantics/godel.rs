//! Weighted Gödel logic.
//!
//! The weighted Gödel t-norm is the min of per-operand unary weighted
//! Łukasiewicz norms, `clamp01(min_i { beta_i - w_i (1 - x_i) })`; the
//! t-conorm is the max of `{1 - beta_i + w_i x_i}`. Partials flow only
//! to the arg-min/arg-max operand, ties broken toward the lowest index.
//!
//! The downward rules are term-wise inverses: an output bound bounds
//! the selected term directly, and a lower (upper) disjunction
//! (conjunction) bound transfers to operand `j` only when no other
//! operand can account for it.

use crate::bounds::Bounds;
use crate::semantics::clamp::{clamp01, sat};
use crate::semantics::{ConnectiveParams, Downward, DualValue, Wrt};
use crate::Real;

/// `clamp01(min_i { beta_i - w_i (1 - x_i) })`.
pub fn godel_and<T: Real>(betas: &[T], weights: &[T], xs: &[T], grad_scale: T) -> DualValue<T> {
    debug_assert!(betas.len() == xs.len() && weights.len() == xs.len());
    let mut best = T::infinity();
    let mut k = 0;
    for i in 0..xs.len() {
        let t = betas[i] - weights[i] * (T::one() - xs[i]);
        if t < best {
            best = t;
            k = i;
        }
    }
    let partials = vec![
        (Wrt::Bias, T::one()),
        (Wrt::Weight(k), xs[k] - T::one()),
        (Wrt::Input(k), weights[k]),
    ];
    clamp01(DualValue { value: best, partials }, grad_scale)
}

/// `clamp01(max_i { 1 - beta_i + w_i x_i })`.
pub fn godel_or<T: Real>(betas: &[T], weights: &[T], xs: &[T], grad_scale: T) -> DualValue<T> {
    debug_assert!(betas.len() == xs.len() && weights.len() == xs.len());
    let mut best = T::neg_infinity();
    let mut k = 0;
    for i in 0..xs.len() {
        let t = T::one() - betas[i] + weights[i] * xs[i];
        if t > best {
            best = t;
            k = i;
        }
    }
    let partials = vec![
        (Wrt::Bias, -T::one()),
        (Wrt::Weight(k), xs[k]),
        (Wrt::Input(k), weights[k]),
    ];
    clamp01(DualValue { value: best, partials }, grad_scale)
}

/// Weighted Gödel residuum: `y' if x' > y' else 1` on the unary
/// weighted operand norms.
pub fn godel_residuum<T: Real>(p: &ConnectiveParams<T>, x: T, y: T) -> DualValue<T> {
    let xv = sat(p.beta - p.weights[0] * (T::one() - x));
    let yv_pre = T::one() - p.beta + p.weights[1] * y;
    let yv = sat(yv_pre);
    if xv > yv {
        let scale = if (T::zero()..=T::one()).contains(&yv_pre) {
            T::one()
        } else {
            p.grad_scale
        };
        DualValue {
            value: yv,
            partials: vec![
                (Wrt::Bias, -scale),
                (Wrt::Weight(1), y * scale),
                (Wrt::Input(1), p.weights[1] * scale),
            ],
        }
    } else {
        DualValue::constant(T::one())
    }
}

fn term_upper<T: Real>(p: &ConnectiveParams<T>, b: Bounds<T>, i: usize, or_form: bool) -> T {
    if or_form {
        sat(T::one() - p.beta + p.weights[i] * b.upper)
    } else {
        sat(p.beta - p.weights[i] * (T::one() - b.lower))
    }
}

/// Downward rules for the Gödel disjunction.
pub fn down_or<T: Real>(
    p: &ConnectiveParams<T>,
    w_min: T,
    j: usize,
    operands: &[Bounds<T>],
    z: Bounds<T>,
) -> Downward<T> {
    let wj = p.weights[j];
    if wj < w_min {
        return Downward::default();
    }
    let co = T::one() - p.alpha;
    let mut out = Downward::default();
    // Every term is below the output: x_j <= (U_z - 1 + beta_j) / w_j.
    if z.upper < p.alpha {
        let value = (z.upper - T::one() + p.beta) / wj;
        let partials = vec![
            (Wrt::OutputUpper, T::one() / wj),
            (Wrt::Bias, T::one() / wj),
            (Wrt::Weight(j), -value / wj),
        ];
        out.upper = Some(clamp01(DualValue { value, partials }, p.grad_scale));
    }
    // The max must be reached by operand j when no other operand can
    // supply it.
    if z.lower > co {
        let others_cap = operands
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(i, b)| term_upper(p, *b, i, true))
            .fold(T::neg_infinity(), |a, t| a.max(t));
        if z.lower > others_cap {
            let value = (z.lower - T::one() + p.beta) / wj;
            let partials = vec![
                (Wrt::OutputLower, T::one() / wj),
                (Wrt::Bias, T::one() / wj),
                (Wrt::Weight(j), -value / wj),
            ];
            out.lower = Some(clamp01(DualValue { value, partials }, p.grad_scale));
        }
    }
    out
}

/// Downward rules for the Gödel conjunction.
pub fn down_and<T: Real>(
    p: &ConnectiveParams<T>,
    w_min: T,
    j: usize,
    operands: &[Bounds<T>],
    z: Bounds<T>,
) -> Downward<T> {
    let wj = p.weights[j];
    if wj < w_min {
        return Downward::default();
    }
    let co = T::one() - p.alpha;
    let mut out = Downward::default();
    // Every term is above the output: x_j >= 1 - (beta_j - L_z) / w_j.
    if z.lower > co {
        let value = T::one() - (p.beta - z.lower) / wj;
        let partials = vec![
            (Wrt::OutputLower, T::one() / wj),
            (Wrt::Bias, -T::one() / wj),
            (Wrt::Weight(j), (p.beta - z.lower) / (wj * wj)),
        ];
        out.lower = Some(clamp01(DualValue { value, partials }, p.grad_scale));
    }
    // The min must be reached by operand j when every other operand's
    // term floor sits above the output's upper bound.
    if z.upper < p.alpha {
        let others_floor = operands
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(i, b)| sat(p.beta - p.weights[i] * (T::one() - b.lower)))
            .fold(T::infinity(), |a, t| a.min(t));
        if z.upper < others_floor {
            let value = T::one() - (p.beta - z.upper) / wj;
            let partials = vec![
                (Wrt::OutputUpper, T::one() / wj),
                (Wrt::Bias, -T::one() / wj),
                (Wrt::Weight(j), (p.beta - z.upper) / (wj * wj)),
            ];
            out.upper = Some(clamp01(DualValue { value, partials }, p.grad_scale));
        }
    }
    out
}

/// Downward rules for the Gödel residuum.
pub fn down_implies<T: Real>(
    p: &ConnectiveParams<T>,
    w_min: T,
    x: Bounds<T>,
    y: Bounds<T>,
    z: Bounds<T>,
) -> (Downward<T>, Downward<T>) {
    let (wx, wy) = (p.weights[0], p.weights[1]);
    let co = T::one() - p.alpha;
    let mut for_x = Downward::default();
    let mut for_y = Downward::default();

    // y' >= min(x'_lower, L_z): either the antecedent term was below
    // the consequent term (z = 1 >= L_z and y' >= x') or z = y'.
    if wy >= w_min && z.lower > co {
        let x_floor = sat(p.beta - wx * (T::one() - x.lower));
        let m = x_floor.min(z.lower);
        if m > T::zero() {
            let value = (m - T::one() + p.beta) / wy;
            let partials = if z.lower <= x_floor {
                vec![
                    (Wrt::OutputLower, T::one() / wy),
                    (Wrt::Bias, T::one() / wy),
                    (Wrt::Weight(1), -value / wy),
                ]
            } else {
                vec![
                    (Wrt::InputLower(0), wx / wy),
                    (Wrt::Weight(0), (x.lower - T::one()) / wy),
                    (Wrt::Bias, (T::one() + T::one()) / wy),
                    (Wrt::Weight(1), -value / wy),
                ]
            };
            for_y.lower = Some(clamp01(DualValue { value, partials }, p.grad_scale));
        }
    }
    // A certainly-not-true implication pins the consequent: z < 1
    // forces x' > y' and z = y', so y' <= U_z.
    if wy >= w_min && z.upper < p.alpha {
        let value = (z.upper - T::one() + p.beta) / wy;
        let partials = vec![
            (Wrt::OutputUpper, T::one() / wy),
            (Wrt::Bias, T::one() / wy),
            (Wrt::Weight(1), -value / wy),
        ];
        for_y.upper = Some(clamp01(DualValue { value, partials }, p.grad_scale));
    }
    // Modus tollens: if L_z exceeds the consequent ceiling, the
    // residuum must have fired its "else 1" branch backwards:
    // x' <= y'_upper.
    if wx >= w_min && z.lower > co {
        let y_cap_pre = T::one() - p.beta + wy * y.upper;
        let y_cap = sat(y_cap_pre);
        if z.lower > y_cap {
            let cap_open = y_cap_pre >= T::zero() && y_cap_pre <= T::one();
            let value = (wx - p.beta + y_cap) / wx;
            let mut partials = vec![(Wrt::Weight(0), (T::one() - value) / wx)];
            if cap_open {
                partials.push((Wrt::InputUpper(1), wy / wx));
                partials.push((Wrt::Weight(1), y.upper / wx));
                partials.push((Wrt::Bias, -(T::one() + T::one()) / wx));
            } else {
                partials.push((Wrt::Bias, -T::one() / wx));
            }
            for_x.upper = Some(clamp01(DualValue { value, partials }, p.grad_scale));
        }
    }
    // z < 1 means the residuum took its first branch, so the
    // antecedent term exceeds z: x' >= L_z.
    if wx >= w_min && z.upper < p.alpha && z.lower > T::zero() {
        let value = T::one() - (p.beta - z.lower) / wx;
        let partials = vec![
            (Wrt::OutputLower, T::one() / wx),
            (Wrt::Bias, -T::one() / wx),
            (Wrt::Weight(0), (p.beta - z.lower) / (wx * wx)),
        ];
        for_x.lower = Some(clamp01(DualValue { value, partials }, p.grad_scale));
    }
    (for_x, for_y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::Family;

    fn params(weights: &[f64]) -> ConnectiveParams<f64> {
        ConnectiveParams {
            family: Family::Godel,
            alpha: 1.0,
            beta: 1.0,
            weights: weights.to_vec(),
            grad_scale: 1.0,
        }
    }

    #[test]
    fn and_reduces_to_min() {
        let b: [f64; 2] = [1.0, 1.0];
        let dv = godel_and(&b, &[1.0, 1.0], &[0.6, 0.7], 1.0);
        assert_eq!(dv.value, 0.6);
        // weighted: min(0.8, 0.4)
        let dv: DualValue<f64> = godel_and(&b, &[2.0, 1.0], &[0.9, 0.4], 1.0);
        assert!((dv.value - 0.4).abs() < 1e-12);
        assert_eq!(dv.partial(Wrt::Input(1)), 1.0);
        assert_eq!(dv.partial(Wrt::Input(0)), 0.0);
    }

    #[test]
    fn or_reduces_to_max() {
        let b: [f64; 2] = [1.0, 1.0];
        let dv = godel_or(&b, &[1.0, 1.0], &[0.2, 0.5], 1.0);
        assert_eq!(dv.value, 0.5);
        assert_eq!(dv.partial(Wrt::Input(1)), 1.0);
    }

    #[test]
    fn ties_route_to_lowest_index() {
        let b: [f64; 2] = [1.0, 1.0];
        let dv = godel_and(&b, &[1.0, 1.0], &[0.5, 0.5], 1.0);
        assert_eq!(dv.partial(Wrt::Input(0)), 1.0);
        assert_eq!(dv.partial(Wrt::Input(1)), 0.0);
    }

    #[test]
    fn residuum_classical() {
        let p = params(&[1.0, 1.0]);
        assert_eq!(godel_residuum(&p, 1.0, 0.0).value, 0.0);
        assert_eq!(godel_residuum(&p, 0.3, 0.7).value, 1.0);
        assert_eq!(godel_residuum(&p, 0.7, 0.3).value, 0.3);
    }

    #[test]
    fn downward_partials_match_finite_differences() {
        // interior points with stable branches for each rule family
        let h = 1e-6;
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
        // disjunction lower: z certainly true, other operand capped low
        {
            let eval = |beta: f64, w0: f64, w1: f64, u1: f64, zl: f64| {
                let p = ConnectiveParams {
                    family: Family::Godel,
                    alpha: 0.8,
                    beta,
                    weights: vec![w0, w1],
                    grad_scale: 1.0,
                };
                let ops = [Bounds::new(0.0, 1.0), Bounds::new(0.0, u1)];
                down_or(&p, 0.01, 0, &ops, Bounds::new(zl, 1.0))
                    .lower
                    .map(|d| d.value)
                    .unwrap_or(0.0)
            };
            let base = [0.95, 0.9, 1.0, 0.3, 0.85];
            let p = ConnectiveParams {
                family: Family::Godel,
                alpha: 0.8,
                beta: base[0],
                weights: vec![base[1], base[2]],
                grad_scale: 1.0,
            };
            let ops = [Bounds::new(0.0, 1.0), Bounds::new(0.0, base[3])];
            let d = down_or(&p, 0.01, 0, &ops, Bounds::new(base[4], 1.0));
            let dv = d.lower.expect("fires");
            for &(w, a) in &dv.partials {
                let idx = match w {
                    Wrt::Bias => 0,
                    Wrt::Weight(0) => 1,
                    Wrt::Weight(1) => 2,
                    Wrt::InputUpper(1) => 3,
                    Wrt::OutputLower => 4,
                    other => panic!("unexpected {:?}", other),
                };
                let mut plus = base;
                plus[idx] += h;
                let mut minus = base;
                minus[idx] -= h;
                let fd = (eval(plus[0], plus[1], plus[2], plus[3], plus[4])
                    - eval(minus[0], minus[1], minus[2], minus[3], minus[4]))
                    / (2.0 * h);
                assert!(rel(a, fd) <= 1e-4, "or-lower {:?}: {} vs {}", w, a, fd);
            }
        }
        // residuum consequent lower via the antecedent's term floor
        {
            let eval = |beta: f64, wx: f64, wy: f64, xl: f64, zl: f64| {
                let p = ConnectiveParams {
                    family: Family::Godel,
                    alpha: 0.8,
                    beta,
                    weights: vec![wx, wy],
                    grad_scale: 1.0,
                };
                let (_, for_y) = down_implies(
                    &p,
                    0.01,
                    Bounds::new(xl, 1.0),
                    Bounds::new(0.0, 1.0),
                    Bounds::new(zl, 1.0),
                );
                for_y.lower.map(|d| d.value).unwrap_or(0.0)
            };
            // x's floor below z's lower so the antecedent side wins
            let base = [0.9, 0.8, 1.0, 0.75, 0.9];
            let p = ConnectiveParams {
                family: Family::Godel,
                alpha: 0.8,
                beta: base[0],
                weights: vec![base[1], base[2]],
                grad_scale: 1.0,
            };
            let (_, for_y) = down_implies(
                &p,
                0.01,
                Bounds::new(base[3], 1.0),
                Bounds::new(0.0, 1.0),
                Bounds::new(base[4], 1.0),
            );
            let dv = for_y.lower.expect("fires");
            for &(w, a) in &dv.partials {
                let idx = match w {
                    Wrt::Bias => 0,
                    Wrt::Weight(0) => 1,
                    Wrt::Weight(1) => 2,
                    Wrt::InputLower(0) => 3,
                    Wrt::OutputLower => 4,
                    other => panic!("unexpected {:?}", other),
                };
                let mut plus = base;
                plus[idx] += h;
                let mut minus = base;
                minus[idx] -= h;
                let fd = (eval(plus[0], plus[1], plus[2], plus[3], plus[4])
                    - eval(minus[0], minus[1], minus[2], minus[3], minus[4]))
                    / (2.0 * h);
                assert!(rel(a, fd) <= 1e-4, "mp-lower {:?}: {} vs {}", w, a, fd);
            }
        }
    }

    #[test]
    fn downward_or_syllogism() {
        let mut p = params(&[1.0, 1.0]);
        p.alpha = 0.8;
        // z true, other operand certainly below: target must carry it
        let ops = [Bounds::new(0.0, 1.0), Bounds::new(0.0, 0.3)];
        let d = down_or(&p, 0.01, 0, &ops, Bounds::new(0.9, 1.0));
        assert!((d.lower.expect("fires").value - 0.9).abs() < 1e-12);
        // other operand could reach the bound: no proof for target
        let ops = [Bounds::new(0.0, 1.0), Bounds::new(0.0, 1.0)];
        let d = down_or(&p, 0.01, 0, &ops, Bounds::new(0.9, 1.0));
        assert!(d.lower.is_none());
    }

    #[test]
    fn downward_and_upper() {
        let mut p = params(&[1.0, 1.0]);
        p.alpha = 0.8;
        // conj false, other operand certainly true: target is false
        let ops = [Bounds::new(1.0, 1.0), Bounds::new(0.0, 1.0)];
        let d = down_and(&p, 0.01, 1, &ops, Bounds::new(0.0, 0.1));
        assert!((d.upper.expect("fires").value - 0.1).abs() < 1e-12);
        // conj true: every operand at least as true
        let d = down_and(&p, 0.01, 1, &ops, Bounds::new(0.9, 1.0));
        assert!((d.lower.expect("fires").value - 0.9).abs() < 1e-12);
    }
}
