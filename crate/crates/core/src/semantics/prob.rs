//! Probability-bounds semantics.
//!
//! Here `[L, U]` at a node brackets the probability that its formula
//! is classically true under any probability distribution over
//! interpretations consistent with the initial sentences. Lower and
//! upper bounds use different (Fréchet-style) update functions; the
//! family is unweighted, connectives are parameter-free.

use crate::bounds::Bounds;
use crate::semantics::{Downward, DualValue, Wrt};
use crate::Real;

fn capped_sum<T: Real>(v: T) -> (T, bool) {
    if v > T::one() {
        (T::one(), true)
    } else {
        (v, false)
    }
}

fn floored<T: Real>(v: T) -> (T, bool) {
    if v < T::zero() {
        (T::zero(), true)
    } else {
        (v, false)
    }
}

/// AND: `L = max(0, 1 - sum(1 - L_i))`, `U = min_i U_i`.
pub fn up_and<T: Real>(xs: &[Bounds<T>]) -> (DualValue<T>, DualValue<T>) {
    let mut lo = T::one();
    for b in xs {
        lo = lo - (T::one() - b.lower);
    }
    let (lo, clamped) = floored(lo);
    let lower = DualValue {
        value: lo,
        partials: if clamped {
            vec![]
        } else {
            (0..xs.len()).map(|i| (Wrt::InputLower(i), T::one())).collect()
        },
    };
    let mut k = 0;
    for (i, b) in xs.iter().enumerate() {
        if b.upper < xs[k].upper {
            k = i;
        }
    }
    let upper = DualValue {
        value: xs[k].upper,
        partials: vec![(Wrt::InputUpper(k), T::one())],
    };
    (lower, upper)
}

/// OR: `L = max_i L_i`, `U = min(1, sum U_i)`.
pub fn up_or<T: Real>(xs: &[Bounds<T>]) -> (DualValue<T>, DualValue<T>) {
    let mut k = 0;
    for (i, b) in xs.iter().enumerate() {
        if b.lower > xs[k].lower {
            k = i;
        }
    }
    let lower = DualValue {
        value: xs[k].lower,
        partials: vec![(Wrt::InputLower(k), T::one())],
    };
    let mut hi = T::zero();
    for b in xs {
        hi = hi + b.upper;
    }
    let (hi, clamped) = capped_sum(hi);
    let upper = DualValue {
        value: hi,
        partials: if clamped {
            vec![]
        } else {
            (0..xs.len()).map(|i| (Wrt::InputUpper(i), T::one())).collect()
        },
    };
    (lower, upper)
}

/// IMPLIES: `L = max(1 - U_x, L_y)`, `U = min(1, 1 - L_x + U_y)`.
pub fn up_implies<T: Real>(x: Bounds<T>, y: Bounds<T>) -> (DualValue<T>, DualValue<T>) {
    let via_x = T::one() - x.upper;
    let lower = if via_x >= y.lower {
        DualValue {
            value: via_x,
            partials: vec![(Wrt::InputUpper(0), -T::one())],
        }
    } else {
        DualValue {
            value: y.lower,
            partials: vec![(Wrt::InputLower(1), T::one())],
        }
    };
    let (hi, clamped) = capped_sum(T::one() - x.lower + y.upper);
    let upper = DualValue {
        value: hi,
        partials: if clamped {
            vec![]
        } else {
            vec![(Wrt::InputLower(0), -T::one()), (Wrt::InputUpper(1), T::one())]
        },
    };
    (lower, upper)
}

/// OR operand: `L_xi = max(0, L_z - sum_{j != i} U_j)`, `U_xi = U_z`.
pub fn down_or<T: Real>(j: usize, operands: &[Bounds<T>], z: Bounds<T>) -> Downward<T> {
    let mut lo = z.lower;
    for (i, b) in operands.iter().enumerate() {
        if i != j {
            lo = lo - b.upper;
        }
    }
    let (lo, clamped) = floored(lo);
    let mut lower = DualValue {
        value: lo,
        partials: vec![],
    };
    if !clamped {
        lower.partials.push((Wrt::OutputLower, T::one()));
        for i in 0..operands.len() {
            if i != j {
                lower.partials.push((Wrt::InputUpper(i), -T::one()));
            }
        }
    }
    let upper = DualValue {
        value: z.upper,
        partials: vec![(Wrt::OutputUpper, T::one())],
    };
    Downward {
        lower: Some(lower),
        upper: Some(upper),
    }
}

/// AND operand: `L_xi = L_z`, `U_xi = min(1, U_z + sum_{j != i} (1 - L_j))`.
pub fn down_and<T: Real>(j: usize, operands: &[Bounds<T>], z: Bounds<T>) -> Downward<T> {
    let lower = DualValue {
        value: z.lower,
        partials: vec![(Wrt::OutputLower, T::one())],
    };
    let mut hi = z.upper;
    for (i, b) in operands.iter().enumerate() {
        if i != j {
            hi = hi + (T::one() - b.lower);
        }
    }
    let (hi, clamped) = capped_sum(hi);
    let mut upper = DualValue {
        value: hi,
        partials: vec![],
    };
    if !clamped {
        upper.partials.push((Wrt::OutputUpper, T::one()));
        for i in 0..operands.len() {
            if i != j {
                upper.partials.push((Wrt::InputLower(i), -T::one()));
            }
        }
    }
    Downward {
        lower: Some(lower),
        upper: Some(upper),
    }
}

/// IMPLIES operands: for the antecedent `L_x = 1 - U_z`,
/// `U_x = min(1, 1 + U_y - L_z)`; for the consequent
/// `L_y = max(0, L_x + L_z - 1)`, `U_y = U_z`.
pub fn down_implies<T: Real>(
    x: Bounds<T>,
    y: Bounds<T>,
    z: Bounds<T>,
) -> (Downward<T>, Downward<T>) {
    let x_lower = DualValue {
        value: T::one() - z.upper,
        partials: vec![(Wrt::OutputUpper, -T::one())],
    };
    let (xu, xu_clamped) = capped_sum(T::one() + y.upper - z.lower);
    let x_upper = DualValue {
        value: xu,
        partials: if xu_clamped {
            vec![]
        } else {
            vec![(Wrt::InputUpper(1), T::one()), (Wrt::OutputLower, -T::one())]
        },
    };
    let (yl, yl_clamped) = floored(x.lower + z.lower - T::one());
    let y_lower = DualValue {
        value: yl,
        partials: if yl_clamped {
            vec![]
        } else {
            vec![(Wrt::InputLower(0), T::one()), (Wrt::OutputLower, T::one())]
        },
    };
    let y_upper = DualValue {
        value: z.upper,
        partials: vec![(Wrt::OutputUpper, T::one())],
    };
    (
        Downward {
            lower: Some(x_lower),
            upper: Some(x_upper),
        },
        Downward {
            lower: Some(y_lower),
            upper: Some(y_upper),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn or_upward() {
        let xs: [Bounds<f64>; 2] = [Bounds::new(0.3, 0.4), Bounds::new(0.5, 0.6)];
        let (lo, hi) = up_or(&xs);
        assert_eq!(lo.value, 0.5);
        assert_eq!(hi.value, 1.0);
    }

    #[test]
    fn and_upward_classical() {
        let xs: [Bounds<f64>; 2] = [Bounds::new(1.0, 1.0), Bounds::new(1.0, 1.0)];
        let (lo, hi) = up_and(&xs);
        assert_eq!(lo.value, 1.0);
        assert_eq!(hi.value, 1.0);
    }

    #[test]
    fn implies_upward() {
        let (lo, hi) = up_implies(Bounds::<f64>::new(0.9, 1.0), Bounds::new(0.2, 0.3));
        assert!((lo.value - 0.2).abs() < 1e-15);
        assert!((hi.value - 0.4).abs() < 1e-15);
    }

    #[test]
    fn or_downward() {
        let ops: [Bounds<f64>; 2] = [Bounds::new(0.0, 1.0), Bounds::new(0.0, 0.3)];
        let d = down_or(0, &ops, Bounds::new(0.9, 1.0));
        assert!((d.lower.unwrap().value - 0.6).abs() < 1e-15);
        let d = down_or(0, &ops, Bounds::new(0.0, 0.2));
        assert!((d.upper.unwrap().value - 0.2).abs() < 1e-15);
    }

    #[test]
    fn and_downward() {
        let ops: [Bounds<f64>; 2] = [Bounds::new(0.0, 1.0), Bounds::new(0.6, 1.0)];
        let d = down_and(0, &ops, Bounds::new(1.0, 1.0));
        assert_eq!(d.lower.unwrap().value, 1.0);
        let d = down_and(0, &ops, Bounds::new(0.0, 0.5));
        assert!((d.upper.unwrap().value - 0.9).abs() < 1e-15);
    }
}
