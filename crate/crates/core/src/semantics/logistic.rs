//! Tailored logistic activation: a scaled and shifted sigmoid through
//! the same weight-dependent boundary points as the piecewise-linear
//! activation,
//!
//! ```text
//! f(s) = 1 / (1 + exp(-A s + B))
//! A = 2 ln((1 - alpha)/alpha) / (x_F - x_T)
//! B = ln(alpha / (1 - alpha)) + A x_F
//! ```
//!
//! so `f(x_F) = 1 - alpha` and `f(x_T) = alpha` exactly. Undefined at
//! `alpha = 1` (the compile step rejects that configuration). Downward
//! inference uses the smooth functional inverse, guarded on the output
//! bound lying strictly inside `(0, 1)` and on the usual alpha
//! thresholds.

use crate::bounds::Bounds;
use crate::semantics::clamp::sat;
use crate::semantics::tailored::{d_point, points, Form};
use crate::semantics::{ConnectiveParams, Downward, DualValue, Wrt};
use crate::Real;

struct Coeffs<T> {
    a: T,
    b: T,
    x_f: T,
    x_t: T,
    imax: usize,
}

fn coeffs<T: Real>(form: Form, p: &ConnectiveParams<T>) -> Coeffs<T> {
    let pts = points(form, p.alpha, &p.weights);
    let co = T::one() - p.alpha;
    let a = (T::one() + T::one()) * (co / p.alpha).ln() / (pts.x_f - pts.x_t);
    let b = (p.alpha / co).ln() + a * pts.x_f;
    Coeffs {
        a,
        b,
        x_f: pts.x_f,
        x_t: pts.x_t,
        imax: pts.imax,
    }
}

fn d_coeffs<T: Real>(form: Form, p: &ConnectiveParams<T>, c: &Coeffs<T>, i: usize) -> (T, T) {
    // dA/dw_i, dB/dw_i through the moving boundary points
    let dxf = d_point(form, p.alpha, 0, i, c.imax);
    let dxt = d_point(form, p.alpha, 1, i, c.imax);
    let da = -c.a * (dxf - dxt) / (c.x_f - c.x_t);
    let db = da * c.x_f + c.a * dxf;
    (da, db)
}

/// Evaluate on `s = w . x`; tags `Input(i)` and `Weight(i)`.
pub fn eval_inputs<T: Real>(form: Form, p: &ConnectiveParams<T>, xs: &[T]) -> DualValue<T> {
    debug_assert_eq!(xs.len(), p.weights.len());
    let c = coeffs(form, p);
    let mut s = T::zero();
    for (&x, &w) in xs.iter().zip(&p.weights) {
        s = s + w * x;
    }
    let u = c.a * s - c.b;
    let value = T::one() / (T::one() + (-u).exp());
    let slope = value * (T::one() - value);
    let mut partials = Vec::with_capacity(2 * xs.len());
    for (i, (&x, &w)) in xs.iter().zip(&p.weights).enumerate() {
        partials.push((Wrt::Input(i), slope * c.a * w));
        let (da, db) = d_coeffs(form, p, &c, i);
        let d = slope * (da * s + c.a * x - db);
        if d != T::zero() {
            partials.push((Wrt::Weight(i), d));
        }
    }
    DualValue { value, partials }
}

/// Smooth inverse `s = (logit(y) + B) / A` with partials
/// (`OutputLower` = ds/dy, retagged by callers).
fn inverse_dual<T: Real>(form: Form, p: &ConnectiveParams<T>, y: T) -> DualValue<T> {
    let c = coeffs(form, p);
    let logit = (y / (T::one() - y)).ln();
    let value = (logit + c.b) / c.a;
    let mut partials = vec![(
        Wrt::OutputLower,
        T::one() / (c.a * y * (T::one() - y)),
    )];
    for i in 0..p.weights.len() {
        let (da, db) = d_coeffs(form, p, &c, i);
        let d = db / c.a - value * da / c.a;
        if d != T::zero() {
            partials.push((Wrt::Weight(i), d));
        }
    }
    DualValue { value, partials }
}

fn invert_for_target<T: Real>(
    form: Form,
    p: &ConnectiveParams<T>,
    j: usize,
    operands: &[Bounds<T>],
    y: T,
    upper: bool,
) -> DualValue<T> {
    let wj = p.weights[j];
    let inv = inverse_dual(form, p, y);
    let mut s = inv.value;
    let mut partials: Vec<(Wrt, T)> = Vec::new();
    for &(w, d) in &inv.partials {
        let tag = if w == Wrt::OutputLower {
            if upper {
                Wrt::OutputUpper
            } else {
                Wrt::OutputLower
            }
        } else {
            w
        };
        partials.push((tag, d / wj));
    }
    for (i, b) in operands.iter().enumerate() {
        if i == j {
            continue;
        }
        let (x, tag) = if upper {
            (b.lower, Wrt::InputLower(i))
        } else {
            (b.upper, Wrt::InputUpper(i))
        };
        s = s - p.weights[i] * x;
        partials.push((tag, -p.weights[i] / wj));
        if let Some(pd) = partials.iter_mut().find(|(t, _)| *t == Wrt::Weight(i)) {
            pd.1 = pd.1 - x / wj;
        } else {
            partials.push((Wrt::Weight(i), -x / wj));
        }
    }
    let value = s / wj;
    if let Some(pd) = partials.iter_mut().find(|(t, _)| *t == Wrt::Weight(j)) {
        pd.1 = pd.1 - value / wj;
    } else {
        partials.push((Wrt::Weight(j), -value / wj));
    }
    DualValue {
        value: sat(value),
        partials,
    }
}

fn strictly_open<T: Real>(y: T) -> bool {
    y > T::zero() && y < T::one()
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
        lower: (z.lower > co && strictly_open(z.lower))
            .then(|| invert_for_target(Form::Disjunction, p, j, operands, z.lower, false)),
        upper: (z.upper < p.alpha && strictly_open(z.upper))
            .then(|| invert_for_target(Form::Disjunction, p, j, operands, z.upper, true)),
    }
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
    Downward {
        lower: (z.lower > co && strictly_open(z.lower))
            .then(|| invert_for_target(Form::Conjunction, p, j, operands, z.lower, false)),
        upper: (z.upper < p.alpha && strictly_open(z.upper))
            .then(|| invert_for_target(Form::Conjunction, p, j, operands, z.upper, true)),
    }
}
