//! Tailored piecewise-linear activation.
//!
//! Instead of constraining weights so a static activation stays
//! classical, the activation itself moves with the weights: it is the
//! linear interpolation through `(0, 0)`, `(x_F, 1 - alpha)`,
//! `(x_T, alpha)` and `(x_max, 1)` applied to the preactivation
//! `s = w . x`, where for the disjunction form
//!
//! ```text
//! x_F = (1 - alpha) * sum(w),  x_T = alpha * w_max,  x_max = sum(w)
//! ```
//!
//! and the conjunction form is the De Morgan image
//! (`x_F = sum(w) - alpha * w_max`, `x_T = alpha * sum(w)`). Classical
//! inputs then yield classical outputs for any weights. Kink
//! derivatives take the right-hand segment slope.
//!
//! Downward inference combines the logical tautology
//! `B = A -> (A & B)` (evaluated upward) with the functional inverse,
//! taking the tautology inside the output's classical region and the
//! looser of the two elsewhere; candidates that land outside the
//! classical region of the bound they would tighten are withheld, so
//! an unknown output teaches nothing.

use crate::bounds::Bounds;
use crate::semantics::clamp::sat;
use crate::semantics::{complement_bounds, ConnectiveParams, Downward, DualValue, Wrt};
use crate::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Conjunction,
    Disjunction,
}

/// Critical abscissae `(x_f, x_t, x_max)` and their derivatives with
/// respect to each weight. `imax` is the arg-max weight (lowest index
/// on ties), which is where the `w_max` derivative routes.
pub(crate) struct Points<T> {
    pub x_f: T,
    pub x_t: T,
    pub x_max: T,
    pub imax: usize,
}

pub(crate) fn points<T: Real>(form: Form, alpha: T, weights: &[T]) -> Points<T> {
    let sum = weights.iter().fold(T::zero(), |a, &w| a + w);
    let mut imax = 0;
    let mut wmax = T::neg_infinity();
    for (i, &w) in weights.iter().enumerate() {
        if w > wmax {
            wmax = w;
            imax = i;
        }
    }
    match form {
        Form::Disjunction => Points {
            x_f: (T::one() - alpha) * sum,
            x_t: alpha * wmax,
            x_max: sum,
            imax,
        },
        Form::Conjunction => Points {
            x_f: sum - alpha * wmax,
            x_t: alpha * sum,
            x_max: sum,
            imax,
        },
    }
}

pub(crate) fn d_point<T: Real>(form: Form, alpha: T, which: u8, i: usize, imax: usize) -> T {
    // derivative of x_f / x_t / x_max w.r.t. weight i
    let ind = if i == imax { T::one() } else { T::zero() };
    match (form, which) {
        (Form::Disjunction, 0) => T::one() - alpha,
        (Form::Disjunction, 1) => alpha * ind,
        (Form::Conjunction, 0) => T::one() - alpha * ind,
        (Form::Conjunction, 1) => alpha,
        (_, _) => T::one(), // x_max = sum(w)
    }
}

/// Count of strictly positive weights, and the index of the last one.
fn positive_weights<T: Real>(weights: &[T]) -> (usize, usize) {
    let mut n = 0;
    let mut k = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > T::zero() {
            n += 1;
            k = i;
        }
    }
    (n, k)
}

/// Evaluate the activation on the preactivation `s = w . x` built from
/// the given inputs. Partial tags: `Input(i)`, `Weight(i)`.
pub fn eval_inputs<T: Real>(form: Form, p: &ConnectiveParams<T>, xs: &[T]) -> DualValue<T> {
    debug_assert_eq!(xs.len(), p.weights.len());
    let (npos, k) = positive_weights(&p.weights);
    if npos == 0 {
        // dead state: a conjunction of nothing is true, a disjunction false
        let v = match form {
            Form::Conjunction => T::one(),
            Form::Disjunction => T::zero(),
        };
        return DualValue::constant(v);
    }
    if npos == 1 {
        // all three segments have slope 1/w_k, so the activation is the
        // identity on the surviving input (zero weighting is exact)
        return DualValue {
            value: sat(xs[k]),
            partials: vec![(Wrt::Input(k), T::one())],
        };
    }
    let mut s = T::zero();
    for (&x, &w) in xs.iter().zip(&p.weights) {
        s = s + w * x;
    }
    let pts = points(form, p.alpha, &p.weights);
    let dv = eval_pre(form, p.alpha, &p.weights, &pts, s);
    // chain through s = w . x
    let ds = dv.partial(Wrt::Input(0)); // df/ds, see eval_pre
    let mut partials: Vec<(Wrt, T)> = dv
        .partials
        .iter()
        .filter(|(w, _)| !matches!(w, Wrt::Input(_)))
        .cloned()
        .collect();
    for (i, (&x, &w)) in xs.iter().zip(&p.weights).enumerate() {
        partials.push((Wrt::Input(i), ds * w));
        // direct dependence of s on w_i adds ds * x_i to the point-term
        if let Some(pd) = partials.iter_mut().find(|(t, _)| *t == Wrt::Weight(i)) {
            pd.1 = pd.1 + ds * x;
        } else {
            partials.push((Wrt::Weight(i), ds * x));
        }
    }
    DualValue {
        value: dv.value,
        partials,
    }
}

/// Activation value and derivatives at preactivation `s`, reported as
/// `Input(0)` = df/ds plus `Weight(i)` terms from the moving critical
/// points only.
fn eval_pre<T: Real>(form: Form, alpha: T, weights: &[T], pts: &Points<T>, s: T) -> DualValue<T> {
    // segment endpoints (xa, ya) -> (xb, yb), with point tags 0=x_f,
    // 1=x_t, 2=x_max for derivative lookup; tag 3 is the fixed origin.
    let co = T::one() - alpha;
    let (xa, ya, ta, xb, yb, tb) = if s < pts.x_f {
        (T::zero(), T::zero(), 3u8, pts.x_f, co, 0u8)
    } else if s < pts.x_t {
        (pts.x_f, co, 0, pts.x_t, alpha, 1)
    } else if pts.x_max - pts.x_t > T::zero() {
        (pts.x_t, alpha, 1, pts.x_max, T::one(), 2)
    } else {
        // x_T = x_max (alpha = 1, conjunction form): only s = x_max
        // lands here; extend the middle segment, whose right endpoint
        // value is alpha = 1 there
        (pts.x_f, co, 0, pts.x_t, alpha, 1)
    };
    let width = xb - xa;
    if width <= T::zero() {
        // middle segment degenerate: alpha sits at its constraint
        // floor and the activation steps between the classical regions
        let v = if s >= pts.x_t { alpha } else { co };
        return DualValue::constant(sat(v));
    }
    let m = (yb - ya) / width;
    let value = ya + (s - xa) * m;
    let mut partials = vec![(Wrt::Input(0), m)];
    for i in 0..weights.len() {
        let dxa = if ta == 3 {
            T::zero()
        } else {
            d_point(form, alpha, ta, i, pts.imax)
        };
        let dxb = d_point(form, alpha, tb, i, pts.imax);
        let dm = -m * (dxb - dxa) / width;
        let d = m * (-dxa) + (s - xa) * dm;
        if d != T::zero() {
            partials.push((Wrt::Weight(i), d));
        }
    }
    DualValue {
        value: sat(value),
        partials,
    }
}

/// Exact segment-wise inverse of the activation. For a degenerate
/// middle segment, values strictly between `1 - alpha` and `alpha`
/// return `x_F`.
pub fn tailored_inverse<T: Real>(form: Form, p: &ConnectiveParams<T>, y: T) -> T {
    inverse_dual(form, p, y).value
}

/// Inverse with partials: `OutputLower` = ds/dy (retagged by callers),
/// `Weight(i)` from the moving points.
fn inverse_dual<T: Real>(form: Form, p: &ConnectiveParams<T>, y: T) -> DualValue<T> {
    let pts = points(form, p.alpha, &p.weights);
    let co = T::one() - p.alpha;
    let (xa, ya, ta, xb, yb, tb) = if y <= co {
        (T::zero(), T::zero(), 3u8, pts.x_f, co, 0u8)
    } else if y < p.alpha {
        (pts.x_f, co, 0, pts.x_t, p.alpha, 1)
    } else {
        (pts.x_t, p.alpha, 1, pts.x_max, T::one(), 2)
    };
    let height = yb - ya;
    if height <= T::zero() || xb - xa <= T::zero() {
        // degenerate segment: the middle one at boundary alpha maps the
        // whole fuzzy band to x_F; outer ones collapse to their corner
        let x = if y <= co {
            if pts.x_f > T::zero() {
                pts.x_f * (y / co.max(lit(1e-300)))
            } else {
                T::zero()
            }
        } else if y >= p.alpha {
            pts.x_max.min(pts.x_t.max(pts.x_f))
        } else {
            pts.x_f
        };
        return DualValue::constant(x);
    }
    let t = (y - ya) / height;
    let value = xa + t * (xb - xa);
    let mut partials = vec![(Wrt::OutputLower, (xb - xa) / height)];
    for i in 0..p.weights.len() {
        let dxa = if ta == 3 {
            T::zero()
        } else {
            d_point(form, p.alpha, ta, i, pts.imax)
        };
        let dxb = d_point(form, p.alpha, tb, i, pts.imax);
        let d = dxa + t * (dxb - dxa);
        if d != T::zero() {
            partials.push((Wrt::Weight(i), d));
        }
    }
    DualValue { value, partials }
}

/// Conditioned downward inference for a tailored conjunction.
pub fn conditioned_down_and<T: Real>(
    p: &ConnectiveParams<T>,
    w_min: T,
    j: usize,
    operands: &[Bounds<T>],
    z: Bounds<T>,
) -> Downward<T> {
    conditioned_down(Form::Conjunction, p, w_min, j, operands, z)
}

/// Conditioned downward inference for a tailored disjunction, via the
/// De Morgan image of the conjunction rules.
pub fn conditioned_down_or<T: Real>(
    p: &ConnectiveParams<T>,
    w_min: T,
    j: usize,
    operands: &[Bounds<T>],
    z: Bounds<T>,
) -> Downward<T> {
    let comp_ops = complement_bounds(operands);
    let comp_z = Bounds::new(T::one() - z.upper, T::one() - z.lower);
    let d = conditioned_down(Form::Conjunction, p, w_min, j, &comp_ops, comp_z);
    // Translate proposals about ¬x_j back to x_j. The value negation
    // flips every partial's sign; the arguments that themselves entered
    // complemented (operand bounds, output bounds) flip once more, so
    // their partials keep their sign and only swap sides.
    let fix = |dv: DualValue<T>| -> DualValue<T> {
        let mut partials = dv.partials;
        for pd in partials.iter_mut() {
            let d = pd.1;
            *pd = match pd.0 {
                Wrt::InputLower(i) => (Wrt::InputUpper(i), d),
                Wrt::InputUpper(i) => (Wrt::InputLower(i), d),
                Wrt::OutputLower => (Wrt::OutputUpper, d),
                Wrt::OutputUpper => (Wrt::OutputLower, d),
                other => (other, -d),
            };
        }
        DualValue {
            value: T::one() - dv.value,
            partials,
        }
    };
    Downward {
        lower: d.upper.map(fix),
        upper: d.lower.map(fix),
    }
}

fn conditioned_down<T: Real>(
    form: Form,
    p: &ConnectiveParams<T>,
    w_min: T,
    j: usize,
    operands: &[Bounds<T>],
    z: Bounds<T>,
) -> Downward<T> {
    debug_assert_eq!(form, Form::Conjunction);
    let wj = p.weights[j];
    if wj < w_min {
        return Downward::default();
    }
    let co = T::one() - p.alpha;
    let mut out = Downward::default();

    // Upper bound for x_j from others' lowers and the output upper.
    {
        let taut = tautology_eval(p, j, operands, z, true);
        let cand = if crate::bounds::le_eps(z.upper, co) {
            // classically false output: the tautology route is exact
            taut
        } else {
            // otherwise take the looser of tautology and inverse so an
            // uninformative output cannot tighten anything
            let inv = inverse_route(form, p, j, operands, z, true);
            if inv.value > taut.value {
                inv
            } else {
                taut
            }
        };
        if crate::bounds::le_eps(cand.value, p.alpha) {
            out.upper = Some(cand);
        }
    }
    // Lower bound for x_j from others' uppers and the output lower.
    {
        let taut = tautology_eval(p, j, operands, z, false);
        let cand = if crate::bounds::ge_eps(z.lower, p.alpha) {
            taut
        } else {
            let inv = inverse_route(form, p, j, operands, z, false);
            if inv.value < taut.value {
                inv
            } else {
                taut
            }
        };
        if crate::bounds::ge_eps(cand.value, co) {
            out.lower = Some(cand);
        }
    }
    out
}

/// The tautology route: `B = A -> (A & B)` evaluated upward on the
/// disjunction form over `(1 - A_i, z)` with exponent weights
/// `w_i / w_j` on the other operands and `1 / w_j` on the output.
fn tautology_eval<T: Real>(
    p: &ConnectiveParams<T>,
    j: usize,
    operands: &[Bounds<T>],
    z: Bounds<T>,
    upper: bool,
) -> DualValue<T> {
    let wj = p.weights[j];
    let mut weights = Vec::with_capacity(operands.len());
    let mut xs = Vec::with_capacity(operands.len());
    let mut tags = Vec::with_capacity(operands.len());
    for (i, b) in operands.iter().enumerate() {
        if i == j {
            continue;
        }
        weights.push(p.weights[i] / wj);
        if upper {
            // upper candidate for x_j uses others' lowers (antitone)
            xs.push(T::one() - b.lower);
            tags.push(Some((i, Wrt::InputLower(i))));
        } else {
            xs.push(T::one() - b.upper);
            tags.push(Some((i, Wrt::InputUpper(i))));
        }
    }
    weights.push(T::one() / wj);
    xs.push(if upper { z.upper } else { z.lower });
    tags.push(None);
    let sub = ConnectiveParams {
        family: p.family,
        alpha: p.alpha,
        beta: T::one(),
        weights,
        grad_scale: p.grad_scale,
    };
    let dv = eval_inputs(Form::Disjunction, &sub, &xs);
    // retag: Input(k) refers to xs[k]; negate complemented entries;
    // weight partials translate back through w'_i = w_i / w_j
    let mut partials = Vec::with_capacity(dv.partials.len());
    let mut dwj = T::zero();
    for &(w, d) in &dv.partials {
        match w {
            Wrt::Input(k) => match tags[k] {
                Some((_, tag)) => partials.push((tag, -d)),
                None => partials.push((if upper { Wrt::OutputUpper } else { Wrt::OutputLower }, d)),
            },
            Wrt::Weight(k) => {
                // d/dw_i = d/dw'_k * (1/w_j); d/dw_j collects -w'_k/w_j
                let scale = T::one() / wj;
                match tags[k] {
                    Some((i, _)) => {
                        partials.push((Wrt::Weight(i), d * scale));
                        dwj = dwj - d * sub.weights[k] / wj;
                    }
                    None => {
                        dwj = dwj - d * sub.weights[k] / wj;
                    }
                }
            }
            other => partials.push((other, d)),
        }
    }
    if dwj != T::zero() {
        partials.push((Wrt::Weight(j), dwj));
    }
    DualValue {
        value: dv.value,
        partials,
    }
}

/// The functional-inverse route: invert the node activation at the
/// output bound and subtract the other operands' contributions.
fn inverse_route<T: Real>(
    form: Form,
    p: &ConnectiveParams<T>,
    j: usize,
    operands: &[Bounds<T>],
    z: Bounds<T>,
    upper: bool,
) -> DualValue<T> {
    let wj = p.weights[j];
    let y = if upper { z.upper } else { z.lower };
    let inv = inverse_dual(form, p, y);
    let mut s = inv.value;
    let mut partials: Vec<(Wrt, T)> = Vec::new();
    for &(w, d) in &inv.partials {
        match w {
            Wrt::OutputLower => partials.push((
                if upper { Wrt::OutputUpper } else { Wrt::OutputLower },
                d / wj,
            )),
            Wrt::Weight(i) => partials.push((Wrt::Weight(i), d / wj)),
            other => partials.push((other, d / wj)),
        }
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
        merge(&mut partials, Wrt::Weight(i), -x / wj);
    }
    let value = s / wj;
    merge(&mut partials, Wrt::Weight(j), -value / wj);
    DualValue {
        value: sat(value),
        partials,
    }
}

fn merge<T: Real>(partials: &mut Vec<(Wrt, T)>, tag: Wrt, d: T) {
    if let Some(pd) = partials.iter_mut().find(|(w, _)| *w == tag) {
        pd.1 = pd.1 + d;
    } else {
        partials.push((tag, d));
    }
}
