//! Reverse-mode scalar tape.
//!
//! Training unrolls every inference pass of an epoch onto one tape and
//! back-propagates the loss through it. Each tape node stores a value
//! and the local partials w.r.t. its parents, so the backward sweep is
//! a single reverse pass over the node list. Inference outside of
//! training runs on a tape with recording disabled; values are still
//! stored, dependency edges are not.

use crate::semantics::{DualValue, Wrt};
use crate::Real;

/// Handle to a tape value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tv(u32);

impl Tv {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Bounds whose endpoints live on a tape.
#[derive(Clone, Copy, Debug)]
pub struct TvBounds {
    pub lower: Tv,
    pub upper: Tv,
}

pub struct Tape<T> {
    vals: Vec<T>,
    // flat (parent, partial) edge list, indexed by per-node spans
    deps: Vec<(u32, T)>,
    spans: Vec<(u32, u32)>,
    recording: bool,
}

impl<T: Real> Tape<T> {
    pub fn new(recording: bool) -> Self {
        Tape {
            vals: Vec::new(),
            deps: Vec::new(),
            spans: Vec::new(),
            recording,
        }
    }

    pub fn recording(&self) -> bool {
        self.recording
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    #[inline]
    pub fn val(&self, t: Tv) -> T {
        self.vals[t.0 as usize]
    }

    /// A leaf has no parents; parameters and constants are leaves.
    #[inline]
    pub fn leaf(&mut self, v: T) -> Tv {
        let id = self.vals.len() as u32;
        self.vals.push(v);
        self.spans.push((self.deps.len() as u32, 0));
        Tv(id)
    }

    /// Record `value` with explicit local partials.
    #[inline]
    pub fn node(&mut self, value: T, parents: &[(Tv, T)]) -> Tv {
        let id = self.vals.len() as u32;
        self.vals.push(value);
        let start = self.deps.len() as u32;
        let mut n = 0u32;
        if self.recording {
            for &(p, d) in parents {
                if d != T::zero() {
                    self.deps.push((p.0, d));
                    n += 1;
                }
            }
        }
        self.spans.push((start, n));
        Tv(id)
    }

    /// Record a [`DualValue`] produced by a semantics kernel, binding
    /// its symbolic partial identifiers to tape handles. Unbound
    /// identifiers (e.g. weights that are not being trained) are
    /// dropped.
    pub fn apply(&mut self, dv: &DualValue<T>, bind: impl Fn(Wrt) -> Option<Tv>) -> Tv {
        let id = self.vals.len() as u32;
        self.vals.push(dv.value);
        let start = self.deps.len() as u32;
        let mut n = 0u32;
        if self.recording {
            for &(wrt, d) in &dv.partials {
                if d == T::zero() {
                    continue;
                }
                if let Some(p) = bind(wrt) {
                    self.deps.push((p.0, d));
                    n += 1;
                }
            }
        }
        self.spans.push((start, n));
        Tv(id)
    }

    pub fn add(&mut self, a: Tv, b: Tv) -> Tv {
        let v = self.val(a) + self.val(b);
        self.node(v, &[(a, T::one()), (b, T::one())])
    }

    pub fn sub(&mut self, a: Tv, b: Tv) -> Tv {
        let v = self.val(a) - self.val(b);
        self.node(v, &[(a, T::one()), (b, -T::one())])
    }

    pub fn mul(&mut self, a: Tv, b: Tv) -> Tv {
        let (va, vb) = (self.val(a), self.val(b));
        self.node(va * vb, &[(a, vb), (b, va)])
    }

    pub fn div(&mut self, a: Tv, b: Tv) -> Tv {
        let (va, vb) = (self.val(a), self.val(b));
        self.node(va / vb, &[(a, T::one() / vb), (b, -va / (vb * vb))])
    }

    pub fn scale(&mut self, a: Tv, k: T) -> Tv {
        let v = self.val(a) * k;
        self.node(v, &[(a, k)])
    }

    pub fn add_const(&mut self, a: Tv, k: T) -> Tv {
        let v = self.val(a) + k;
        self.node(v, &[(a, T::one())])
    }

    /// `|a|` with subgradient 0 at the origin.
    pub fn abs(&mut self, a: Tv) -> Tv {
        let va = self.val(a);
        let d = if va > T::zero() {
            T::one()
        } else if va < T::zero() {
            -T::one()
        } else {
            T::zero()
        };
        self.node(va.abs(), &[(a, d)])
    }

    pub fn exp(&mut self, a: Tv) -> Tv {
        let v = self.val(a).exp();
        self.node(v, &[(a, v)])
    }

    /// `max(0, a)` with a conventional (non-transparent) clamp: the
    /// gradient is zero while the term is inactive, which is what the
    /// contradiction loss wants.
    pub fn relu(&mut self, a: Tv) -> Tv {
        let va = self.val(a);
        if va > T::zero() {
            self.node(va, &[(a, T::one())])
        } else {
            self.node(T::zero(), &[])
        }
    }

    /// Reverse sweep from `root`; returns the adjoint of every tape
    /// position (leaves included).
    pub fn backward(&self, root: Tv) -> Vec<T> {
        let mut adj = vec![T::zero(); self.vals.len()];
        adj[root.0 as usize] = T::one();
        for i in (0..=root.0 as usize).rev() {
            let g = adj[i];
            if g == T::zero() {
                continue;
            }
            let (start, n) = self.spans[i];
            for k in start..start + n {
                let (p, d) = self.deps[k as usize];
                adj[p as usize] = adj[p as usize] + g * d;
            }
        }
        adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::Wrt;

    #[test]
    fn chain_rule_product() {
        let mut t: Tape<f64> = Tape::new(true);
        let x = t.leaf(3.0);
        let y = t.mul(x, x); // x^2
        let z = t.add(y, x); // x^2 + x
        let g = t.backward(z);
        assert_eq!(t.val(z), 12.0);
        assert_eq!(g[x.index()], 7.0); // 2x + 1
    }

    #[test]
    fn division_quotient_rule() {
        let mut t: Tape<f64> = Tape::new(true);
        let a = t.leaf(1.5);
        let b = t.leaf(2.0);
        let q = t.div(a, b);
        let g = t.backward(q);
        assert!((g[a.index()] - 0.5).abs() < 1e-15);
        assert!((g[b.index()] + 1.5 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn relu_blocks_gradient_when_inactive() {
        let mut t: Tape<f64> = Tape::new(true);
        let a = t.leaf(-0.4);
        let r = t.relu(a);
        let g = t.backward(r);
        assert_eq!(t.val(r), 0.0);
        assert_eq!(g[a.index()], 0.0);
    }

    #[test]
    fn apply_binds_dual_value_partials() {
        let mut t: Tape<f64> = Tape::new(true);
        let x0 = t.leaf(0.25);
        let dv = DualValue {
            value: 0.75,
            partials: vec![(Wrt::Input(0), 2.0), (Wrt::Bias, 5.0)],
        };
        // bias unbound: its partial is dropped
        let y = t.apply(&dv, |w| match w {
            Wrt::Input(0) => Some(x0),
            _ => None,
        });
        let g = t.backward(y);
        assert_eq!(g[x0.index()], 2.0);
    }

    #[test]
    fn non_recording_tape_stores_values_only() {
        let mut t: Tape<f64> = Tape::new(false);
        let a = t.leaf(1.0);
        let b = t.add(a, a);
        assert_eq!(t.val(b), 2.0);
        let g = t.backward(b);
        assert_eq!(g[a.index()], 0.0);
    }
}
