//! Truth-value bounds and their classification.
//!
//! A [`Bounds`] pair `(L, U)` brackets the unknown truth value of a
//! formula. `L > U` is a representable state (contradiction) and is
//! never silently repaired; proof aggregation only ever tightens
//! (`L` rises, `U` falls).

use crate::Real;
use serde::{Deserialize, Serialize};

/// Region thresholds like `1 - alpha` pick up one-ulp noise (for
/// example `0.2 <= 1 - 0.8` is false in binary floats); classical
/// boundaries are inclusive, so comparisons against them use this
/// tolerance.
pub fn cmp_eps<T: Real>() -> T {
    T::epsilon() * T::from_u32(64).unwrap()
}

/// `a <= b` up to the boundary tolerance.
pub fn le_eps<T: Real>(a: T, b: T) -> bool {
    a <= b + cmp_eps()
}

/// `a >= b` up to the boundary tolerance.
pub fn ge_eps<T: Real>(a: T, b: T) -> bool {
    a + cmp_eps() >= b
}

/// Lower/upper bounds on a truth value in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Real> Bounds<T> {
    pub fn new(lower: T, upper: T) -> Self {
        Bounds { lower, upper }
    }

    /// Open-world default: nothing is known.
    pub fn unknown() -> Self {
        Bounds::new(T::zero(), T::one())
    }

    pub fn truth(value: T) -> Self {
        Bounds::new(value, value)
    }

    pub fn is_contradictory(&self) -> bool {
        self.lower > self.upper
    }

    /// Both bounds on the same classical side even though crossed;
    /// the tailored family excludes these from contradiction loss.
    pub fn is_intra_classical(&self, alpha: T) -> bool {
        let co = T::one() - alpha;
        self.is_contradictory()
            && ((ge_eps(self.lower, alpha) && ge_eps(self.upper, alpha))
                || (le_eps(self.lower, co) && le_eps(self.upper, co)))
    }

    /// Monotone proof aggregation: `(max(L, L'), min(U, U'))`.
    pub fn aggregate(&self, proposed: Bounds<T>) -> Bounds<T> {
        Bounds::new(
            self.lower.max(proposed.lower),
            self.upper.min(proposed.upper),
        )
    }

    /// Tightest merge of two statements about the same fact.
    pub fn merge_tightest(&self, other: Bounds<T>) -> Bounds<T> {
        self.aggregate(other)
    }

    pub fn classify(&self, alpha: T) -> TruthState {
        classify(*self, alpha)
    }
}

/// Primary and secondary truth-value bound states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TruthState {
    Unknown,
    True,
    False,
    Contradiction,
    /// More-unknown-than-not: can still converge to ~True/~False but
    /// not to a classical state.
    MaybeUnknown,
    /// More-true-than-not.
    MaybeTrue,
    /// More-false-than-not.
    MaybeFalse,
}

impl TruthState {
    pub fn label(&self) -> &'static str {
        match self {
            TruthState::Unknown => "Unknown",
            TruthState::True => "True",
            TruthState::False => "False",
            TruthState::Contradiction => "Contradiction",
            TruthState::MaybeUnknown => "~Unknown",
            TruthState::MaybeTrue => "~True",
            TruthState::MaybeFalse => "~False",
        }
    }
}

/// Classify bounds against a threshold of truth `alpha` in `(1/2, 1]`.
///
/// True iff `L >= alpha` and `U >= alpha`; False iff both bounds at or
/// below `1 - alpha`; Unknown iff `L <= 1 - alpha <= alpha <= U`;
/// crossed bounds are a contradiction. The remaining cases fall into
/// the secondary more-true/false-than-not states around 1/2.
pub fn classify<T: Real>(b: Bounds<T>, alpha: T) -> TruthState {
    let half = crate::lit::<T>(0.5);
    let co = T::one() - alpha;
    if b.lower > b.upper {
        TruthState::Contradiction
    } else if ge_eps(b.lower, alpha) && ge_eps(b.upper, alpha) {
        TruthState::True
    } else if le_eps(b.lower, co) && le_eps(b.upper, co) {
        TruthState::False
    } else if le_eps(b.lower, co) && ge_eps(b.upper, alpha) {
        TruthState::Unknown
    } else if b.lower > half {
        TruthState::MaybeTrue
    } else if b.upper < half {
        TruthState::MaybeFalse
    } else {
        TruthState::MaybeUnknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_primary_states() {
        // Table of primary bound states at alpha = 0.7.
        let a = 0.7;
        assert_eq!(classify(Bounds::new(1.0, 1.0), a), TruthState::True);
        assert_eq!(classify(Bounds::new(0.0, 1.0), a), TruthState::Unknown);
        assert_eq!(classify(Bounds::new(0.0, 0.0), a), TruthState::False);
        assert_eq!(
            classify(Bounds::new(0.6, 0.4), a),
            TruthState::Contradiction
        );
    }

    #[test]
    fn classify_secondary_states() {
        let a = 0.8;
        assert_eq!(classify(Bounds::new(0.6, 0.9), a), TruthState::MaybeTrue);
        assert_eq!(classify(Bounds::new(0.1, 0.4), a), TruthState::MaybeFalse);
        assert_eq!(
            classify(Bounds::new(0.4, 0.6), a),
            TruthState::MaybeUnknown
        );
    }

    #[test]
    fn classify_at_alpha_one() {
        assert_eq!(classify(Bounds::new(1.0, 1.0), 1.0), TruthState::True);
        assert_eq!(classify(Bounds::new(0.0, 0.0), 1.0), TruthState::False);
        assert_eq!(classify(Bounds::new(0.0, 1.0), 1.0), TruthState::Unknown);
    }

    #[test]
    fn aggregate_tightens() {
        let old = Bounds::new(0.2, 0.9);
        let new = old.aggregate(Bounds::new(0.5, 1.0));
        assert_eq!(new, Bounds::new(0.5, 0.9));
        // identity
        let u = Bounds::new(0.0, 1.0);
        assert_eq!(u.aggregate(u), u);
        // crossing bounds are recorded, not repaired
        let c = Bounds::new(0.8, 1.0).aggregate(Bounds::new(0.0, 0.3));
        assert_eq!(c, Bounds::new(0.8, 0.3));
        assert!(c.is_contradictory());
    }

    #[test]
    fn aggregation_order_independent() {
        // any permutation of a proof sequence yields identical bounds
        let proofs = [
            Bounds::new(0.1, 0.9),
            Bounds::new(0.4, 1.0),
            Bounds::new(0.0, 0.7),
            Bounds::new(0.3, 0.8),
        ];
        let fold = |order: &[usize]| {
            order
                .iter()
                .fold(Bounds::new(0.0f64, 1.0), |acc, &i| acc.aggregate(proofs[i]))
        };
        let a = fold(&[0, 1, 2, 3]);
        assert_eq!(a, fold(&[3, 2, 1, 0]));
        assert_eq!(a, fold(&[2, 0, 3, 1]));
        assert_eq!(a, Bounds::new(0.4, 0.7));
    }

    #[test]
    fn intra_classical_detection() {
        let a = 0.8;
        assert!(Bounds::new(0.95, 0.85).is_intra_classical(a));
        assert!(Bounds::new(0.15, 0.05).is_intra_classical(a));
        assert!(!Bounds::new(0.9, 0.1).is_intra_classical(a));
        assert!(!Bounds::new(0.2, 0.9).is_intra_classical(a));
    }
}
