//! Gradient-transparent clamping.
//!
//! Real-valued logic clamps every result to `[0, 1]`, which normally
//! kills the gradient in exactly the saturated regions learning cares
//! about. Transparent clamping clamps the value but keeps the incoming
//! partials, optionally rescaled by a supplantation factor `a`
//! (`a = 1` leaves them untouched, `a = 0` is a conventional clamp).

use crate::semantics::DualValue;
use crate::Real;

pub fn transparent_clamp<T: Real>(x: DualValue<T>, lo: T, hi: T, a: T) -> DualValue<T> {
    debug_assert!(lo <= hi);
    let inside = x.value >= lo && x.value <= hi;
    let value = x.value.max(lo).min(hi);
    if inside {
        return DualValue {
            value,
            partials: x.partials,
        };
    }
    let mut partials = x.partials;
    for (_, d) in partials.iter_mut() {
        *d = *d * a;
    }
    DualValue { value, partials }
}

/// Clamp to the unit interval.
pub fn clamp01<T: Real>(x: DualValue<T>, a: T) -> DualValue<T> {
    transparent_clamp(x, T::zero(), T::one(), a)
}

/// Plain value clamp to `[0, 1]`.
pub fn sat<T: Real>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}
