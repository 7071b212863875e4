//! A weighted real-valued logic engine.
//!
//! Knowledge is a set of formulae over propositions or first-order
//! predicates. Every connective occurrence becomes a graph node with
//! its own parameters (operand weights, bias, threshold of truth) and
//! every node carries *bounds* `[L, U]` on the truth value of its
//! subformula. Inference tightens bounds in alternating upward
//! (evaluation) and downward (inverse-rule) passes until convergence;
//! `L > U` marks a contradiction. All activations are differentiable,
//! so connective weights and initial fact/axiom bounds can be trained
//! against a logical loss that penalises contradiction.
//!
//! The numeric kernels are generic over the scalar type via
//! [`Real`]; the concrete aliases at the crate root fix `f64`, which
//! is what the CLI and the file formats use.

pub mod autodiff;
pub mod bounds;
pub mod fol;
pub mod formula;
pub mod graph;
pub mod inference;
pub mod learning;
pub mod parse;
pub mod report;
pub mod rng;
pub mod semantics;

use std::fmt;

/// Scalar type the engine computes with. `f32` and `f64` both work;
/// the shipped binaries use `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + fmt::Debug
    + fmt::Display
    + Default
    + serde::Serialize
    + 'static
{
}
impl<T> Real for T where
    T: num_traits::Float
        + num_traits::FromPrimitive
        + fmt::Debug
        + fmt::Display
        + Default
        + serde::Serialize
        + 'static
{
}

/// Shorthand for lifting an `f64` literal into any [`Real`] scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite literal")
}

pub use bounds::{Bounds, TruthState};
pub use formula::{Formula, KnowledgeBase};
pub use graph::NeuronGraph;
pub use inference::{ConvergenceReport, InferConfig};
pub use learning::{TrainConfig, TrainReport};
pub use semantics::{ConnectiveParams, DualValue, Family, Wrt};

/// Default scalar used by the CLI and file formats.
pub type Value = f64;
/// [`Bounds`] over the default scalar.
pub type Bounds64 = Bounds<f64>;
/// [`NeuronGraph`] over the default scalar.
pub type Graph64 = NeuronGraph<f64>;
