//! Ground-state fidelity and fidelity-metric tensors for two exactly
//! solvable topological models:
//!
//! * the stochastic-matrix-form toric code ([`smf`]), whose metric is the
//!   specific heat of a classical 2D Ising model ([`ising`]);
//! * the quantum eight-vertex model ([`eight_vertex`]), whose metric is the
//!   covariance of vertex counts in the classical eight-vertex model.
//!
//! [`analysis`] holds model-agnostic fidelity numerics and scaling fits.

#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dos;
pub mod eight_vertex;
pub mod error;
pub mod ising;
pub mod lattice;
pub mod numerics;
pub mod smf;
pub mod stats;

pub use error::{Error, Result};
pub use lattice::TorusLattice;
pub use stats::McEstimate;
