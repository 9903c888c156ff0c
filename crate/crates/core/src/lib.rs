//! Nonlinear Schrödinger equations with time-dependent quadratic potentials.

// NaN has to fail the parameter checks, so `!(x > 0.0)` is deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeff;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod propagators;
pub mod reference;
pub mod scenario;
pub mod transforms;

pub use error::{Error, Result};
