//! Time coefficients and the fundamental solutions of `η̈ + Ω(t) η = 0`.

pub mod dd;
mod fundamental;
pub mod ode;
mod profile;
mod spline;

pub use fundamental::{
    caustic_times, is_caustic, lens_coefficients, mehler_coefficients, solve_fundamental, structural_checks,
    wronskian_residual, AxisMehler, CausticTime, FundamentalPair, LensCoefficients, MehlerCoefficients,
    MonotoneFlags, PairSample, StructuralReport, CAUSTIC_BAND, DEFAULT_TOL, GAMMA_BAND,
};
pub use profile::{CoefficientSpec, NamedProfile, TimeCoefficient};
pub use spline::CubicSpline;
