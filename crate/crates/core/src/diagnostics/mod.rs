//! Conserved quantities, evolution-law residuals and growth fits.

mod functionals;
mod growth;
mod laws;
mod record;
mod strichartz;

pub use functionals::{
    energy, energy_parts, energy_rate, free_pseudo_conformal, inv_check, nonlinear_norm, power_integral, pseudo_conformal,
    variance, variance_rate, vector_field_norms, virial_rhs, EnergyParts, InvCheck, PseudoConformal,
};
pub use growth::{growth_fit, GrowthFit, GrowthModel, LineFit, MIN_SPAN_FACTOR, MIN_TAIL_SAMPLES};
pub use laws::{
    ab_law_residuals, energy_law_residual, fd_weights, pseudo_conformal_residual, virial_residual, AbLaws, ResidualSeries,
    VirialResidual,
};
pub use record::{record, DiagnosticsRecord, RecordOptions};
pub use strichartz::{admissible, mixed_norm};
