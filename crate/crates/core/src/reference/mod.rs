//! Special solutions used as oracles.

mod explicit;
mod ground_state;
mod stationary;

pub use explicit::{blowup_solution, harmonic_gaussian, harmonic_gaussian_lq};
pub use ground_state::{closed_form_1d, ground_state, ground_state_cached, radial_residual, GroundState};
pub use stationary::{nonlinear_stationary, StationaryReport, StationaryState};

use num_complex::Complex64;

use crate::error::Result;
use crate::field::WaveField;
use crate::propagators::{NonlinearitySpec, Potential};

/// L² norm of `i∂_t u + ½Δu − V u − g|u|^{2σ}u` at `t`, with a fourth-order
/// centered difference in time of step `dt`.
pub fn equation_residual(
    u_at: &dyn Fn(f64) -> Result<WaveField>,
    potential: &Potential,
    nl: &NonlinearitySpec,
    t: f64,
    dt: f64,
) -> Result<f64> {
    let u = u_at(t)?;
    let [a, b, c, e] = [u_at(t - 2.0 * dt)?, u_at(t - dt)?, u_at(t + dt)?, u_at(t + 2.0 * dt)?];
    let lap = u.laplacian()?;
    let mut v = Vec::new();
    potential.fill(u.grid(), t, &mut v)?;
    let g = nl.coupling(t)?;
    let p = 2 * nl.sigma as i32;
    let i = Complex64::i();
    let res: Vec<Complex64> = (0..u.values().len())
        .map(|n| {
            let ut = (a.values()[n] - 8.0 * b.values()[n] + 8.0 * c.values()[n] - e.values()[n]) / (12.0 * dt);
            let z = u.values()[n];
            i * ut + 0.5 * lap.values()[n] - (v[n] + g * z.norm().powi(p)) * z
        })
        .collect();
    Ok(WaveField::new(u.grid().clone(), res, t)?.mass().sqrt())
}
