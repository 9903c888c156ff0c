//! Closed-form solutions.

use num_complex::Complex64;

use super::ground_state::GroundState;
use crate::coeff::FundamentalPair;
use crate::error::{invalid, Error, Result};
use crate::field::{Grid, WaveField};

/// Minimal-mass blow-up solution of the focusing critical equation
/// (`λ = −1`, `σ = 2/d`, isotropic trap from `pair`):
/// `u = μ^{−d/2} Q(x/μ) e^{i(μ̇/μ)|x|²/2 − iν/μ}`, collapsing at `t = pair.s`.
pub fn blowup_solution(q: &GroundState, pair: &FundamentalPair, t: f64, grid: &Grid) -> Result<WaveField> {
    if grid.dim() != q.d {
        return Err(invalid("grid dimension differs from the ground state's"));
    }
    let st = pair.eval(t)?;
    if !(st.mu > 0.0) {
        return Err(Error::Caustic { axis: pair.axis, t, mu: st.mu });
    }
    let amp = st.mu.powf(-0.5 * q.d as f64);
    let (alpha, theta) = (st.mu_dot / st.mu, st.nu / st.mu);
    WaveField::from_fn(grid.clone(), t, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Complex64::from_polar(amp * q.eval(r2.sqrt() / st.mu), 0.5 * alpha * r2 - theta)
    })
}

/// `e^{−ind(t−t_n)/2 − n|x|²/2}`, exact on a plateau `Ω = n²`.
pub fn harmonic_gaussian(n: u32, d: usize, t: f64, t_n: f64, grid: &Grid) -> Result<WaveField> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    if grid.dim() != d {
        return Err(invalid(format!("grid has dimension {}, expected {d}", grid.dim())));
    }
    let nf = n as f64;
    let phase = -nf * d as f64 * (t - t_n) / 2.0;
    WaveField::from_fn(grid.clone(), t, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Complex64::from_polar((-nf * r2 / 2.0).exp(), phase)
    })
}

/// `‖e^{−n|x|²/2}‖_{L^q} = (2π/(nq))^{d/(2q)}`.
pub fn harmonic_gaussian_lq(n: u32, d: usize, q: f64) -> f64 {
    (2.0 * std::f64::consts::PI / (n as f64 * q)).powf(d as f64 / (2.0 * q))
}
