use serde::Serialize;

use super::functionals::{energy, nonlinear_norm, pseudo_conformal, variance, variance_rate, vector_field_norms};
use crate::coeff::FundamentalPair;
use crate::error::Result;
use crate::field::{momentum_norm, sobolev_norm, WaveField};
use crate::propagators::{NonlinearitySpec, Potential};

/// Monitored quantities at one time. Residual entries are filled in from a
/// trace afterwards, since they need neighbouring samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub energy_law_residual: Option<f64>,
    pub variance: f64,
    pub variance_rate: f64,
    pub virial_residual: Option<f64>,
    pub a_norms: Vec<f64>,
    pub b_norms: Vec<f64>,
    pub theta_a: Option<f64>,
    pub theta_b: Option<f64>,
    /// `‖u‖_{H^k}` for `k = 0..=k_max`.
    pub sobolev: Vec<f64>,
    /// `(Σ_{|α|≤k} ‖x^α u‖²)^{1/2}` for `k = 0..=k_max`.
    pub momenta: Vec<f64>,
    pub nonlinear_norm: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecordOptions {
    pub k_max: u32,
    pub nonlinear_norm: bool,
}

impl Default for RecordOptions {
    fn default() -> Self {
        Self { k_max: 1, nonlinear_norm: false }
    }
}

/// `pairs` (one per axis) enables the A/B entries; the brackets Θ are only
/// filled for isotropic pairs.
pub fn record(
    u: &WaveField,
    potential: &Potential,
    nl: &NonlinearitySpec,
    pairs: Option<&[FundamentalPair]>,
    opts: &RecordOptions,
) -> Result<DiagnosticsRecord> {
    let t = u.t();
    let (a_norms, b_norms, theta_a, theta_b) = match pairs {
        Some(p) => {
            let (a, b) = vector_field_norms(u, p, t)?;
            let iso = p.iter().all(|q| q.omega() == p[0].omega());
            let (ta, tb) = if iso {
                let pc = pseudo_conformal(u, &p[0], nl, t)?;
                (Some(pc.theta_a), Some(pc.theta_b))
            } else {
                (None, None)
            };
            (a, b, ta, tb)
        }
        None => (Vec::new(), Vec::new(), None, None),
    };
    Ok(DiagnosticsRecord {
        t,
        mass: u.mass(),
        energy: energy(u, potential, nl, t)?,
        energy_law_residual: None,
        variance: variance(u),
        variance_rate: variance_rate(u)?,
        virial_residual: None,
        a_norms,
        b_norms,
        theta_a,
        theta_b,
        sobolev: (0..=opts.k_max).map(|k| sobolev_norm(u, k)).collect(),
        momenta: (0..=opts.k_max).map(|k| momentum_norm(u, k)).collect(),
        nonlinear_norm: opts.nonlinear_norm.then(|| nonlinear_norm(u, nl.sigma)),
    })
}
