//! Instantaneous functionals of a single field.

use num_complex::Complex64;
use serde::Serialize;

use crate::coeff::FundamentalPair;
use crate::error::{invalid, Result};
use crate::field::{apply_vector_field, gradient_norm, lq_norm, VectorField, WaveField};
use crate::propagators::{NonlinearitySpec, Potential};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyParts {
    /// `½‖∇u‖²`
    pub kinetic: f64,
    /// `g/(σ+1) ‖u‖^{2σ+2}_{2σ+2}`
    pub interaction: f64,
    /// `∫ V |u|²`
    pub potential: f64,
    pub total: f64,
}

/// `‖u‖^{2σ+2}_{L^{2σ+2}}`.
pub fn power_integral(u: &WaveField, sigma: u32) -> f64 {
    let p = 2 * sigma as i32 + 2;
    u.values().iter().map(|z| z.norm().powi(p)).sum::<f64>() * u.grid().cell_volume()
}

fn weighted(u: &WaveField, f: impl Fn(&[f64]) -> Result<f64>) -> Result<f64> {
    let d = u.dim();
    let mut acc = 0.0;
    for (x, z) in u.grid().points().iter().zip(u.values()) {
        acc += f(&x[..d])? * z.norm_sqr();
    }
    Ok(acc * u.grid().cell_volume())
}

pub fn energy_parts(u: &WaveField, potential: &Potential, nl: &NonlinearitySpec, t: f64) -> Result<EnergyParts> {
    let g = nl.coupling(t)?;
    let kinetic = 0.5 * gradient_norm(u).powi(2);
    let interaction = if g == 0.0 { 0.0 } else { g / (nl.sigma as f64 + 1.0) * power_integral(u, nl.sigma) };
    let mut v = Vec::new();
    potential.fill(u.grid(), t, &mut v)?;
    let pot = v.iter().zip(u.values()).map(|(w, z)| w * z.norm_sqr()).sum::<f64>() * u.grid().cell_volume();
    Ok(EnergyParts { kinetic, interaction, potential: pot, total: kinetic + interaction + pot })
}

pub fn energy(u: &WaveField, potential: &Potential, nl: &NonlinearitySpec, t: f64) -> Result<f64> {
    Ok(energy_parts(u, potential, nl, t)?.total)
}

/// Right side of the energy law: `∫ ∂_t V |u|² + ġ/(σ+1) ‖u‖^{2σ+2}`.
pub fn energy_rate(u: &WaveField, potential: &Potential, nl: &NonlinearitySpec, t: f64) -> Result<f64> {
    let dv = weighted(u, |x| potential.time_derivative(t, x))?;
    let dg = nl.coupling_derivative(t)?;
    let dn = if dg == 0.0 { 0.0 } else { dg / (nl.sigma as f64 + 1.0) * power_integral(u, nl.sigma) };
    Ok(dv + dn)
}

/// `y = ∫ |x|² |u|²`.
pub fn variance(u: &WaveField) -> f64 {
    u.grid().x_squared().iter().zip(u.values()).map(|(r2, z)| r2 * z.norm_sqr()).sum::<f64>() * u.grid().cell_volume()
}

/// `ẏ = 2 Im ∫ ū x·∇u`.
pub fn variance_rate(u: &WaveField) -> Result<f64> {
    let mut acc = 0.0;
    for j in 0..u.dim() {
        let du = u.derivative(j)?;
        let xs: Vec<f64> = u.grid().points().iter().map(|x| x[j]).collect();
        acc += u.values().iter().zip(du.values()).zip(&xs).map(|((z, w), x)| x * (z.conj() * w).im).sum::<f64>();
    }
    Ok(2.0 * acc * u.grid().cell_volume())
}

/// `ÿ = 2‖∇u‖² − 2∫ x·∇V |u|² + 2g dσ/(σ+1) ‖u‖^{2σ+2}`.
pub fn virial_rhs(u: &WaveField, potential: &Potential, nl: &NonlinearitySpec, t: f64) -> Result<f64> {
    let d = u.dim() as f64;
    let s = nl.sigma as f64;
    let g = nl.coupling(t)?;
    let grad = gradient_norm(u).powi(2);
    let xv = weighted(u, |x| potential.virial_weight(t, x))?;
    let nlt = if g == 0.0 { 0.0 } else { 2.0 * g * d * s / (s + 1.0) * power_integral(u, nl.sigma) };
    Ok(2.0 * grad - 2.0 * xv + nlt)
}

/// Per-axis `‖A_j u‖` and `‖B_j u‖` from one pair per axis.
pub fn vector_field_norms(u: &WaveField, pairs: &[FundamentalPair], t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if pairs.len() != u.dim() {
        return Err(invalid("need one fundamental pair per axis"));
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (j, p) in pairs.iter().enumerate() {
        a.push(apply_vector_field(u, p, VectorField::A, j, t)?.mass().sqrt());
        b.push(apply_vector_field(u, p, VectorField::B, j, t)?.mass().sqrt());
    }
    Ok((a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PseudoConformal {
    /// `½‖Au‖² + gμ²/(σ+1)‖u‖^{2σ+2}`
    pub theta_a: f64,
    /// `½‖Bu‖² + gν²/(σ+1)‖u‖^{2σ+2}`
    pub theta_b: f64,
    /// `g/(σ+1)(2−dσ)μμ̇‖u‖^{2σ+2} + ġμ²/(σ+1)‖u‖^{2σ+2}`
    pub rate_a: f64,
    pub rate_b: f64,
}

/// The A/B brackets and their predicted rates for an isotropic pair.
pub fn pseudo_conformal(u: &WaveField, pair: &FundamentalPair, nl: &NonlinearitySpec, t: f64) -> Result<PseudoConformal> {
    let d = u.dim();
    let pairs = vec![pair.clone(); d];
    let (a, b) = vector_field_norms(u, &pairs, t)?;
    let st = pair.eval(t)?;
    let g = nl.coupling(t)?;
    let dg = nl.coupling_derivative(t)?;
    let s = nl.sigma as f64;
    let pw = if g == 0.0 && dg == 0.0 { 0.0 } else { power_integral(u, nl.sigma) / (s + 1.0) };
    let a2: f64 = a.iter().map(|v| v * v).sum();
    let b2: f64 = b.iter().map(|v| v * v).sum();
    let crit = 2.0 - d as f64 * s;
    Ok(PseudoConformal {
        theta_a: 0.5 * a2 + g * st.mu * st.mu * pw,
        theta_b: 0.5 * b2 + g * st.nu * st.nu * pw,
        rate_a: (g * crit * st.mu * st.mu_dot + dg * st.mu * st.mu) * pw,
        rate_b: (g * crit * st.nu * st.nu_dot + dg * st.nu * st.nu) * pw,
    })
}

/// `½‖J u‖² + g t²/(σ+1)‖u‖^{2σ+2}` with `J = x + it∇`, and its predicted rate.
pub fn free_pseudo_conformal(u: &WaveField, nl: &NonlinearitySpec, t: f64) -> Result<(f64, f64)> {
    let mut j2 = 0.0;
    for j in 0..u.dim() {
        let du = u.derivative(j)?;
        let xu = u.mul_coord(j)?;
        let ju: Vec<Complex64> = xu.values().iter().zip(du.values()).map(|(x, d)| x + Complex64::new(0.0, t) * d).collect();
        j2 += ju.iter().map(|z| z.norm_sqr()).sum::<f64>() * u.grid().cell_volume();
    }
    let g = nl.coupling(t)?;
    let dg = nl.coupling_derivative(t)?;
    let s = nl.sigma as f64;
    let pw = if g == 0.0 && dg == 0.0 { 0.0 } else { power_integral(u, nl.sigma) / (s + 1.0) };
    let crit = 2.0 - u.dim() as f64 * s;
    Ok((0.5 * j2 + g * t * t * pw, (g * crit * t + dg * t * t) * pw))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvCheck {
    pub x_norm: f64,
    /// `|ν|‖A_j u‖ + |μ|‖B_j u‖`
    pub x_bound: f64,
    pub grad_norm: f64,
    /// `|ν̇|‖A_j u‖ + |μ̇|‖B_j u‖`
    pub grad_bound: f64,
    /// `‖x_j u − (νA_j − μB_j)u‖`
    pub x_identity_error: f64,
    /// `‖i∂_j u − (μ̇B_j − ν̇A_j)u‖`
    pub grad_identity_error: f64,
}

/// Recovers `x_j u` and `∂_j u` from `A_j u`, `B_j u` using the Wronskian.
pub fn inv_check(u: &WaveField, pair: &FundamentalPair, axis: usize, t: f64) -> Result<InvCheck> {
    let st = pair.eval(t)?;
    let au = apply_vector_field(u, pair, VectorField::A, axis, t)?;
    let bu = apply_vector_field(u, pair, VectorField::B, axis, t)?;
    let xu = u.mul_coord(axis)?;
    let du = u.derivative(axis)?;
    let (na, nb) = (au.mass().sqrt(), bu.mass().sqrt());
    let x_rec = au.scale(st.nu.into()).sub(&bu.scale(st.mu.into()))?;
    let g_rec = bu.scale(st.mu_dot.into()).sub(&au.scale(st.nu_dot.into()))?;
    let idu = du.scale(Complex64::i());
    Ok(InvCheck {
        x_norm: xu.mass().sqrt(),
        x_bound: st.nu.abs() * na + st.mu.abs() * nb,
        grad_norm: du.mass().sqrt(),
        grad_bound: st.nu_dot.abs() * na + st.mu_dot.abs() * nb,
        x_identity_error: xu.l2_distance(&x_rec)?,
        grad_identity_error: idu.l2_distance(&g_rec)?,
    })
}

/// `‖u‖_{L^{2σ+2}}`.
pub fn nonlinear_norm(u: &WaveField, sigma: u32) -> f64 {
    lq_norm(u, 2.0 * sigma as f64 + 2.0)
}
