//! Stationary states `ωψ = Hψ + λ|ψ|^{2σ}ψ` of the isotropic oscillator
//! `H = −½Δ + ½|x|²`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::field::{fft, Grid, WaveField};

#[derive(Debug, Clone)]
pub struct StationaryState {
    pub psi: WaveField,
    pub omega: f64,
    pub mass: f64,
    pub report: StationaryReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryReport {
    /// `‖Hψ + λ|ψ|^{2σ}ψ − ωψ‖_{L²}`.
    pub residual: f64,
    pub iterations: usize,
    pub secant_steps: usize,
}

struct Problem {
    lambda: f64,
    sigma: u32,
    v: Vec<f64>,
    k2: Vec<f64>,
    shape: Vec<usize>,
    dv: f64,
    /// Fourier part of the preconditioner.
    pk: Vec<f64>,
    /// Diagonal part, applied as `D^{−1/2}` on both sides.
    pd: Vec<f64>,
}

impl Problem {
    fn new(grid: &Grid, lambda: f64, sigma: u32) -> Self {
        let v: Vec<f64> = grid.x_squared().iter().map(|r2| 0.5 * r2).collect();
        let k2 = grid.k_squared();
        let pk = k2.iter().map(|k| 1.0 / (1.0 + 0.5 * k)).collect();
        let pd = v.iter().map(|w| 1.0 / (1.0 + w).sqrt()).collect();
        Self { lambda, sigma, v, k2, shape: grid.shape(), dv: grid.cell_volume(), pk, pd }
    }

    fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * self.dv
    }

    fn kinetic(&self, psi: &[f64]) -> Vec<f64> {
        let mut z: Vec<Complex64> = psi.iter().map(|&p| Complex64::new(p, 0.0)).collect();
        fft::forward(&mut z, &self.shape);
        for (c, k) in z.iter_mut().zip(&self.k2) {
            *c *= 0.5 * k;
        }
        fft::inverse(&mut z, &self.shape);
        z.iter().map(|c| c.re).collect()
    }

    /// `Hψ + λ|ψ|^{2σ}ψ`.
    fn apply(&self, psi: &[f64]) -> Vec<f64> {
        let mut out = self.kinetic(psi);
        for ((o, &p), &w) in out.iter_mut().zip(psi).zip(&self.v) {
            *o += w * p + self.lambda * p.abs().powi(2 * self.sigma as i32) * p;
        }
        out
    }

    fn energy(&self, psi: &[f64]) -> f64 {
        let kin = self.dot(psi, &self.kinetic(psi));
        let pot: f64 = psi.iter().zip(&self.v).map(|(p, w)| w * p * p).sum::<f64>() * self.dv;
        let s = self.sigma as i32;
        let nl: f64 = psi.iter().map(|p| p.abs().powi(2 * s + 2)).sum::<f64>() * self.dv;
        kin + pot + self.lambda / (s as f64 + 1.0) * nl
    }

    fn precondition(&self, g: &[f64]) -> Vec<f64> {
        let mut z: Vec<Complex64> = g.iter().zip(&self.pd).map(|(&a, &b)| Complex64::new(a * b, 0.0)).collect();
        fft::forward(&mut z, &self.shape);
        for (c, p) in z.iter_mut().zip(&self.pk) {
            *c *= p;
        }
        fft::inverse(&mut z, &self.shape);
        z.iter().zip(&self.pd).map(|(c, b)| c.re * b).collect()
    }

    fn normalize(&self, psi: &mut [f64], mass: f64) {
        let m = self.dot(psi, psi);
        let c = (mass / m).sqrt();
        psi.iter_mut().for_each(|p| *p *= c);
    }

    /// Multiplier and residual `(ω, ‖g‖)` with `g = Hψ + λ|ψ|^{2σ}ψ − ωψ`.
    fn gradient(&self, psi: &[f64]) -> (f64, f64, Vec<f64>) {
        let hp = self.apply(psi);
        let omega = self.dot(psi, &hp) / self.dot(psi, psi);
        let g: Vec<f64> = hp.iter().zip(psi).map(|(h, p)| h - omega * p).collect();
        let r = self.dot(&g, &g).sqrt();
        (omega, r, g)
    }

    /// Preconditioned descent on the energy over `‖ψ‖² = mass`, with
    /// backtracking on the step length.
    fn minimize(&self, psi: &mut Vec<f64>, mass: f64, tol: f64, max_iter: usize) -> Result<(f64, f64, usize)> {
        self.normalize(psi, mass);
        let mut tau: f64 = 0.5;
        let mut e = self.energy(psi);
        for it in 0..max_iter {
            let (omega, r, g) = self.gradient(psi);
            if r <= tol {
                return Ok((omega, r, it));
            }
            let pg = self.precondition(&g);
            let ppsi = self.precondition(psi);
            let xi = self.dot(psi, &pg) / self.dot(psi, &ppsi);
            let dir: Vec<f64> = pg.iter().zip(&ppsi).map(|(a, b)| -(a - xi * b)).collect();
            tau = (tau * 2.0).min(4.0);
            loop {
                let mut trial: Vec<f64> = psi.iter().zip(&dir).map(|(p, q)| p + tau * q).collect();
                self.normalize(&mut trial, mass);
                let et = self.energy(&trial);
                // energy differences drown in round-off near the minimum;
                // there the residual decides
                let flat = (e - et).abs() <= 1e-13 * e.abs().max(1.0);
                if et < e && !flat || flat && self.gradient(&trial).1 < r {
                    *psi = trial;
                    e = et;
                    break;
                }
                tau *= 0.5;
                if tau < 1e-12 {
                    return Err(Error::NoConvergence(format!("line search failed at residual {r:e} (mass {mass})")));
                }
            }
        }
        let (omega, r, _) = self.gradient(psi);
        if r <= tol {
            return Ok((omega, r, max_iter));
        }
        Err(Error::NoConvergence(format!("gradient flow stalled at residual {r:e} (mass {mass})")))
    }
}

/// Real positive stationary state at chemical potential `omega`.
///
/// For each trial mass the constrained energy is minimized; the mass is then
/// adjusted by a secant iteration on `log M` until the multiplier equals `omega`.
pub fn nonlinear_stationary(omega: f64, lambda: f64, sigma: u32, grid: &Grid, tol: f64) -> Result<StationaryState> {
    let d = grid.dim();
    let half = d as f64 / 2.0;
    if !(1..=2).contains(&sigma) {
        return Err(invalid("sigma must be 1 or 2"));
    }
    if lambda > 0.0 && !(omega > half) || lambda < 0.0 && !(omega < half) {
        return Err(invalid(format!("omega = {omega} outside the regime for lambda = {lambda} (lowest level {half})")));
    }
    if lambda == 0.0 && (omega - half).abs() > tol {
        return Err(invalid(format!("linear problem only has omega = {half}")));
    }
    let prob = Problem::new(grid, lambda, sigma);
    let mut psi: Vec<f64> = prob.v.iter().map(|w| (-w).exp()).collect();
    let max_iter = 20_000;

    let s = sigma as f64;
    let pi = std::f64::consts::PI;
    if lambda == 0.0 {
        let mass = pi.powf(half);
        let (w, r, it) = prob.minimize(&mut psi, mass, tol, max_iter)?;
        return finish(grid, psi, w, mass, StationaryReport { residual: r, iterations: it, secant_steps: 0 });
    }
    // first-order guess about the harmonic ground state
    let c1 = (pi / (s + 1.0)).powf(half) / pi.powf(half * (s + 1.0));
    let m_guess = ((omega - half) / (lambda * c1)).abs().powf(1.0 / s).max(1e-6);
    let inner_tol = tol * 0.1;
    let mut iterations = 0;
    let mut solve = |lm: f64, psi: &mut Vec<f64>| -> Result<f64> {
        let (w, _, it) = prob.minimize(psi, lm.exp(), inner_tol, max_iter)?;
        iterations += it;
        Ok(w - omega)
    };
    let mut x = [m_guess.ln(), m_guess.ln() + 0.1];
    let mut f = [solve(x[0], &mut psi)?, 0.0];
    f[1] = solve(x[1], &mut psi)?;
    let mut steps = 0;
    while f[1].abs() > inner_tol {
        steps += 1;
        if steps > 60 || f[1] == f[0] {
            return Err(Error::NoConvergence(format!("mass secant stalled at omega error {:e}", f[1])));
        }
        let next = x[1] - f[1] * (x[1] - x[0]) / (f[1] - f[0]);
        let fx = solve(next, &mut psi)?;
        x = [x[1], next];
        f = [f[1], fx];
    }
    let mass = x[1].exp();
    let (_, r, _) = prob.gradient(&psi);
    let report = StationaryReport { residual: r, iterations, secant_steps: steps };
    let (w, _, _) = prob.gradient(&psi);
    finish(grid, psi, w, mass, report)
}

fn finish(grid: &Grid, psi: Vec<f64>, omega: f64, mass: f64, report: StationaryReport) -> Result<StationaryState> {
    let values = psi.into_iter().map(|p| Complex64::new(p, 0.0)).collect();
    Ok(StationaryState { psi: WaveField::new(grid.clone(), values, 0.0)?, omega, mass, report })
}
