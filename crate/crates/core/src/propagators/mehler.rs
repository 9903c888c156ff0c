//! Exact linear propagation through the Mehler kernel.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coeff::{caustic_times, mehler_coefficients, solve_fundamental, FundamentalPair, TimeCoefficient};
use crate::error::{invalid, Error, Result};
use crate::field::{fft::czt, time_matches, Grid, WaveField};

const MAX_LEGS: usize = 10_000;

/// Applies the kernel from `s` to `t` using pairs started at `s`.
///
/// Per axis the kernel factors as a chirp `e^{iγy²/2}`, a Fourier transform
/// evaluated at `x/μ`, the prefactor and a chirp `e^{iαx²/2}`. The transform
/// samples are taken with a chirp-z transform so no interpolation is needed.
pub fn mehler_apply(u0: &WaveField, pairs: &[FundamentalPair], s: f64, t: f64) -> Result<WaveField> {
    let grid = u0.grid().clone();
    let d = grid.dim();
    if pairs.len() != d {
        return Err(invalid(format!("{} pairs for a {d}-dimensional field", pairs.len())));
    }
    if !time_matches(u0.t(), s) {
        return Err(Error::TimeTagMismatch { field: u0.t(), requested: s });
    }
    if let Some(p) = pairs.iter().find(|p| !time_matches(p.s, s)) {
        return Err(invalid(format!("pair on axis {} starts at {}, not {s}", p.axis, p.s)));
    }
    if t == s {
        return Ok(u0.clone());
    }
    let coeffs = mehler_coefficients(pairs, t)?;
    for (j, a) in coeffs.axes.iter().enumerate() {
        let l = grid.half_width(j);
        let nyquist = PI / grid.spacing(j);
        let worst = a.gamma.abs().max(a.beta.abs()) * l;
        if worst > nyquist {
            return Err(Error::Aliasing(format!(
                "axis {j} at t = {t}: max(|γ|, |β|)·L = {worst:.4} exceeds π/h = {nyquist:.4}"
            )));
        }
    }
    let mut values = u0.values().to_vec();
    let shape = grid.shape();
    for (j, a) in coeffs.axes.iter().enumerate() {
        transform_axis(&mut values, &shape, j, &grid, a.mu, a.alpha, a.gamma, Complex64::from_polar(a.amplitude, a.phase));
    }
    let out = WaveField::new(grid, values, t)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn transform_axis(
    values: &mut [Complex64],
    shape: &[usize],
    axis: usize,
    grid: &Grid,
    mu: f64,
    alpha: f64,
    gamma: f64,
    prefactor: Complex64,
) {
    let n = shape[axis];
    let stride: usize = shape[axis + 1..].iter().product();
    let outer = values.len() / (n * stride);
    let l = grid.half_width(axis);
    let h = grid.spacing(axis);
    let xs = grid.coords(axis);
    let pre: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(1.0, 0.5 * gamma * xs[i] * xs[i] + l * h * i as f64 / mu))
        .collect();
    let post: Vec<Complex64> = (0..n)
        .map(|m| {
            prefactor
                * h
                * Complex64::from_polar(1.0, 0.5 * alpha * xs[m] * xs[m] - l * l / mu + l * h * m as f64 / mu)
        })
        .collect();
    let theta = -h * h / mu;
    let mut line = vec![Complex64::default(); n];
    for o in 0..outer {
        let base = o * n * stride;
        for s in 0..stride {
            for i in 0..n {
                line[i] = values[base + i * stride + s] * pre[i];
            }
            let out = czt(&line, n, theta);
            for m in 0..n {
                values[base + m * stride + s] = out[m] * post[m];
            }
        }
    }
}

/// Propagates from `s` to `t` through caustic-free legs, re-solving the pair
/// at each waypoint. Waypoints are chosen automatically when `waypoints` is `None`.
pub fn mehler_compose(
    u0: &WaveField,
    omega: &[TimeCoefficient],
    s: f64,
    t: f64,
    tol: f64,
    waypoints: Option<&[f64]>,
) -> Result<WaveField> {
    if !time_matches(u0.t(), s) {
        return Err(Error::TimeTagMismatch { field: u0.t(), requested: s });
    }
    if t == s {
        return Ok(u0.clone());
    }
    let mut u = u0.clone();
    match waypoints {
        Some(w) => {
            let mut tau = s;
            for &next in w.iter().chain(std::iter::once(&t)) {
                if next == tau {
                    continue;
                }
                let pairs = solve_fundamental(omega, tau, next, tol)?;
                u = mehler_apply(&u, &pairs, tau, next)?;
                tau = next;
            }
            Ok(u)
        }
        None => {
            let legs = plan_legs(omega, s, t, tol)?;
            let mut tau = s;
            for (next, pairs) in legs {
                u = mehler_apply(&u, &pairs, tau, next)?;
                tau = next;
            }
            Ok(u)
        }
    }
}

/// Leg endpoints from `s` to `t`, each with its pair family.
pub fn plan_legs(omega: &[TimeCoefficient], s: f64, t: f64, tol: f64) -> Result<Vec<(f64, Vec<FundamentalPair>)>> {
    let dir = (t - s).signum();
    let mut legs = Vec::new();
    let mut tau = s;
    while legs.len() < MAX_LEGS {
        let pairs = solve_fundamental(omega, tau, t, tol)?;
        let obstruction = first_obstruction(&pairs, tau, t)?;
        let remaining = (t - tau) * dir;
        match obstruction {
            None => {
                legs.push((t, pairs));
                return Ok(legs);
            }
            Some(o) => {
                let gap = (o - tau) * dir;
                if gap < 1e-6 * (1.0 + tau.abs()) {
                    return Err(Error::NoConvergence(format!("no caustic-free leg starting at t = {tau}")));
                }
                if remaining <= 0.9 * gap {
                    legs.push((t, pairs));
                    return Ok(legs);
                }
                let next = tau + dir * (0.5 * gap).min(0.5 * remaining);
                let pairs = solve_fundamental(omega, tau, next, tol)?;
                legs.push((next, pairs));
                tau = next;
            }
        }
    }
    Err(Error::NoConvergence(format!("more than {MAX_LEGS} legs needed from {s} to {t}")))
}

/// Earliest caustic or loss of γ on any axis, strictly after `tau`.
fn first_obstruction(pairs: &[FundamentalPair], tau: f64, t: f64) -> Result<Option<f64>> {
    let dir = (t - tau).signum();
    let mut first: Option<f64> = None;
    let mut take = |c: f64| {
        if (c - tau) * dir > 0.0 && first.is_none_or(|f| (c - f) * dir < 0.0) {
            first = Some(c);
        }
    };
    for c in caustic_times(pairs, (tau, t))? {
        take(c.t);
    }
    for p in pairs {
        if p.gamma_valid_until() != t {
            take(p.gamma_valid_until());
        }
    }
    Ok(first)
}
