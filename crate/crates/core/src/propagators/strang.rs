//! Strang split-step Fourier integrator.

use std::collections::HashMap;

use num_complex::Complex64;

use super::potential::Potential;
use super::spec::{NonlinearitySpec, StepControls};
use super::trace::{SolutionTrace, StopReason};
use crate::error::{invalid, Error, Result};
use crate::field::{fft, gradient_norm, time_matches, WaveField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    /// Number of steps taken so far.
    pub step: usize,
    pub t: f64,
    /// Size of the last step (0 before the first).
    pub dt: f64,
    pub last: bool,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub field: WaveField,
    pub steps: usize,
    pub stop: StopReason,
}

/// Evolves `u0` from `s` to `t`, calling `observer` at the initial time, every
/// `snapshot_stride` steps and at the end.
pub fn strang_evolve(
    u0: &WaveField,
    potential: &Potential,
    nl: &NonlinearitySpec,
    s: f64,
    t: f64,
    controls: &StepControls,
    observer: &mut dyn FnMut(&WaveField, &StepInfo) -> Result<()>,
) -> Result<Outcome> {
    controls.validate()?;
    let grid = u0.grid().clone();
    let d = grid.dim();
    nl.validate(d)?;
    potential.check_dim(d)?;
    if !time_matches(u0.t(), s) {
        return Err(Error::TimeTagMismatch { field: u0.t(), requested: s });
    }
    u0.check_finite()?;
    let mut u = u0.clone().with_time(s);
    let mut info = StepInfo { step: 0, t: s, dt: 0.0, last: s == t };
    if let Some(stop) = gradient_stop(&u, controls) {
        observer(&u, &StepInfo { last: true, ..info })?;
        return Ok(Outcome { field: u, steps: 0, stop });
    }
    observer(&u, &info)?;
    if s == t {
        return Ok(Outcome { field: u, steps: 0, stop: StopReason::Completed });
    }

    let span = t - s;
    let dir = span.signum();
    let uniform_steps = (span.abs() / controls.dt - 1e-9).ceil().max(1.0) as usize;
    let uniform_dt = span / uniform_steps as f64;

    let vmax = potential.max_abs_on_grid(&grid, s, t)?;
    if vmax * controls.dt > 0.5 {
        log::warn!("potential phase per step reaches {:.3} rad at the box edge", vmax * controls.dt);
    }

    let shape = grid.shape();
    let k2 = grid.k_squared();
    let outer: Vec<bool> = {
        let hw: Vec<f64> = (0..d).map(|j| grid.half_width(j)).collect();
        grid.points().iter().map(|x| (0..d).any(|j| x[j].abs() >= 0.9 * hw[j])).collect()
    };
    let mut kinetic: HashMap<u64, Vec<Complex64>> = HashMap::new();
    let mut vbuf = Vec::with_capacity(grid.len());
    let sigma = nl.sigma as i32;
    let mut tau = s;
    let mut step = 0usize;

    loop {
        let remaining = (t - tau) * dir;
        let mut dt_mag = if controls.adaptive.is_none() { uniform_dt.abs() } else { controls.dt };
        if let Some(a) = controls.adaptive {
            let g = nl.coupling(tau)?.abs();
            let peak = u.values().iter().map(|v| v.norm_sqr()).fold(0.0, f64::max).powi(sigma);
            if g * peak > 0.0 {
                dt_mag = dt_mag.min(a.phase_cap / (g * peak)).max(a.min_dt);
            }
        }
        let last = if controls.adaptive.is_none() {
            step + 1 == uniform_steps
        } else {
            dt_mag >= remaining * (1.0 - 1e-12)
        };
        let dt = if last { t - tau } else { dir * dt_mag };
        if dt.abs() < 1e-15 * (1.0 + tau.abs()) {
            return Err(Error::StepUnderflow { t: tau, h: dt.abs() });
        }
        let t_mid = tau + 0.5 * dt;
        potential.fill(&grid, t_mid, &mut vbuf)?;
        let g = nl.coupling(t_mid)?;

        half_step(u.values_mut(), &vbuf, g, sigma, 0.5 * dt);
        let mult = kinetic.entry(dt.to_bits()).or_insert_with(|| {
            k2.iter().map(|&k| Complex64::from_polar(1.0, -0.5 * dt * k)).collect()
        });
        {
            let vals = u.values_mut();
            fft::forward(vals, &shape);
            for (v, m) in vals.iter_mut().zip(mult.iter()) {
                *v *= m;
            }
            fft::inverse(vals, &shape);
        }
        half_step(u.values_mut(), &vbuf, g, sigma, 0.5 * dt);
        if kinetic.len() > 64 {
            kinetic.clear();
        }

        step += 1;
        tau = if last { t } else { tau + dt };
        u.set_time(tau);

        let (total, shell, finite) = u.values().iter().zip(&outer).fold((0.0, 0.0, true), |(tot, sh, ok), (v, &o)| {
            let m = v.norm_sqr();
            (tot + m, if o { sh + m } else { sh }, ok && m.is_finite())
        });
        if !finite {
            return Err(Error::NonFinite { t: tau });
        }
        if total > 0.0 && shell / total > controls.boundary_mass_cap {
            return Err(Error::BoundaryMass { t: tau, fraction: shell / total, cap: controls.boundary_mass_cap });
        }

        info = StepInfo { step, t: tau, dt, last };
        if last || step.is_multiple_of(controls.snapshot_stride) {
            if let Some(stop) = gradient_stop(&u, controls) {
                observer(&u, &StepInfo { last: true, ..info })?;
                return Ok(Outcome { field: u, steps: step, stop });
            }
            observer(&u, &info)?;
        }
        if last {
            return Ok(Outcome { field: u, steps: step, stop: StopReason::Completed });
        }
        if step > 50_000_000 {
            return Err(invalid("step budget exhausted"));
        }
    }
}

fn gradient_stop(u: &WaveField, controls: &StepControls) -> Option<StopReason> {
    let cap = controls.gradient_cap?;
    let g = gradient_norm(u);
    (g > cap).then_some(StopReason::GradientCap { t: u.t(), gradient: g })
}

/// `u ← u · exp(−i h (V + g|u|^{2σ}))`; the modulus is untouched, so this is exact.
fn half_step(values: &mut [Complex64], v: &[f64], g: f64, sigma: i32, h: f64) {
    if g == 0.0 {
        for (u, &p) in values.iter_mut().zip(v) {
            *u *= Complex64::from_polar(1.0, -h * p);
        }
    } else {
        for (u, &p) in values.iter_mut().zip(v) {
            let phase = -h * (p + g * u.norm_sqr().powi(sigma));
            *u *= Complex64::from_polar(1.0, phase);
        }
    }
}

/// Runs [`strang_evolve`] and collects `t`, mass and the strided fields.
pub fn strang_propagate(
    u0: &WaveField,
    potential: &Potential,
    nl: &NonlinearitySpec,
    s: f64,
    t: f64,
    controls: &StepControls,
) -> Result<SolutionTrace> {
    let mut trace = SolutionTrace::new();
    let keep = controls.keep_snapshots;
    let out = strang_evolve(u0, potential, nl, s, t, controls, &mut |u, info| {
        trace.record(info.t, &[("mass", u.mass())])?;
        if keep {
            trace.snapshots.push(u.clone());
        }
        Ok(())
    })?;
    trace.steps = out.steps;
    trace.stop = out.stop;
    trace.final_field = Some(out.field);
    Ok(trace)
}
