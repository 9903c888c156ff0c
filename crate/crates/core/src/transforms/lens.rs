//! The lens transform between the autonomous frame and an isotropic trap.

use num_complex::Complex64;
use serde::Serialize;

use super::resample::resample_scaled;
use crate::coeff::{FundamentalPair, TimeCoefficient, DEFAULT_TOL};
use crate::error::{invalid, Error, Result};
use crate::field::{sobolev_norm, Grid, WaveField};
use crate::propagators::{strang_propagate, NonlinearitySpec, Potential, StepControls};

/// Solution sampler: field at a requested time.
pub type FieldSampler<'a> = dyn Fn(f64) -> Result<WaveField> + 'a;

/// `a = ν̇/ν`, `b = ν`, `ζ = μ/ν` for one isotropic trap, valid while `ν > 0`.
#[derive(Debug, Clone)]
pub struct LensFrame {
    pair: FundamentalPair,
    /// Exclusive end of the validity window (first zero of ν or the solve end).
    window_end: f64,
    /// `(t, ζ, ζ̇)` at the pair's step boundaries inside the window.
    knots: Vec<(f64, f64, f64)>,
}

impl LensFrame {
    pub fn new(omega: &TimeCoefficient, s: f64, t_max: f64, tol: f64) -> Result<Self> {
        if !(t_max > s) {
            return Err(invalid("lens frame needs t_max > s"));
        }
        let pair = FundamentalPair::solve(omega, 0, s, t_max, tol)?;
        let mut window_end = t_max;
        let mut knots = Vec::new();
        let samples = pair.samples();
        for (i, p) in samples.iter().enumerate() {
            if !(p.nu > 0.0) {
                // ν is monotone between these samples near its zero; bisect
                let (mut lo, mut hi) = (samples[i - 1].t, p.t);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if pair.eval(mid)?.nu > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                window_end = hi;
                break;
            }
            knots.push((p.t, p.mu / p.nu, 1.0 / (p.nu * p.nu)));
        }
        Ok(Self { pair, window_end, knots })
    }

    /// Rejects anisotropic traps.
    pub fn isotropic(omega: &[TimeCoefficient], s: f64, t_max: f64, tol: f64) -> Result<Self> {
        let first = omega.first().ok_or_else(|| invalid("no axes"))?;
        if omega.iter().any(|w| w != first) {
            return Err(invalid("lens transform needs the same trap on every axis"));
        }
        Self::new(first, s, t_max, tol)
    }

    pub fn pair(&self) -> &FundamentalPair {
        &self.pair
    }

    pub fn s(&self) -> f64 {
        self.pair.s
    }

    pub fn window(&self) -> (f64, f64) {
        (self.pair.s, self.window_end)
    }

    fn check(&self, t: f64) -> Result<()> {
        if t < self.pair.s || t >= self.window_end {
            return Err(Error::LensWindow {
                t,
                reason: format!("outside the window [{}, {})", self.pair.s, self.window_end),
            });
        }
        Ok(())
    }

    /// `(a, b, ζ)` at `t`.
    pub fn coefficients(&self, t: f64) -> Result<(f64, f64, f64)> {
        self.check(t)?;
        let st = self.pair.eval(t)?;
        if !(st.nu > 0.0) {
            return Err(Error::LensWindow { t, reason: format!("nu = {}", st.nu) });
        }
        Ok((st.nu_dot / st.nu, st.nu, st.mu / st.nu))
    }

    pub fn zeta(&self, t: f64) -> Result<f64> {
        Ok(self.coefficients(t)?.2)
    }

    /// `ζ̇ = (μ̇ν − μν̇)/ν²`.
    pub fn zeta_rate(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        let st = self.pair.eval(t)?;
        Ok((st.mu_dot * st.nu - st.mu * st.nu_dot) / (st.nu * st.nu))
    }

    /// `ζ⁻¹(τ)`: cubic Hermite guess from the knots, then Newton.
    pub fn zeta_inverse(&self, tau: f64) -> Result<f64> {
        let k = &self.knots;
        let (z_lo, z_hi) = (k[0].1, k[k.len() - 1].1);
        if !(tau >= z_lo && tau <= z_hi) {
            // the last knot may stop short of the window end
            let t_last = k[k.len() - 1].0;
            if tau > z_hi && t_last < self.window_end {
                return self.newton(tau, t_last);
            }
            return Err(Error::LensWindow { t: tau, reason: format!("zeta outside [{z_lo}, {z_hi}]") });
        }
        let i = k.partition_point(|p| p.1 <= tau).clamp(1, k.len() - 1) - 1;
        let (t0, z0, r0) = k[i];
        let (t1, z1, r1) = k[(i + 1).min(k.len() - 1)];
        let guess = if z1 > z0 {
            // Hermite interpolation of t(ζ) with dt/dζ = 1/ζ̇
            let h = z1 - z0;
            let u = (tau - z0) / h;
            let (h00, h10, h01, h11) =
                (2.0 * u.powi(3) - 3.0 * u * u + 1.0, u.powi(3) - 2.0 * u * u + u, -2.0 * u.powi(3) + 3.0 * u * u, u.powi(3) - u * u);
            h00 * t0 + h10 * h / r0 + h01 * t1 + h11 * h / r1
        } else {
            t0
        };
        self.newton(tau, guess.clamp(t0, t1.max(t0)))
    }

    fn newton(&self, tau: f64, mut t: f64) -> Result<f64> {
        let (lo, hi) = self.window();
        for _ in 0..50 {
            t = t.clamp(lo, hi - 1e-14 * (1.0 + hi.abs()));
            let st = self.pair.eval(t)?;
            let z = st.mu / st.nu;
            let step = (z - tau) * st.nu * st.nu;
            t -= step;
            if step.abs() <= 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        self.check(t)?;
        Ok(t)
    }
}

/// `u(t, x) = ν^{−d/2} v(ζ, x/ν) e^{i(ν̇/ν)|x|²/2}`.
pub fn lens_forward(v_at: &FieldSampler, frame: &LensFrame, t: f64, grid: &Grid) -> Result<WaveField> {
    let (a, b, zeta) = frame.coefficients(t)?;
    let v = v_at(zeta)?;
    let d = grid.dim() as i32;
    let scaled = resample_scaled(&v, grid, b)?;
    let amp = b.powf(-0.5 * d as f64);
    scaled
        .map(|x, z| {
            let r2: f64 = x.iter().map(|c| c * c).sum();
            z * Complex64::from_polar(amp, 0.5 * a * r2)
        })
        .map(|u| u.with_time(t))
}

/// The inverse map: `v(τ, y) = ν^{d/2} u(t, νy) e^{−i(ν̇/ν)ν²|y|²/2}` with `t = ζ⁻¹(τ)`.
pub fn lens_inverse(u_at: &FieldSampler, frame: &LensFrame, tau: f64, grid: &Grid) -> Result<WaveField> {
    let t = frame.zeta_inverse(tau)?;
    let (a, b, _) = frame.coefficients(t)?;
    let u = u_at(t)?;
    let d = grid.dim() as i32;
    let scaled = resample_scaled(&u, grid, 1.0 / b)?;
    let amp = b.powf(0.5 * d as f64);
    scaled
        .map(|y, z| {
            let r2: f64 = y.iter().map(|c| c * c).sum();
            z * Complex64::from_polar(amp, -0.5 * a * b * b * r2)
        })
        .map(|v| v.with_time(tau))
}

/// `h(t) = ν^{dσ−2} H(ζ(t))`.
pub fn lens_h(big_h: &TimeCoefficient, frame: &LensFrame, d: usize, sigma: u32, t: f64) -> Result<f64> {
    let (_, nu, zeta) = frame.coefficients(t)?;
    Ok(nu.powi(d as i32 * sigma as i32 - 2) * big_h.eval(zeta)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LensReport {
    pub t: f64,
    pub zeta: f64,
    pub l2_gap: f64,
    pub h1_gap: f64,
    pub mass_direct: f64,
    pub mass_lens: f64,
}

/// Solves in both frames with Strang and compares at `t`.
///
/// The autonomous frame uses coupling `H` (`nl.big_h`, or `λ` if absent); the
/// direct solve uses `h(t)` from [`lens_h`], tabulated finely when `dσ ≠ 2`.
pub fn lens_roundtrip_check(
    nl: &NonlinearitySpec,
    omega: &TimeCoefficient,
    u0: &WaveField,
    t: f64,
    dt: f64,
) -> Result<LensReport> {
    let grid = u0.grid().clone();
    let d = grid.dim();
    nl.validate(d)?;
    let s = u0.t();
    let frame = LensFrame::new(omega, s, t + 1e-9 * (1.0 + t.abs()), DEFAULT_TOL)?;
    let zeta = frame.zeta(t)?;
    let big_h = nl.big_h.clone().unwrap_or(TimeCoefficient::constant(nl.lambda));
    let critical = d as u32 * nl.sigma == 2;

    let nl_v = NonlinearitySpec {
        lambda: if big_h.is_constant() { big_h.eval(0.0)? } else { 0.0 },
        sigma: nl.sigma,
        h: (!big_h.is_constant()).then(|| big_h.clone()),
        big_h: None,
    };
    let h_coeff = if critical && big_h.is_constant() {
        None
    } else {
        let n = 4000;
        let times: Vec<f64> = (0..=n).map(|i| s + (t - s) * i as f64 / n as f64).collect();
        let values = times.iter().map(|&tt| lens_h(&big_h, &frame, d, nl.sigma, tt)).collect::<Result<Vec<_>>>()?;
        Some(TimeCoefficient::table(times, values)?)
    };
    let nl_u = match h_coeff {
        Some(h) => NonlinearitySpec { lambda: 0.0, sigma: nl.sigma, h: Some(h), big_h: None },
        None => NonlinearitySpec { lambda: big_h.eval(0.0)?, sigma: nl.sigma, h: None, big_h: None },
    };

    let mut ctl = StepControls::new(dt).stride(usize::MAX);
    ctl.keep_snapshots = false;
    let direct = strang_propagate(u0, &Potential::isotropic(omega.clone(), d), &nl_u, s, t, &ctl)?
        .final_field
        .expect("strang always returns a field");

    // the autonomous frame starts from the same datum at ζ = 0
    let v_steps = ((zeta - 0.0) / dt).ceil().max(1.0);
    let v_ctl = StepControls { dt: zeta / v_steps, ..ctl.clone() };
    let v0 = u0.clone().with_time(0.0);
    let v_end = strang_propagate(&v0, &Potential::free(d), &nl_v, 0.0, zeta, &v_ctl)?
        .final_field
        .expect("strang always returns a field");
    let sampler = |z: f64| -> Result<WaveField> {
        if (z - zeta).abs() > 1e-12 * (1.0 + zeta.abs()) {
            return Err(invalid(format!("autonomous solution only available at {zeta}")));
        }
        Ok(v_end.clone())
    };
    let mapped = lens_forward(&sampler, &frame, t, &grid)?;
    let diff = mapped.sub(&direct)?;
    Ok(LensReport {
        t,
        zeta,
        l2_gap: diff.mass().sqrt(),
        h1_gap: sobolev_norm(&diff, 1),
        mass_direct: direct.mass(),
        mass_lens: mapped.mass(),
    })
}
