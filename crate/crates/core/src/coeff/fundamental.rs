//! Fundamental solutions of `η̈ + Ω(t) η = 0` and the coefficients built on them.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_4, PI};

use serde::Serialize;

use super::dd::Dd;
use super::ode::{DenseSolution, Dopri5};
use super::profile::TimeCoefficient;
use crate::error::{invalid, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;

/// `|μ̇|` below which the γ integrand is considered singular.
pub const GAMMA_BAND: f64 = 1e-3;

/// `|μ| < CAUSTIC_BAND · (1 + |t − s|)` counts as a caustic.
pub const CAUSTIC_BAND: f64 = 1e-8;

const MU: usize = 0;
const MU_DOT: usize = 1;
const NU: usize = 2;
const NU_DOT: usize = 3;
const GAMMA_INT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairSample {
    pub t: f64,
    pub mu: f64,
    pub mu_dot: f64,
    pub nu: f64,
    pub nu_dot: f64,
}

/// `(μ, μ̇, ν, ν̇)` on one axis, started at `s`.
#[derive(Debug, Clone)]
pub struct FundamentalPair {
    pub axis: usize,
    pub s: f64,
    pub tol: f64,
    omega: TimeCoefficient,
    sol: DenseSolution<Dd>,
    /// Last time at which the accumulated `∫ Ω/μ̇²` can be trusted.
    gamma_valid_until: f64,
}

/// Solves the pair on every axis from `s` to `t_end`.
pub fn solve_fundamental(omega: &[TimeCoefficient], s: f64, t_end: f64, tol: f64) -> Result<Vec<FundamentalPair>> {
    if omega.is_empty() {
        return Err(invalid("no axes"));
    }
    let mut out: Vec<FundamentalPair> = Vec::with_capacity(omega.len());
    for (axis, w) in omega.iter().enumerate() {
        // identical coefficients on several axes share one solve
        let pair = match omega[..axis].iter().position(|o| o == w) {
            Some(j) => FundamentalPair { axis, ..out[j].clone() },
            None => FundamentalPair::solve(w, axis, s, t_end, tol)?,
        };
        out.push(pair);
    }
    Ok(out)
}

impl FundamentalPair {
    pub fn solve(omega: &TimeCoefficient, axis: usize, s: f64, t_end: f64, tol: f64) -> Result<Self> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(invalid(format!("tolerance must be positive, got {tol}")));
        }
        if !s.is_finite() || !t_end.is_finite() {
            return Err(invalid("non-finite integration bounds"));
        }
        let y0 = vec![Dd::ZERO, Dd::ONE, Dd::ONE, Dd::ZERO, Dd::ZERO];
        // evaluate once at both ends so an out-of-range table fails up front
        omega.eval(s)?;
        omega.eval(t_end)?;
        if s == t_end {
            return Ok(Self {
                axis,
                s,
                tol,
                omega: omega.clone(),
                sol: DenseSolution::new(s, y0),
                gamma_valid_until: s,
            });
        }
        let live = Cell::new(true);
        let rhs = |t: f64, y: &[Dd], dy: &mut [Dd]| -> Result<()> {
            let w = omega.eval(t)?;
            dy[MU] = y[MU_DOT];
            dy[MU_DOT] = -(y[MU] * w);
            dy[NU] = y[NU_DOT];
            dy[NU_DOT] = -(y[NU] * w);
            dy[GAMMA_INT] = if live.get() {
                let md = y[MU_DOT].to_f64();
                Dd::new(w / (md * md))
            } else {
                Dd::ZERO
            };
            Ok(())
        };
        let mut st = Dopri5::new(rhs, s, y0.clone(), t_end, tol, tol)?;
        let mut sol = DenseSolution::new(s, y0);
        let mut gamma_valid_until = t_end;
        let dir = (t_end - s).signum();
        while (t_end - st.t()) * dir > 0.0 {
            let step = st.step(t_end)?;
            if live.get() {
                let before = step.start()[MU_DOT].to_f64();
                let after = step.end()[MU_DOT].to_f64();
                if after.abs() < GAMMA_BAND || after.signum() != before.signum() {
                    live.set(false);
                    st.active[GAMMA_INT] = false;
                    gamma_valid_until = step.t0;
                }
            }
            sol.steps.push(step);
        }
        Ok(Self { axis, s, tol, omega: omega.clone(), sol, gamma_valid_until })
    }

    pub fn omega(&self) -> &TimeCoefficient {
        &self.omega
    }

    pub fn range(&self) -> (f64, f64) {
        self.sol.range()
    }

    pub fn t_end(&self) -> f64 {
        self.sol.t_end()
    }

    pub fn gamma_valid_until(&self) -> f64 {
        self.gamma_valid_until
    }

    fn state(&self, t: f64) -> Result<Vec<Dd>> {
        self.sol.eval(t)
    }

    pub fn eval(&self, t: f64) -> Result<PairSample> {
        let y = self.state(t)?;
        Ok(PairSample {
            t,
            mu: y[MU].to_f64(),
            mu_dot: y[MU_DOT].to_f64(),
            nu: y[NU].to_f64(),
            nu_dot: y[NU_DOT].to_f64(),
        })
    }

    /// States at the solver's accepted step boundaries.
    pub fn samples(&self) -> Vec<PairSample> {
        let mut out = Vec::with_capacity(self.sol.steps.len() + 1);
        let mk = |t: f64, y: &[Dd]| PairSample {
            t,
            mu: y[MU].to_f64(),
            mu_dot: y[MU_DOT].to_f64(),
            nu: y[NU].to_f64(),
            nu_dot: y[NU_DOT].to_f64(),
        };
        out.push(mk(self.s, &self.sol.y_start));
        for st in &self.sol.steps {
            out.push(mk(st.t1(), &st.end()));
        }
        out
    }

    /// Step boundaries plus `sub − 1` interior points per step, clipped to `[a, b]`.
    pub fn sample_times(&self, a: f64, b: f64, sub: usize) -> Vec<f64> {
        let (lo, hi) = (a.min(b), a.max(b));
        let mut ts = vec![self.s];
        for st in &self.sol.steps {
            for k in 1..=sub.max(1) {
                ts.push(st.t0 + st.h * k as f64 / sub.max(1) as f64);
            }
        }
        ts.retain(|&t| t >= lo && t <= hi);
        ts.push(lo);
        ts.push(hi);
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts
    }

    /// `∫_s^t Ω/μ̇²`, available between `s` and the first near-zero of `μ̇`.
    pub fn gamma_integral(&self, t: f64) -> Result<f64> {
        let past = (t - self.gamma_valid_until) * (self.t_end() - self.s).signum() > 0.0;
        if past {
            return Err(Error::GammaUnavailable { axis: self.axis, valid_until: self.gamma_valid_until });
        }
        Ok(self.state(t)?[GAMMA_INT].to_f64())
    }
}

/// `ν μ̇ − μ ν̇ − 1`, evaluated from the extended-precision trajectory.
pub fn wronskian_residual(pair: &FundamentalPair, t: f64) -> Result<f64> {
    let y = pair.state(t)?;
    Ok((y[NU] * y[MU_DOT] - y[MU] * y[NU_DOT] - Dd::ONE).to_f64())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisMehler {
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `|(2iπμ)^{-1/2}|`.
    pub amplitude: f64,
    /// Argument of `(2iπμ)^{-1/2}`.
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MehlerCoefficients {
    pub s: f64,
    pub t: f64,
    pub axes: Vec<AxisMehler>,
}

pub fn is_caustic(mu: f64, t: f64, s: f64) -> bool {
    mu.abs() < CAUSTIC_BAND * (1.0 + (t - s).abs())
}

/// Kernel coefficients for the propagator from `s` to `t`.
pub fn mehler_coefficients(pairs: &[FundamentalPair], t: f64) -> Result<MehlerCoefficients> {
    let s = pairs.first().ok_or_else(|| invalid("no axes"))?.s;
    let axes = pairs
        .iter()
        .map(|p| {
            let st = p.eval(t)?;
            if is_caustic(st.mu, t, p.s) {
                return Err(Error::Caustic { axis: p.axis, t, mu: st.mu });
            }
            let integral = p.gamma_integral(t)?;
            let gamma = 1.0 / (st.mu * st.mu_dot) - integral;
            Ok(AxisMehler {
                mu: st.mu,
                alpha: st.mu_dot / st.mu,
                beta: -1.0 / st.mu,
                gamma,
                amplitude: (2.0 * PI * st.mu.abs()).powf(-0.5),
                phase: if st.mu > 0.0 { -FRAC_PI_4 } else { FRAC_PI_4 },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MehlerCoefficients { s, t, axes })
}

/// Lens-frame coefficients `a = ν̇/ν`, `b = ν`, `ζ = μ/ν`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LensCoefficients {
    pub a: f64,
    pub b: f64,
    pub zeta: f64,
}

pub fn lens_coefficients(pair: &FundamentalPair, t: f64) -> Result<LensCoefficients> {
    let st = pair.eval(t)?;
    if !(st.nu > 0.0) {
        return Err(Error::LensWindow { t, reason: format!("nu = {} is not positive", st.nu) });
    }
    Ok(LensCoefficients { a: st.nu_dot / st.nu, b: st.nu, zeta: st.mu / st.nu })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CausticTime {
    pub axis: usize,
    pub t: f64,
}

/// Sign changes of `μ` on every axis, bisected to near machine precision.
pub fn caustic_times(pairs: &[FundamentalPair], interval: (f64, f64)) -> Result<Vec<CausticTime>> {
    let mut out = Vec::new();
    for p in pairs {
        let (lo, hi) = p.range();
        let (a, b) = (interval.0.min(interval.1), interval.0.max(interval.1));
        if a < lo || b > hi {
            return Err(Error::OutOfRange { t: if a < lo { a } else { b }, lo, hi });
        }
        let ts = p.sample_times(a, b, 4);
        let mu = |t: f64| p.eval(t).map(|s| s.mu);
        let mut prev_t = ts[0];
        let mut prev = mu(prev_t)?;
        for &t in &ts[1..] {
            let cur = mu(t)?;
            if prev != 0.0 && cur != 0.0 && prev.signum() != cur.signum() {
                let (mut l, mut r, mut fl) = (prev_t, t, prev);
                while r - l > 4.0 * f64::EPSILON * l.abs().max(r.abs()).max(1.0) {
                    let m = 0.5 * (l + r);
                    let fm = mu(m)?;
                    if fm == 0.0 {
                        l = m;
                        r = m;
                        break;
                    }
                    if fm.signum() == fl.signum() {
                        l = m;
                        fl = fm;
                    } else {
                        r = m;
                    }
                }
                out.push(CausticTime { axis: p.axis, t: 0.5 * (l + r) });
            } else if cur == 0.0 && t != p.s && t != b {
                out.push(CausticTime { axis: p.axis, t });
            }
            prev_t = t;
            prev = cur;
        }
    }
    out.sort_by(|x, y| x.t.total_cmp(&y.t).then(x.axis.cmp(&y.axis)));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotoneFlags {
    pub nu_at_least_one: bool,
    pub mu_at_least_elapsed: bool,
    pub nu_dot_nonnegative: bool,
    pub mu_dot_at_least_one: bool,
}

impl MonotoneFlags {
    pub fn all(&self) -> bool {
        self.nu_at_least_one && self.mu_at_least_elapsed && self.nu_dot_nonnegative && self.mu_dot_at_least_one
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructuralReport {
    pub axis: usize,
    /// Smallest `C` with `|μ|+|μ̇|+|ν|+|ν̇| ≤ 2 e^{C|t−s|}` at every sample.
    pub envelope_rate: f64,
    /// Present only when `Ω ≤ 0` at every sample of the interval.
    pub monotone: Option<MonotoneFlags>,
}

pub fn structural_checks(pair: &FundamentalPair, interval: (f64, f64)) -> Result<StructuralReport> {
    let ts = pair.sample_times(interval.0, interval.1, 4);
    let mut rate: f64 = 0.0;
    let mut repulsive = true;
    let mut flags = MonotoneFlags {
        nu_at_least_one: true,
        mu_at_least_elapsed: true,
        nu_dot_nonnegative: true,
        mu_dot_at_least_one: true,
    };
    for &t in &ts {
        let st = pair.eval(t)?;
        let el = t - pair.s;
        let size = st.mu.abs() + st.mu_dot.abs() + st.nu.abs() + st.nu_dot.abs();
        if el != 0.0 {
            rate = rate.max((size / 2.0).ln() / el.abs());
        }
        if pair.omega.eval(t)? > 0.0 {
            repulsive = false;
        }
        let dir = if el >= 0.0 { 1.0 } else { -1.0 };
        let slack = |v: f64| 10.0 * pair.tol * (1.0 + v.abs());
        flags.nu_at_least_one &= st.nu >= 1.0 - slack(st.nu);
        flags.mu_at_least_elapsed &= dir * st.mu >= el.abs() - slack(st.mu);
        flags.nu_dot_nonnegative &= dir * st.nu_dot >= -slack(st.nu_dot);
        flags.mu_dot_at_least_one &= st.mu_dot >= 1.0 - slack(st.mu_dot);
    }
    Ok(StructuralReport { axis: pair.axis, envelope_rate: rate, monotone: repulsive.then_some(flags) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(w: f64, s: f64, t: f64) -> FundamentalPair {
        FundamentalPair::solve(&TimeCoefficient::constant(w), 0, s, t, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn initial_conditions_are_exact() {
        let p = one(2.0, 1.5, 4.0);
        let st = p.eval(1.5).unwrap();
        assert_eq!((st.mu, st.mu_dot, st.nu, st.nu_dot), (0.0, 1.0, 1.0, 0.0));
        assert_eq!(wronskian_residual(&p, 1.5).unwrap(), 0.0);
    }

    #[test]
    fn free_coefficients() {
        let p = one(0.0, 0.0, 2.0);
        let m = mehler_coefficients(std::slice::from_ref(&p), 1.0).unwrap();
        let a = m.axes[0];
        assert!((a.alpha - 1.0).abs() < 1e-12);
        assert!((a.beta + 1.0).abs() < 1e-12);
        assert!((a.gamma - 1.0).abs() < 1e-12);
        assert!(matches!(
            mehler_coefficients(std::slice::from_ref(&p), 1e-10),
            Err(Error::Caustic { .. })
        ));
        let near = mehler_coefficients(std::slice::from_ref(&p), 1e-6).unwrap().axes[0];
        assert!(near.alpha.is_finite() && (near.alpha * 1e-6 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn harmonic_coefficients_and_gamma_window() {
        let p = one(1.0, 0.0, 3.0);
        let t = PI / 4.0;
        let a = mehler_coefficients(std::slice::from_ref(&p), t).unwrap().axes[0];
        assert!((a.alpha - 1.0).abs() < 1e-9);
        assert!((a.beta + 2f64.sqrt()).abs() < 1e-9);
        // γ = ν/μ = cot t
        assert!((a.gamma - 1.0).abs() < 1e-8);
        assert!(p.gamma_valid_until() < PI / 2.0 && p.gamma_valid_until() > PI / 2.0 - 0.01);
        assert!(matches!(
            mehler_coefficients(std::slice::from_ref(&p), 2.0),
            Err(Error::GammaUnavailable { .. })
        ));
    }

    #[test]
    fn backward_pair() {
        let p = one(-1.0, 0.0, -3.0);
        let st = p.eval(-2.0).unwrap();
        assert!((st.mu - (-2f64).sinh()).abs() < 1e-9);
        assert!((st.nu - 2f64.cosh()).abs() < 1e-9);
        let a = mehler_coefficients(std::slice::from_ref(&p), -1.0).unwrap().axes[0];
        assert!(a.phase > 0.0);
        assert!((a.gamma - (-1f64).cosh() / (-1f64).sinh()).abs() < 1e-8);
    }

    #[test]
    fn caustics_of_the_oscillator() {
        let p = one(1.0, 0.0, 8.0);
        let c = caustic_times(std::slice::from_ref(&p), (0.1, 7.0)).unwrap();
        assert_eq!(c.len(), 2);
        assert!((c[0].t - PI).abs() < 1e-9);
        assert!((c[1].t - 2.0 * PI).abs() < 1e-9);
        let q = one(-1.0, 0.0, 10.0);
        assert!(caustic_times(std::slice::from_ref(&q), (0.1, 10.0)).unwrap().is_empty());
    }

    #[test]
    fn lens_window() {
        let p = one(1.0, 0.0, 2.0);
        let l = lens_coefficients(&p, 0.5).unwrap();
        assert!((l.zeta - 0.5f64.tan()).abs() < 1e-9);
        assert!(matches!(lens_coefficients(&p, 1.8), Err(Error::LensWindow { .. })));
    }

    #[test]
    fn structural_flags() {
        let p = one(-1.0, 0.0, 5.0);
        let r = structural_checks(&p, (0.0, 5.0)).unwrap();
        assert!(r.monotone.unwrap().all());
        let f = one(0.0, 0.0, 5.0);
        assert!(structural_checks(&f, (0.0, 5.0)).unwrap().monotone.unwrap().all());
        let h = one(1.0, 0.0, 5.0);
        assert!(structural_checks(&h, (0.0, 5.0)).unwrap().monotone.is_none());
    }
}
