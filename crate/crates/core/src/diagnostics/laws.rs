//! Evolution-law residuals from strided snapshots.

use serde::Serialize;

use super::functionals::{energy, energy_rate, free_pseudo_conformal, pseudo_conformal, variance, variance_rate, virial_rhs};
use crate::coeff::FundamentalPair;
use crate::error::{invalid, Error, Result};
use crate::field::WaveField;
use crate::propagators::{NonlinearitySpec, Potential, SolutionTrace};

/// Finite-difference weights for derivatives `0..=m` at `z` from nodes `x` (Fornberg).
pub fn fd_weights(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] *= c4 / c3;
        }
        c1 = c2;
    }
    c
}

/// `order`-th derivative of `(t, v)` at interior samples from a centered
/// five-point stencil (three-point if fewer than five samples).
fn centered_derivative(t: &[f64], v: &[f64], order: usize) -> Vec<(usize, f64)> {
    let half = if t.len() >= 5 { 2 } else { 1 };
    (half..t.len().saturating_sub(half))
        .map(|i| {
            let w = fd_weights(t[i], &t[i - half..=i + half], order);
            (i, w[order].iter().zip(&v[i - half..=i + half]).map(|(a, b)| a * b).sum())
        })
        .collect()
}

/// `lhs − rhs` at interior snapshot times.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ResidualSeries {
    pub times: Vec<f64>,
    /// Finite-difference side.
    pub lhs: Vec<f64>,
    /// Instantaneous side.
    pub rhs: Vec<f64>,
    pub residual: Vec<f64>,
}

impl ResidualSeries {
    fn build(times: &[f64], fd: Vec<(usize, f64)>, rhs: &[f64]) -> Self {
        let mut s = Self::default();
        for (i, l) in fd {
            s.times.push(times[i]);
            s.lhs.push(l);
            s.rhs.push(rhs[i]);
            s.residual.push(l - rhs[i]);
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn snapshots(trace: &SolutionTrace, min: usize) -> Result<(&[WaveField], Vec<f64>)> {
    let snaps = trace.snapshots.as_slice();
    if snaps.len() < min {
        return Err(Error::SeriesTooShort(format!("{} snapshots, need at least {min}", snaps.len())));
    }
    let times: Vec<f64> = snaps.iter().map(|u| u.t()).collect();
    let max_gap = times.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    if max_gap > 0.05 {
        log::warn!("snapshot spacing {max_gap} is coarse; law residuals will be dominated by the difference quotient");
    }
    Ok((snaps, times))
}

/// `dE/dt − ∫∂_tV|u|² (− ġ/(σ+1)‖u‖^{2σ+2})`.
pub fn energy_law_residual(trace: &SolutionTrace, potential: &Potential, nl: &NonlinearitySpec) -> Result<ResidualSeries> {
    let (snaps, times) = snapshots(trace, 3)?;
    let e: Vec<f64> = snaps.iter().map(|u| energy(u, potential, nl, u.t())).collect::<Result<_>>()?;
    let rhs: Vec<f64> = snaps.iter().map(|u| energy_rate(u, potential, nl, u.t())).collect::<Result<_>>()?;
    Ok(ResidualSeries::build(&times, centered_derivative(&times, &e, 1), &rhs))
}

/// The virial identity, plus the first-derivative check `ẏ = 2 Im ∫ū x·∇u`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VirialResidual {
    pub second: ResidualSeries,
    pub first: ResidualSeries,
}

pub fn virial_residual(trace: &SolutionTrace, potential: &Potential, nl: &NonlinearitySpec) -> Result<VirialResidual> {
    let (snaps, times) = snapshots(trace, 5)?;
    let y: Vec<f64> = snaps.iter().map(variance).collect();
    let ydot: Vec<f64> = snaps.iter().map(variance_rate).collect::<Result<_>>()?;
    let rhs: Vec<f64> = snaps.iter().map(|u| virial_rhs(u, potential, nl, u.t())).collect::<Result<_>>()?;
    Ok(VirialResidual {
        second: ResidualSeries::build(&times, centered_derivative(&times, &y, 2), &rhs),
        first: ResidualSeries::build(&times, centered_derivative(&times, &y, 1), &ydot),
    })
}

/// Residuals of the A/B laws together with the bracketed quantities themselves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbLaws {
    pub times: Vec<f64>,
    pub theta_a: Vec<f64>,
    pub theta_b: Vec<f64>,
    pub a: ResidualSeries,
    pub b: ResidualSeries,
}

impl AbLaws {
    /// Largest `|Θ(t) − Θ(t₀)| / |Θ(t₀)|` over both brackets.
    pub fn relative_drift(&self) -> f64 {
        [&self.theta_a, &self.theta_b]
            .iter()
            .map(|s| s.iter().map(|v| ((v - s[0]) / s[0]).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    /// Largest sample-to-sample increase over both brackets (≤ 0 when monotone).
    pub fn max_increase(&self) -> f64 {
        [&self.theta_a, &self.theta_b]
            .iter()
            .flat_map(|s| s.windows(2).map(|w| w[1] - w[0]))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `pair` must be the (shared) isotropic pair started at the trace's initial time.
pub fn ab_law_residuals(trace: &SolutionTrace, pair: &FundamentalPair, potential: &Potential, nl: &NonlinearitySpec) -> Result<AbLaws> {
    if let Some(omega) = potential.omega() {
        if omega.iter().any(|w| w != pair.omega()) {
            return Err(invalid("A/B laws need an isotropic trap matching the pair"));
        }
    } else {
        return Err(invalid("A/B laws need a quadratic potential"));
    }
    if potential.has_linear_part() {
        return Err(invalid("A/B laws do not hold with a linear field"));
    }
    let (snaps, times) = snapshots(trace, 3)?;
    let pc: Vec<_> = snaps.iter().map(|u| pseudo_conformal(u, pair, nl, u.t())).collect::<Result<_>>()?;
    let theta_a: Vec<f64> = pc.iter().map(|p| p.theta_a).collect();
    let theta_b: Vec<f64> = pc.iter().map(|p| p.theta_b).collect();
    let ra: Vec<f64> = pc.iter().map(|p| p.rate_a).collect();
    let rb: Vec<f64> = pc.iter().map(|p| p.rate_b).collect();
    Ok(AbLaws {
        a: ResidualSeries::build(&times, centered_derivative(&times, &theta_a, 1), &ra),
        b: ResidualSeries::build(&times, centered_derivative(&times, &theta_b, 1), &rb),
        times,
        theta_a,
        theta_b,
    })
}

/// The `J = x + it∇` law; only for runs without a potential.
pub fn pseudo_conformal_residual(trace: &SolutionTrace, potential: &Potential, nl: &NonlinearitySpec) -> Result<(Vec<f64>, ResidualSeries)> {
    let free = match potential {
        Potential::Quadratic { omega, .. } => {
            omega.iter().all(|w| w.is_constant() && w.eval(0.0).ok() == Some(0.0)) && !potential.has_linear_part()
        }
        Potential::Custom(_) => false,
    };
    if !free {
        return Err(invalid("the J law is only stated without a potential"));
    }
    let (snaps, times) = snapshots(trace, 3)?;
    let q: Vec<(f64, f64)> = snaps.iter().map(|u| free_pseudo_conformal(u, nl, u.t())).collect::<Result<_>>()?;
    let vals: Vec<f64> = q.iter().map(|p| p.0).collect();
    let rates: Vec<f64> = q.iter().map(|p| p.1).collect();
    let series = ResidualSeries::build(&times, centered_derivative(&times, &vals, 1), &rates);
    Ok((vals, series))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_weights() {
        let w = fd_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 2);
        let d1 = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        let d2 = [-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0];
        for i in 0..5 {
            assert!((w[1][i] - d1[i]).abs() < 1e-14);
            assert!((w[2][i] - d2[i]).abs() < 1e-14);
        }
        // exact on quartics at uneven nodes
        let x = [0.0, 0.3, 0.5, 1.1, 1.2];
        let w = fd_weights(0.6, &x, 2);
        let f = |t: f64| t.powi(4) - t;
        let d: f64 = w[1].iter().zip(&x).map(|(a, b)| a * f(*b)).sum();
        let dd: f64 = w[2].iter().zip(&x).map(|(a, b)| a * f(*b)).sum();
        assert!((d - (4.0 * 0.6f64.powi(3) - 1.0)).abs() < 1e-12);
        assert!((dd - 12.0 * 0.36).abs() < 1e-11);
    }
}
