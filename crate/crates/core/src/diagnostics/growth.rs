//! Algebraic vs exponential growth fits.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

pub const MIN_TAIL_SAMPLES: usize = 20;
pub const MIN_SPAN_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthModel {
    Algebraic,
    Exponential,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS of the residuals in `log(value)`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    pub k: u32,
    /// `log v ≈ A log t + c`.
    pub algebraic: LineFit,
    /// `log v ≈ C t + c`.
    pub exponential: LineFit,
    pub preferred: GrowthModel,
    pub tail_start: f64,
    pub samples: usize,
}

impl GrowthFit {
    pub fn exponent(&self) -> f64 {
        self.algebraic.slope
    }

    pub fn rate(&self) -> f64 {
        self.exponential.slope
    }
}

fn least_squares(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    LineFit { slope, intercept, residual: (ss / n).sqrt() }
}

/// Fits both models on the later half of `(t, v)`.
///
/// The series must have positive times spanning a factor of at least 4 and at
/// least 20 samples in its later half. One model is preferred when its
/// residual is under half the other's.
pub fn growth_fit(times: &[f64], values: &[f64], k: u32) -> Result<GrowthFit> {
    if times.len() != values.len() {
        return Err(invalid("times and values differ in length"));
    }
    let n = times.len();
    let tail = n / 2;
    if n - tail < MIN_TAIL_SAMPLES {
        return Err(Error::SeriesTooShort(format!("{} tail samples, need {MIN_TAIL_SAMPLES}", n - tail)));
    }
    let (t0, t1) = (times[0], times[n - 1]);
    if !(t0 > 0.0) || t1 < MIN_SPAN_FACTOR * t0 {
        return Err(Error::SeriesTooShort(format!("times [{t0}, {t1}] do not span a factor {MIN_SPAN_FACTOR}")));
    }
    if values.iter().any(|v| !(*v > 0.0)) {
        return Err(invalid("growth fit needs positive values"));
    }
    let ts = &times[tail..];
    let ly: Vec<f64> = values[tail..].iter().map(|v| v.ln()).collect();
    let lt: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let algebraic = least_squares(&lt, &ly);
    let exponential = least_squares(ts, &ly);
    let preferred = if exponential.residual < 0.5 * algebraic.residual {
        GrowthModel::Exponential
    } else if algebraic.residual < 0.5 * exponential.residual {
        GrowthModel::Algebraic
    } else {
        GrowthModel::Inconclusive
    };
    Ok(GrowthFit { k, algebraic, exponential, preferred, tail_start: ts[0], samples: ts.len() })
}
