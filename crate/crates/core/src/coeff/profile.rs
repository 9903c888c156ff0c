//! Time-dependent scalar coefficients: trap strengths, couplings, fields.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::spline::CubicSpline;
use crate::error::{invalid, Error, Result};

/// A real function of time, either constant, tabulated (cubic, not-a-knot) or
/// one of the named analytic profiles. A bare number deserializes as a constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoefficient", into = "CoefficientSpec")]
pub enum TimeCoefficient {
    Constant(f64),
    Table(CubicSpline),
    Named(NamedProfile),
}

/// Serialized form of [`TimeCoefficient`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientSpec {
    Constant(f64),
    Table { times: Vec<f64>, values: Vec<f64> },
    Profile {
        id: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawCoefficient {
    Bare(f64),
    Spec(serde_json::Value),
}

impl TryFrom<RawCoefficient> for TimeCoefficient {
    type Error = Error;

    fn try_from(raw: RawCoefficient) -> Result<Self> {
        match raw {
            RawCoefficient::Bare(c) => CoefficientSpec::Constant(c).try_into(),
            RawCoefficient::Spec(v) => CoefficientSpec::deserialize(v).map_err(|e| invalid(e.to_string()))?.try_into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NamedProfile {
    /// Plateaus `Ω = n²` on `[4n+1, 4n+2]`, joined by linear ramps; zero
    /// before `t = 2`. Saturates at `n_max²` when `n_max` is given.
    Pulsed { n_max: Option<u32> },
    /// The trap generated by `μ(t) = exp(1 − eᵗ) − exp(1 − e²ᵗ)`.
    DoubleExponential,
    /// `offset + amplitude · cos(frequency · t + phase)`.
    Cosine { offset: f64, amplitude: f64, frequency: f64, phase: f64 },
    /// `amplitude · sin²(π (t − start)/(end − start))` on `[start, end]`, zero elsewhere.
    Bump { amplitude: f64, start: f64, end: f64 },
    /// `intercept + slope · t`.
    Linear { intercept: f64, slope: f64 },
}

impl TimeCoefficient {
    pub fn constant(value: f64) -> Self {
        TimeCoefficient::Constant(value)
    }

    pub fn table(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(TimeCoefficient::Table(CubicSpline::new(times, values)?))
    }

    pub fn named(id: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        NamedProfile::parse(id, params).map(TimeCoefficient::Named)
    }

    pub fn cosine() -> Self {
        TimeCoefficient::Named(NamedProfile::Cosine {
            offset: 0.0,
            amplitude: 1.0,
            frequency: 1.0,
            phase: 0.0,
        })
    }

    pub fn pulsed() -> Self {
        TimeCoefficient::Named(NamedProfile::Pulsed { n_max: None })
    }

    pub fn double_exponential() -> Self {
        TimeCoefficient::Named(NamedProfile::DoubleExponential)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(invalid(format!("non-finite time {t}")));
        }
        match self {
            TimeCoefficient::Constant(c) => Ok(*c),
            TimeCoefficient::Table(s) => s.eval(t),
            TimeCoefficient::Named(p) => Ok(p.eval(t)),
        }
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        match self {
            TimeCoefficient::Constant(_) => Ok(0.0),
            TimeCoefficient::Table(s) => s.derivative(t),
            TimeCoefficient::Named(p) => Ok(p.derivative(t)),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, TimeCoefficient::Constant(_))
    }

    /// Sampled maximum of `|value|` over `[a, b]`.
    pub fn max_abs_on(&self, a: f64, b: f64, samples: usize) -> Result<f64> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let n = samples.max(2);
        let mut m: f64 = 0.0;
        for i in 0..n {
            let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            m = m.max(self.eval(t)?.abs());
        }
        Ok(m)
    }

    /// Sampled maximum over `[a, b]`.
    pub fn max_on(&self, a: f64, b: f64, samples: usize) -> Result<f64> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let n = samples.max(2);
        let mut m = f64::NEG_INFINITY;
        for i in 0..n {
            let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            m = m.max(self.eval(t)?);
        }
        Ok(m)
    }
}

fn param(params: &BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

impl NamedProfile {
    pub const IDS: [&'static str; 5] = ["pulsed", "double_exponential", "cosine", "bump", "linear"];

    fn parse(id: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed: &[&str] = match id {
            "pulsed" => &["n_max"],
            "double_exponential" => &[],
            "cosine" => &["offset", "amplitude", "frequency", "phase"],
            "bump" => &["amplitude", "start", "end"],
            "linear" => &["intercept", "slope"],
            other => {
                return Err(invalid(format!(
                    "unknown profile '{other}' (known: {})",
                    Self::IDS.join(", ")
                )))
            }
        };
        if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(invalid(format!("profile '{id}' has no parameter '{k}'")));
        }
        if let Some((k, _)) = params.iter().find(|(_, v)| !v.is_finite()) {
            return Err(invalid(format!("profile '{id}': parameter '{k}' is not finite")));
        }
        let p = match id {
            "pulsed" => {
                let n_max = match params.get("n_max") {
                    None => None,
                    Some(&v) if v >= 0.0 && v.fract() == 0.0 => Some(v as u32),
                    Some(&v) => return Err(invalid(format!("pulsed: n_max = {v} must be a non-negative integer"))),
                };
                NamedProfile::Pulsed { n_max }
            }
            "double_exponential" => NamedProfile::DoubleExponential,
            "cosine" => NamedProfile::Cosine {
                offset: param(params, "offset", 0.0),
                amplitude: param(params, "amplitude", 1.0),
                frequency: param(params, "frequency", 1.0),
                phase: param(params, "phase", 0.0),
            },
            "bump" => {
                let start = param(params, "start", 0.0);
                let end = param(params, "end", 1.0);
                if !(end > start) {
                    return Err(invalid("bump: end must exceed start"));
                }
                NamedProfile::Bump { amplitude: param(params, "amplitude", 1.0), start, end }
            }
            "linear" => NamedProfile::Linear {
                intercept: param(params, "intercept", 0.0),
                slope: param(params, "slope", 0.0),
            },
            _ => unreachable!(),
        };
        Ok(p)
    }

    fn id(&self) -> &'static str {
        match self {
            NamedProfile::Pulsed { .. } => "pulsed",
            NamedProfile::DoubleExponential => "double_exponential",
            NamedProfile::Cosine { .. } => "cosine",
            NamedProfile::Bump { .. } => "bump",
            NamedProfile::Linear { .. } => "linear",
        }
    }

    fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match *self {
            NamedProfile::Pulsed { n_max } => {
                if let Some(n) = n_max {
                    m.insert("n_max".into(), n as f64);
                }
            }
            NamedProfile::DoubleExponential => {}
            NamedProfile::Cosine { offset, amplitude, frequency, phase } => {
                m.insert("offset".into(), offset);
                m.insert("amplitude".into(), amplitude);
                m.insert("frequency".into(), frequency);
                m.insert("phase".into(), phase);
            }
            NamedProfile::Bump { amplitude, start, end } => {
                m.insert("amplitude".into(), amplitude);
                m.insert("start".into(), start);
                m.insert("end".into(), end);
            }
            NamedProfile::Linear { intercept, slope } => {
                m.insert("intercept".into(), intercept);
                m.insert("slope".into(), slope);
            }
        }
        m
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            NamedProfile::Pulsed { n_max } => pulsed(t, n_max).0,
            NamedProfile::DoubleExponential => double_exponential(t),
            NamedProfile::Cosine { offset, amplitude, frequency, phase } => {
                offset + amplitude * (frequency * t + phase).cos()
            }
            NamedProfile::Bump { amplitude, start, end } => {
                if t <= start || t >= end {
                    0.0
                } else {
                    amplitude * (PI * (t - start) / (end - start)).sin().powi(2)
                }
            }
            NamedProfile::Linear { intercept, slope } => intercept + slope * t,
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            NamedProfile::Pulsed { n_max } => pulsed(t, n_max).1,
            NamedProfile::DoubleExponential => {
                // five-point stencil; the closed form is unwieldy
                let h = 1e-3 * (1.0 + t.abs()).min(1.0);
                let f = double_exponential;
                (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)
            }
            NamedProfile::Cosine { amplitude, frequency, phase, .. } => {
                -amplitude * frequency * (frequency * t + phase).sin()
            }
            NamedProfile::Bump { amplitude, start, end } => {
                if t <= start || t >= end {
                    0.0
                } else {
                    let w = PI / (end - start);
                    amplitude * w * (2.0 * w * (t - start)).sin()
                }
            }
            NamedProfile::Linear { slope, .. } => slope,
        }
    }
}

/// Value and slope of the pulsed trap.
fn pulsed(t: f64, n_max: Option<u32>) -> (f64, f64) {
    if t <= 2.0 {
        return (0.0, 0.0);
    }
    let cap = n_max.map(|n| n as f64);
    let clamp = |v: f64, d: f64| match cap {
        Some(c) if v >= c * c => (c * c, 0.0),
        _ => (v, d),
    };
    // plateau n covers [4n+1, 4n+2]; ramp n runs over (4n+2, 4n+5)
    let n = ((t - 1.0) / 4.0).floor();
    let local = t - (4.0 * n + 1.0);
    if local <= 1.0 {
        clamp(n * n, 0.0)
    } else {
        let slope = ((n + 1.0) * (n + 1.0) - n * n) / 3.0;
        clamp(n * n + slope * (local - 1.0), slope)
    }
}

/// `Ω = −μ̈/μ` for `μ(t) = exp(1 − eᵗ) − exp(1 − e²ᵗ)`, written with `expm1`
/// so the removable singularity at `t = 0` (value 7) is harmless.
fn double_exponential(t: f64) -> f64 {
    if t == 0.0 {
        return 7.0;
    }
    let et = t.exp();
    let em1 = t.exp_m1();
    // μ = −a · expm1(−eᵗ(eᵗ − 1)),  μ̈ = eᵗ(eᵗ − 1)(a − 4eᵗ(eᵗ + 1) b)
    // with a = exp(1 − eᵗ), b = exp(1 − e²ᵗ), and b/a = exp(−eᵗ(eᵗ − 1))
    let b_over_a = (-et * em1).exp();
    let mu_over_a = -(-et * em1).exp_m1();
    -(et * em1) * (1.0 - 4.0 * et * (et + 1.0) * b_over_a) / mu_over_a
}

impl TryFrom<CoefficientSpec> for TimeCoefficient {
    type Error = Error;

    fn try_from(spec: CoefficientSpec) -> Result<Self> {
        match spec {
            CoefficientSpec::Constant(c) if c.is_finite() => Ok(TimeCoefficient::Constant(c)),
            CoefficientSpec::Constant(c) => Err(invalid(format!("constant {c} is not finite"))),
            CoefficientSpec::Table { times, values } => TimeCoefficient::table(times, values),
            CoefficientSpec::Profile { id, params } => TimeCoefficient::named(&id, &params),
        }
    }
}

impl From<TimeCoefficient> for CoefficientSpec {
    fn from(c: TimeCoefficient) -> Self {
        match c {
            TimeCoefficient::Constant(v) => CoefficientSpec::Constant(v),
            TimeCoefficient::Table(s) => CoefficientSpec::Table {
                times: s.knots().to_vec(),
                values: s.values().to_vec(),
            },
            TimeCoefficient::Named(p) => CoefficientSpec::Profile { id: p.id().to_string(), params: p.params() },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu_closed(t: f64) -> f64 {
        (1.0 - t.exp()).exp() - (1.0 - (2.0 * t).exp()).exp()
    }

    #[test]
    fn double_exponential_matches_second_derivative_of_mu() {
        // finite-difference oracle for -μ''/μ away from the t = 0 singularity
        for &t in &[0.3, 0.7, 1.0, 1.5, 2.0, -0.5] {
            let h = 1e-4;
            let mdd = (mu_closed(t + h) - 2.0 * mu_closed(t) + mu_closed(t - h)) / (h * h);
            let omega = -mdd / mu_closed(t);
            let got = double_exponential(t);
            assert!((got - omega).abs() < 1e-5 * (1.0 + omega.abs()), "t={t}: {got} vs {omega}");
        }
        // continuity through the removable singularity
        assert!((double_exponential(1e-9) - 7.0).abs() < 1e-6);
        assert!((double_exponential(-1e-9) - 7.0).abs() < 1e-6);
        // asymptotically repulsive like -e^{2t}
        let t = 6.0;
        assert!((double_exponential(t) / -(2.0 * t).exp() - 1.0).abs() < 0.01);
    }

    #[test]
    fn pulsed_plateaus_and_continuity() {
        let p = TimeCoefficient::pulsed();
        for n in 1..6 {
            let tn = 4.0 * n as f64 + 1.0;
            for &dt in &[0.0, 0.3, 1.0] {
                assert_eq!(p.eval(tn + dt).unwrap(), (n * n) as f64);
            }
        }
        assert_eq!(p.eval(0.5).unwrap(), 0.0);
        for i in 0..4000 {
            let t = i as f64 * 0.01;
            let jump = (p.eval(t + 1e-9).unwrap() - p.eval(t).unwrap()).abs();
            assert!(jump < 1e-6, "discontinuity at {t}");
        }
        let capped = TimeCoefficient::Named(NamedProfile::Pulsed { n_max: Some(2) });
        assert_eq!(capped.eval(40.0).unwrap(), 4.0);
    }

    #[test]
    fn evaluation_is_deterministic() {
        let p = TimeCoefficient::double_exponential();
        assert_eq!(p.eval(1.234).unwrap().to_bits(), p.eval(1.234).unwrap().to_bits());
    }

    #[test]
    fn serde_shapes() {
        let c: TimeCoefficient = serde_json::from_str(r#"{"constant": -1.0}"#).unwrap();
        assert_eq!(c, TimeCoefficient::Constant(-1.0));
        let p: TimeCoefficient =
            serde_json::from_str(r#"{"profile": {"id": "cosine", "params": {"amplitude": 2.0}}}"#).unwrap();
        assert!((p.eval(0.0).unwrap() - 2.0).abs() < 1e-15);
        let t: TimeCoefficient =
            serde_json::from_str(r#"{"table": {"times": [0, 1, 2, 3], "values": [0, 1, 4, 9]}}"#).unwrap();
        assert!((t.eval(1.5).unwrap() - 2.25).abs() < 1e-12);
        assert!(t.eval(3.5).is_err());
        let back = serde_json::to_string(&p).unwrap();
        let again: TimeCoefficient = serde_json::from_str(&back).unwrap();
        assert_eq!(again, p);
        assert!(serde_json::from_str::<TimeCoefficient>(r#"{"profile": {"id": "nope"}}"#).is_err());
        assert!(serde_json::from_str::<TimeCoefficient>(r#"{"profile": {"id": "cosine", "params": {"q": 1}}}"#).is_err());
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let profiles = [
            TimeCoefficient::cosine(),
            TimeCoefficient::Named(NamedProfile::Bump { amplitude: 2.0, start: 0.0, end: 3.0 }),
            TimeCoefficient::double_exponential(),
        ];
        for p in &profiles {
            for &t in &[0.4, 1.1, 2.3] {
                let h = 1e-5;
                let fd = (p.eval(t + h).unwrap() - p.eval(t - h).unwrap()) / (2.0 * h);
                let d = p.derivative(t).unwrap();
                assert!((fd - d).abs() < 1e-6 * (1.0 + d.abs()), "{p:?} at {t}: {d} vs {fd}");
            }
        }
    }
}
