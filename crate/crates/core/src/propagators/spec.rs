use serde::{Deserialize, Serialize};

use crate::coeff::TimeCoefficient;
use crate::error::{invalid, Result};

/// `λ|u|^{2σ}u`, or `h(t)|u|^{2σ}u` when `h` is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearitySpec {
    #[serde(default)]
    pub lambda: f64,
    #[serde(default = "default_sigma")]
    pub sigma: u32,
    /// Time-dependent coupling; replaces `lambda`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<TimeCoefficient>,
    /// Coupling in the autonomous lens frame.
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "big_h")]
    pub big_h: Option<TimeCoefficient>,
}

fn default_sigma() -> u32 {
    1
}

impl Default for NonlinearitySpec {
    fn default() -> Self {
        Self::linear()
    }
}

impl NonlinearitySpec {
    pub fn linear() -> Self {
        Self { lambda: 0.0, sigma: 1, h: None, big_h: None }
    }

    pub fn cubic(lambda: f64) -> Self {
        Self { lambda, sigma: 1, h: None, big_h: None }
    }

    pub fn power(lambda: f64, sigma: u32) -> Self {
        Self { lambda, sigma, h: None, big_h: None }
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        if !(1..=2).contains(&self.sigma) {
            return Err(invalid(format!("sigma must be 1 or 2, got {}", self.sigma)));
        }
        if d == 3 && self.sigma != 1 {
            return Err(invalid("sigma must be 1 in three dimensions"));
        }
        if !self.lambda.is_finite() {
            return Err(invalid("lambda is not finite"));
        }
        if self.h.is_some() && self.lambda != 0.0 {
            return Err(invalid("give either lambda or h, not both"));
        }
        Ok(())
    }

    pub fn is_linear(&self) -> bool {
        self.h.is_none() && self.lambda == 0.0
    }

    /// Active coupling at time `t`.
    pub fn coupling(&self, t: f64) -> Result<f64> {
        match &self.h {
            Some(h) => h.eval(t),
            None => Ok(self.lambda),
        }
    }

    pub fn coupling_derivative(&self, t: f64) -> Result<f64> {
        match &self.h {
            Some(h) => h.derivative(t),
            None => Ok(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    MehlerLinear,
    #[default]
    Strang,
}

/// Optional step shortening so the nonlinear phase per step stays below `phase_cap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveStep {
    pub phase_cap: f64,
    #[serde(default)]
    pub min_dt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepControls {
    pub dt: f64,
    #[serde(default = "default_stride")]
    pub snapshot_stride: usize,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default = "default_cap")]
    pub boundary_mass_cap: f64,
    /// Stop (without error) once `‖∇u‖` exceeds this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient_cap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adaptive: Option<AdaptiveStep>,
    /// Keep every strided field in the returned trace.
    #[serde(default = "default_keep")]
    pub keep_snapshots: bool,
}

fn default_stride() -> usize {
    1
}

fn default_cap() -> f64 {
    1e-6
}

fn default_keep() -> bool {
    true
}

impl StepControls {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            snapshot_stride: 1,
            scheme: Scheme::Strang,
            boundary_mass_cap: default_cap(),
            gradient_cap: None,
            adaptive: None,
            keep_snapshots: true,
        }
    }

    pub fn stride(mut self, stride: usize) -> Self {
        self.snapshot_stride = stride;
        self
    }

    pub fn boundary_cap(mut self, cap: f64) -> Self {
        self.boundary_mass_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if self.snapshot_stride == 0 {
            return Err(invalid("snapshot_stride must be at least 1"));
        }
        if !(self.boundary_mass_cap > 0.0) {
            return Err(invalid("boundary_mass_cap must be positive"));
        }
        if let Some(a) = self.adaptive {
            if !(a.phase_cap > 0.0) {
                return Err(invalid("adaptive phase_cap must be positive"));
            }
        }
        Ok(())
    }
}
