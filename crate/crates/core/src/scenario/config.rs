use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coeff::TimeCoefficient;
use crate::error::{Error, Result};
use crate::field::Axis;
use crate::propagators::{AdaptiveStep, NonlinearitySpec, Scheme};

pub const SCHEMA_VERSION: u32 = 1;

/// Everything needed to reproduce one run. Serialized as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub d: usize,
    /// One entry per axis; checked by [`validate`](super::validate) rather than at parse time.
    pub grid: Vec<Axis>,
    pub potential: PotentialConfig,
    #[serde(default)]
    pub nonlinearity: NonlinearitySpec,
    pub initial: InitialState,
    pub time: TimeConfig,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default)]
    pub controls: RunControls,
    #[serde(default)]
    pub diagnostics: Vec<Check>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub omega: Vec<TimeCoefficient>,
    /// Linear field `E(t)`, one component per axis, or empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub field: Vec<TimeCoefficient>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    /// `amplitude · exp(−|x − center|²/(2 width²) + i momentum·x)`.
    Gaussian {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        center: Vec<f64>,
        #[serde(default = "one")]
        width: f64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        momentum: Vec<f64>,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// `scale^{−d/2} Q(x/scale)`; with `collapse`, the explicit blow-up
    /// solution collapsing at that time, evaluated at the start time.
    GroundStateScaled {
        #[serde(default = "one")]
        scale: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        collapse: Option<f64>,
    },
    /// Stationary state of the unit oscillator at chemical potential `omega`.
    StationaryState {
        omega: f64,
        #[serde(default = "stationary_tol")]
        tol: f64,
    },
    SnapshotFile { path: PathBuf },
}

fn one() -> f64 {
    1.0
}

fn stationary_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default)]
    pub s: f64,
    pub t_end: f64,
    pub dt: f64,
    #[serde(default = "default_stride")]
    pub stride: usize,
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunControls {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_mass_cap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient_cap: Option<f64>,
    /// Gradient cap as a multiple of the initial `‖∇u‖`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient_cap_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adaptive: Option<AdaptiveStep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Number of evenly spread snapshots written as `.wfld` (first and last included).
    #[serde(default = "default_snapshot_files")]
    pub snapshot_files: usize,
}

fn default_snapshot_files() -> usize {
    11
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { snapshot_files: default_snapshot_files() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthQuantity {
    /// `‖u‖_{H^k}`.
    Sobolev,
    /// `Σ_{|α|≤k} ‖x^α u‖`.
    Momentum,
}

/// A requested law or measurement. Tolerances default to the values the
/// builtins are calibrated against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum Check {
    Mass {
        #[serde(default = "tol_mass")]
        tol: f64,
    },
    EnergyLaw {
        #[serde(default = "tol_energy")]
        tol: f64,
    },
    Virial {
        #[serde(default = "tol_virial")]
        tol: f64,
    },
    AbLaws {
        /// Relative drift allowed when the brackets are conserved.
        #[serde(default = "tol_drift")]
        drift_tol: f64,
        /// Largest law residual relative to the bracket size.
        #[serde(default = "tol_law")]
        law_tol: f64,
    },
    PseudoConformal {
        #[serde(default = "tol_law")]
        law_tol: f64,
    },
    Growth {
        quantity: GrowthQuantity,
        k: u32,
        /// Expected rate (exponential) or exponent (algebraic); derived from
        /// the trap when omitted and the regime is known.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected: Option<f64>,
        #[serde(default = "tol_growth")]
        rel_tol: f64,
    },
    MixedNorm { p: f64, q: f64 },
    BlowupRate {
        #[serde(default = "tol_growth_blowup")]
        rel_tol: f64,
        #[serde(default = "default_factor")]
        factor: f64,
    },
    Stationary {
        #[serde(default = "tol_stationary")]
        tol: f64,
    },
    Lens {
        #[serde(default = "tol_lens")]
        tol: f64,
        /// Step for both frames; the run's `dt` when omitted.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dt: Option<f64>,
    },
    AvronHerbst {
        #[serde(default = "tol_lens")]
        tol: f64,
    },
}

fn tol_mass() -> f64 {
    1e-11
}
fn tol_energy() -> f64 {
    1e-4
}
fn tol_virial() -> f64 {
    1e-3
}
fn tol_drift() -> f64 {
    1e-6
}
fn tol_law() -> f64 {
    1e-3
}
fn tol_growth() -> f64 {
    0.1
}
fn tol_growth_blowup() -> f64 {
    0.05
}
fn default_factor() -> f64 {
    50.0
}
fn tol_stationary() -> f64 {
    1e-6
}
fn tol_lens() -> f64 {
    1e-4
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Mass { .. } => "mass",
            Check::EnergyLaw { .. } => "energy_law",
            Check::Virial { .. } => "virial",
            Check::AbLaws { .. } => "ab_laws",
            Check::PseudoConformal { .. } => "pseudo_conformal",
            Check::Growth { .. } => "growth",
            Check::MixedNorm { .. } => "mixed_norm",
            Check::BlowupRate { .. } => "blowup_rate",
            Check::Stationary { .. } => "stationary",
            Check::Lens { .. } => "lens",
            Check::AvronHerbst { .. } => "avron_herbst",
        }
    }

    pub fn mass() -> Self {
        Check::Mass { tol: tol_mass() }
    }
    pub fn energy_law() -> Self {
        Check::EnergyLaw { tol: tol_energy() }
    }
    pub fn virial() -> Self {
        Check::Virial { tol: tol_virial() }
    }
    pub fn ab_laws() -> Self {
        Check::AbLaws { drift_tol: tol_drift(), law_tol: tol_law() }
    }
    pub fn growth(quantity: GrowthQuantity, k: u32) -> Self {
        Check::Growth { quantity, k, expected: None, rel_tol: tol_growth() }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.version != SCHEMA_VERSION {
            return Err(Error::Config(format!("schema version {} not supported (expected {SCHEMA_VERSION})", cfg.version)));
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_value(&self) -> Result<Value> {
        Ok(serde_json::to_value(self)?)
    }

    pub fn from_value(v: Value) -> Result<Self> {
        Self::from_json(&v.to_string())
    }

    /// Applies `key=value` overrides, each a dotted path into the JSON form.
    pub fn with_overrides<'a>(&self, overrides: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut v = self.to_value()?;
        for (k, raw) in overrides {
            set_path(&mut v, k, parse_scalar(raw))?;
        }
        Self::from_value(v)
    }

    /// Same `N` and `L` on every axis.
    pub fn with_uniform_grid(mut self, n: usize, half_width: f64) -> Self {
        self.grid = vec![Axis { n, half_width }; self.d];
        self
    }
}

/// JSON if it parses, otherwise a bare string.
pub fn parse_scalar(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// Sets `root.a.b.0.c = value`, creating missing object keys.
pub fn set_path(root: &mut Value, path: &str, value: Value) -> Result<()> {
    if path.is_empty() {
        return Err(Error::Config("empty override key".into()));
    }
    let parts: Vec<&str> = path.split('.').collect();
    let mut cur = root;
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        cur = match cur {
            Value::Object(map) => {
                if last {
                    map.insert(part.to_string(), value);
                    return Ok(());
                }
                map.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let idx: usize = part
                    .parse()
                    .map_err(|_| Error::Config(format!("{path}: '{part}' is not an array index")))?;
                let len = items.len();
                let slot = items
                    .get_mut(idx)
                    .ok_or_else(|| Error::Config(format!("{path}: index {idx} out of range (length {len})")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(Error::Config(format!("{path}: '{part}' descends into a scalar"))),
        };
    }
    unreachable!("loop returns on the last segment")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn dotted_paths() {
        let mut v = json!({"time": {"dt": 0.1}, "grid": [{"n": 64, "half_width": 8.0}]});
        set_path(&mut v, "time.dt", parse_scalar("0.01")).unwrap();
        set_path(&mut v, "grid.0.n", parse_scalar("128")).unwrap();
        set_path(&mut v, "nonlinearity.lambda", parse_scalar("-1")).unwrap();
        set_path(&mut v, "name", parse_scalar("abc")).unwrap();
        assert_eq!(v["time"]["dt"], json!(0.01));
        assert_eq!(v["grid"][0]["n"], json!(128));
        assert_eq!(v["nonlinearity"]["lambda"], json!(-1));
        assert_eq!(v["name"], json!("abc"));
        assert!(set_path(&mut v, "grid.3.n", json!(1)).is_err());
        assert!(set_path(&mut v, "time.dt.x", json!(1)).is_err());
    }

    #[test]
    fn check_tags() {
        let c: Check = serde_json::from_str(r#"{"check":"growth","quantity":"sobolev","k":2}"#).unwrap();
        assert_eq!(c, Check::growth(GrowthQuantity::Sobolev, 2));
        let e: Check = serde_json::from_str(r#"{"check":"energy_law"}"#).unwrap();
        assert_eq!(e, Check::energy_law());
        assert!(serde_json::from_str::<Check>(r#"{"check":"mass","tolerance":1}"#).is_err());
    }
}
