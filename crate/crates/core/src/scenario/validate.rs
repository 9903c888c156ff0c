use std::f64::consts::PI;

use serde::Serialize;

use super::config::{Check, InitialState, ScenarioConfig};
use crate::coeff::TimeCoefficient;
use crate::error::{Error, Result};
use crate::field::{Grid, MAX_SOBOLEV_ORDER};
use crate::propagators::Scheme;

/// Static findings on a config. `errors` block a run; `flags` classify it.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
    pub flags: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }

    pub fn into_result(self) -> Result<Self> {
        if self.errors.is_empty() {
            Ok(self)
        } else {
            Err(Error::Config(self.errors.join("; ")))
        }
    }
}

fn isotropic(omega: &[TimeCoefficient]) -> bool {
    omega.windows(2).all(|w| w[0] == w[1])
}

fn identically(w: &TimeCoefficient, value: f64) -> bool {
    w.is_constant() && w.eval(0.0).ok() == Some(value)
}

/// Checks a config without running anything.
pub fn validate(cfg: &ScenarioConfig) -> ValidationReport {
    let mut r = ValidationReport::default();
    let d = cfg.d;
    let err = |r: &mut ValidationReport, m: String| r.errors.push(m);

    if !(1..=3).contains(&d) {
        err(&mut r, format!("d = {d} must be 1, 2 or 3"));
        return r;
    }

    let grid = if cfg.grid.len() != d {
        err(&mut r, format!("grid has {} axes for d = {d}", cfg.grid.len()));
        None
    } else {
        match Grid::new(cfg.grid.clone()) {
            Ok(g) => Some(g),
            Err(e) => {
                err(&mut r, format!("grid: {e}"));
                None
            }
        }
    };

    let omega = &cfg.potential.omega;
    let field = &cfg.potential.field;
    if omega.len() != d {
        err(&mut r, format!("potential.omega has {} entries for d = {d}", omega.len()));
    }
    if !field.is_empty() && field.len() != d {
        err(&mut r, format!("potential.field has {} entries for d = {d}", field.len()));
    }

    // regime
    let nl = &cfg.nonlinearity;
    let sigma = nl.sigma;
    let linear = nl.is_linear();
    if sigma == 0 {
        err(&mut r, "nonlinearity.sigma must be at least 1".into());
    } else if d >= 3 && sigma * (d as u32 - 2) >= 2 {
        err(&mut r, format!("sigma = {sigma} is energy-supercritical in d = {d} (need sigma < 2/(d-2))"));
    } else if let Err(e) = nl.validate(d) {
        err(&mut r, format!("nonlinearity: {e}"));
    }
    if !linear && sigma >= 1 {
        let ds = d as u32 * sigma;
        r.flags.push(
            match ds.cmp(&2) {
                std::cmp::Ordering::Less => "L2-subcritical",
                std::cmp::Ordering::Equal => "L2-critical",
                std::cmp::Ordering::Greater => "L2-supercritical",
            }
            .into(),
        );
        if nl.h.is_none() {
            r.flags.push(if nl.lambda < 0.0 { "focusing" } else { "defocusing" }.into());
        }
    } else {
        r.flags.push("linear".into());
    }
    if nl.big_h.is_some() && !cfg.diagnostics.iter().any(|c| matches!(c, Check::Lens { .. })) {
        r.warnings.push("nonlinearity.big_h is only used by the lens check".into());
    }

    // time
    let t = cfg.time;
    if !(t.dt > 0.0) || !t.dt.is_finite() {
        err(&mut r, format!("time.dt = {} must be positive", t.dt));
    }
    if !t.s.is_finite() || !t.t_end.is_finite() {
        err(&mut r, "time.s and time.t_end must be finite".into());
    } else if t.s == t.t_end {
        err(&mut r, "time.t_end equals time.s".into());
    }
    if t.stride == 0 {
        err(&mut r, "time.stride must be at least 1".into());
    }
    let (lo, hi) = (t.s.min(t.t_end), t.s.max(t.t_end));
    for (j, w) in omega.iter().chain(field.iter()).enumerate() {
        if let Err(e) = w.eval(lo).and_then(|_| w.eval(hi)) {
            err(&mut r, format!("coefficient {j} not defined on [{lo}, {hi}]: {e}"));
        }
    }
    if let Some(c) = cfg.controls.gradient_cap_factor {
        if !(c > 1.0) {
            err(&mut r, format!("controls.gradient_cap_factor = {c} must exceed 1"));
        }
    }
    if let Some(c) = cfg.controls.boundary_mass_cap {
        if !(c > 0.0) {
            err(&mut r, format!("controls.boundary_mass_cap = {c} must be positive"));
        }
    }
    if cfg.controls.adaptive.is_some() && cfg.scheme == Scheme::MehlerLinear {
        r.warnings.push("controls.adaptive has no effect with the mehler_linear scheme".into());
    }
    let samples = if t.dt > 0.0 && t.stride > 0 {
        ((t.t_end - t.s).abs() / t.dt).ceil() as usize / t.stride + 1
    } else {
        0
    };
    let spacing = t.dt * t.stride as f64;

    if cfg.scheme == Scheme::MehlerLinear {
        if !linear {
            err(&mut r, "the mehler_linear scheme needs a linear equation".into());
        }
        if !field.is_empty() {
            err(&mut r, "the mehler_linear scheme does not take a linear field".into());
        }
    }

    // initial state
    match &cfg.initial {
        InitialState::Gaussian { center, width, momentum, amplitude } => {
            if !center.is_empty() && center.len() != d {
                err(&mut r, format!("initial.center has {} entries for d = {d}", center.len()));
            }
            if !momentum.is_empty() && momentum.len() != d {
                err(&mut r, format!("initial.momentum has {} entries for d = {d}", momentum.len()));
            }
            if !(*width > 0.0) {
                err(&mut r, format!("initial.width = {width} must be positive"));
            }
            if !amplitude.is_finite() {
                err(&mut r, "initial.amplitude must be finite".into());
            }
            if let Some(g) = &grid {
                for j in 0..d {
                    let p = momentum.get(j).copied().unwrap_or(0.0).abs();
                    if p + 8.0 / width > g.k_max(j) {
                        r.warnings.push(format!("axis {j}: initial spectrum reaches past k_max = {:.3}", g.k_max(j)));
                    }
                    let c = center.get(j).copied().unwrap_or(0.0).abs();
                    if c + 6.0 * width > 0.9 * g.half_width(j) {
                        r.warnings.push(format!("axis {j}: initial datum reaches the boundary shell"));
                    }
                }
            }
        }
        InitialState::GroundStateScaled { scale, collapse } => {
            if !(*scale > 0.0) {
                err(&mut r, format!("initial.scale = {scale} must be positive"));
            }
            if collapse.is_some() {
                if !isotropic(omega) {
                    err(&mut r, "a collapsing ground state needs an isotropic trap".into());
                }
                if !field.is_empty() {
                    err(&mut r, "a collapsing ground state does not take a linear field".into());
                }
                if collapse == &Some(t.s) {
                    err(&mut r, "initial.collapse coincides with time.s".into());
                }
            }
            if d as u32 * sigma != 2 || nl.h.is_some() || nl.lambda != -1.0 {
                r.warnings.push("the ground-state family solves the equation only for lambda = -1, sigma = 2/d".into());
            }
        }
        InitialState::StationaryState { omega: w, tol } => {
            if !omega.iter().all(|o| identically(o, 1.0)) || !field.is_empty() {
                err(&mut r, "stationary states are defined for the unit oscillator without a field".into());
            }
            if nl.h.is_some() {
                err(&mut r, "stationary states need a constant coupling".into());
            }
            let half = d as f64 / 2.0;
            let lam = nl.lambda;
            if lam > 0.0 && !(*w > half) || lam < 0.0 && !(*w < half) || lam == 0.0 && *w != half {
                err(&mut r, format!("initial.omega = {w} outside the regime for lambda = {lam} (lowest level {half})"));
            }
            if !(*tol > 0.0) {
                err(&mut r, "initial.tol must be positive".into());
            }
        }
        InitialState::SnapshotFile { path } => {
            if !path.is_file() {
                err(&mut r, format!("initial snapshot {} does not exist", path.display()));
            }
        }
    }

    // requested checks
    for c in &cfg.diagnostics {
        let name = c.name();
        match c {
            Check::Lens { dt, .. } => {
                if !isotropic(omega) {
                    err(&mut r, "lens check requested but the trap is anisotropic (the lens transform needs one pair for all axes)".into());
                }
                if !field.is_empty() {
                    err(&mut r, "lens check does not take a linear field".into());
                }
                if t.t_end <= t.s {
                    err(&mut r, "lens check runs forward in time only".into());
                }
                if dt.is_some_and(|v| !(v > 0.0)) {
                    err(&mut r, "lens dt must be positive".into());
                }
            }
            Check::AbLaws { .. } => {
                if !isotropic(omega) {
                    err(&mut r, "ab_laws check needs an isotropic trap".into());
                }
                if !field.is_empty() {
                    err(&mut r, "ab_laws check does not hold with a linear field".into());
                }
            }
            Check::PseudoConformal { .. } => {
                if !omega.iter().all(|o| identically(o, 0.0)) || !field.is_empty() {
                    err(&mut r, "pseudo_conformal check needs a zero potential".into());
                }
            }
            Check::AvronHerbst { .. } => {
                if field.is_empty() {
                    err(&mut r, "avron_herbst check needs a linear field".into());
                }
                if t.s != 0.0 {
                    err(&mut r, "avron_herbst check needs time.s = 0".into());
                }
            }
            Check::Stationary { .. } => {
                if !matches!(cfg.initial, InitialState::StationaryState { .. }) {
                    err(&mut r, "stationary check needs a stationary_state initial datum".into());
                }
            }
            Check::BlowupRate { factor, .. } => {
                if !matches!(cfg.initial, InitialState::GroundStateScaled { collapse: Some(_), .. }) {
                    err(&mut r, "blowup_rate check needs a ground_state_scaled datum with a collapse time".into());
                }
                if !(*factor > 1.0) {
                    err(&mut r, "blowup_rate factor must exceed 1".into());
                }
            }
            Check::Growth { k, .. } => {
                if *k > MAX_SOBOLEV_ORDER {
                    err(&mut r, format!("growth order k = {k} above {MAX_SOBOLEV_ORDER}"));
                }
            }
            Check::MixedNorm { p, q } => {
                if !(*p >= 1.0) || !(*q >= 1.0) {
                    err(&mut r, format!("mixed_norm exponents p = {p}, q = {q} must be at least 1"));
                } else if !crate::diagnostics::admissible(*p, *q, d) {
                    r.warnings.push(format!("mixed_norm pair (p, q) = ({p}, {q}) is not admissible in d = {d}"));
                }
            }
            Check::EnergyLaw { .. } | Check::Virial { .. } => {
                let need = if matches!(c, Check::Virial { .. }) { 5 } else { 3 };
                if samples < need && t.stride > 0 && t.dt > 0.0 {
                    err(&mut r, format!("{name} check needs at least {need} snapshots, the run records {samples}"));
                }
                if spacing > 0.05 {
                    r.warnings.push(format!("{name}: snapshot spacing {spacing} above 0.05 limits the finite-difference accuracy"));
                }
            }
            Check::Mass { .. } => {}
        }
    }

    // phase-space resolution: a state held in [−L, L] by Ω carries momenta up to √|Ω| L
    if let Some(g) = &grid {
        if omega.len() == d {
            for (j, w) in omega.iter().enumerate() {
                if let Ok(m) = w.max_abs_on(lo, hi, 256) {
                    let need = m.sqrt() * g.half_width(j);
                    let have = PI / g.spacing(j);
                    if need > have {
                        r.flags.push("nyquist".into());
                        r.warnings.push(format!(
                            "axis {j}: sqrt(max|omega|)·L = {need:.3} exceeds k_max = {have:.3}; refine N_{j} or shrink L_{j}"
                        ));
                    }
                }
            }
        }
    }
    r.flags.dedup();
    r
}
