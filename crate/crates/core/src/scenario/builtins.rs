//! Named scenarios at their default resolutions.

use super::config::{
    Check, GrowthQuantity, InitialState, OutputConfig, PotentialConfig, RunControls, ScenarioConfig, TimeConfig,
    SCHEMA_VERSION,
};
use crate::coeff::TimeCoefficient;
use crate::field::Axis;
use crate::propagators::{AdaptiveStep, NonlinearitySpec, Scheme};

pub const BUILTIN_NAMES: [&str; 10] = [
    "free",
    "harmonic",
    "repulsive_defocusing",
    "bounded_oscillating",
    "pulsed",
    "double_exponential",
    "blowup_critical",
    "stationary_periodic",
    "avron_herbst_demo",
    "lens_roundtrip",
];

/// One-line summaries in registry order.
pub fn builtin_summaries() -> Vec<(&'static str, String)> {
    BUILTIN_NAMES.iter().map(|&n| (n, builtin(n).expect("registered").description)).collect()
}

fn gaussian(width: f64) -> InitialState {
    InitialState::Gaussian { center: Vec::new(), width, momentum: Vec::new(), amplitude: 1.0 }
}

fn base(name: &str, description: &str, n: usize, half_width: f64, omega: TimeCoefficient, nl: NonlinearitySpec) -> ScenarioConfig {
    ScenarioConfig {
        version: SCHEMA_VERSION,
        name: name.into(),
        description: description.into(),
        d: 1,
        grid: vec![Axis { n, half_width }],
        potential: PotentialConfig { omega: vec![omega], field: Vec::new() },
        nonlinearity: nl,
        initial: gaussian(1.0),
        time: TimeConfig { s: 0.0, t_end: 1.0, dt: 1e-3, stride: 10 },
        scheme: Scheme::Strang,
        controls: RunControls::default(),
        diagnostics: vec![Check::mass()],
        output: OutputConfig::default(),
    }
}

/// Looks up a builtin; `harmonic_linear` is accepted for `harmonic`.
pub fn builtin(name: &str) -> Option<ScenarioConfig> {
    let c = TimeCoefficient::constant;
    let cfg = match name {
        "free" => {
            let mut s = base("free", "free linear flow; momenta grow like t^k", 4096, 160.0, c(0.0), NonlinearitySpec::linear());
            s.time = TimeConfig { s: 0.0, t_end: 20.0, dt: 0.05, stride: 1 };
            s.diagnostics.extend([
                Check::energy_law(),
                Check::virial(),
                Check::PseudoConformal { law_tol: 1e-3 },
                Check::growth(GrowthQuantity::Momentum, 1),
            ]);
            s
        }
        "harmonic" | "harmonic_linear" => {
            let mut s = base("harmonic", "linear oscillator, displaced Gaussian over one period", 256, 16.0, c(1.0), NonlinearitySpec::linear());
            s.initial = InitialState::Gaussian { center: vec![1.0], width: 1.0, momentum: Vec::new(), amplitude: 1.0 };
            s.time = TimeConfig { s: 0.0, t_end: 2.0 * std::f64::consts::PI, dt: 1e-3, stride: 50 };
            s.diagnostics.extend([Check::energy_law(), Check::virial(), Check::ab_laws()]);
            s
        }
        "repulsive_defocusing" => {
            let mut s = base(
                "repulsive_defocusing",
                "inverted oscillator with defocusing cubic term; exponential Sobolev growth",
                8192,
                80.0,
                c(-1.0),
                NonlinearitySpec::cubic(1.0),
            );
            s.time = TimeConfig { s: 0.0, t_end: 3.0, dt: 1e-3, stride: 20 };
            s.diagnostics.extend([
                Check::energy_law(),
                Check::virial(),
                Check::ab_laws(),
                Check::growth(GrowthQuantity::Sobolev, 1),
            ]);
            s
        }
        "bounded_oscillating" => {
            let mut s = base(
                "bounded_oscillating",
                "trap cos t with defocusing cubic term",
                1024,
                32.0,
                TimeCoefficient::cosine(),
                NonlinearitySpec::cubic(1.0),
            );
            s.time = TimeConfig { s: 0.0, t_end: 3.0, dt: 1e-3, stride: 10 };
            s.diagnostics.extend([Check::energy_law(), Check::virial(), Check::ab_laws()]);
            s
        }
        "pulsed" => {
            // plateau n = 1 of the pulsed trap; e^{-n x²/2} is stationary there
            let mut s = base("pulsed", "pulsed trap, first plateau; space-time norm of the exact Gaussian", 256, 8.0, TimeCoefficient::pulsed(), NonlinearitySpec::linear());
            s.time = TimeConfig { s: 5.0, t_end: 6.0, dt: 1e-3, stride: 10 };
            s.diagnostics.extend([Check::MixedNorm { p: 8.0, q: 4.0 }, Check::energy_law()]);
            s
        }
        "double_exponential" => {
            let mut s = base(
                "double_exponential",
                "trap generated by the double-exponential pair; dispersion stalls",
                2048,
                24.0,
                TimeCoefficient::double_exponential(),
                NonlinearitySpec::linear(),
            );
            s.time = TimeConfig { s: 0.0, t_end: 1.0, dt: 2.5e-4, stride: 40 };
            s.diagnostics.extend([Check::energy_law(), Check::virial(), Check::ab_laws()]);
            s
        }
        "blowup_critical" => {
            let mut s = base(
                "blowup_critical",
                "explicit critical blow-up under the trap cos t, evolved back towards the collapse",
                8192,
                6.0,
                TimeCoefficient::cosine(),
                NonlinearitySpec::power(-1.0, 2),
            );
            s.initial = InitialState::GroundStateScaled { scale: 1.0, collapse: Some(0.0) };
            s.time = TimeConfig { s: 1.0, t_end: 0.0, dt: 1e-3, stride: 100 };
            s.controls = RunControls {
                gradient_cap_factor: Some(50.0),
                adaptive: Some(AdaptiveStep { phase_cap: 0.0025, min_dt: 1e-9 }),
                ..RunControls::default()
            };
            s.diagnostics = vec![Check::Mass { tol: 1e-10 }, Check::BlowupRate { rel_tol: 0.05, factor: 50.0 }];
            s
        }
        "stationary_periodic" => {
            let mut s = base(
                "stationary_periodic",
                "nonlinear stationary state of the unit oscillator; the modulus stays put",
                128,
                8.0,
                c(1.0),
                NonlinearitySpec::cubic(1.0),
            );
            s.initial = InitialState::StationaryState { omega: 0.9, tol: 1e-10 };
            s.time = TimeConfig { s: 0.0, t_end: 5.0, dt: 5e-4, stride: 100 };
            s.diagnostics.extend([Check::Stationary { tol: 1e-6 }, Check::energy_law()]);
            s
        }
        "avron_herbst_demo" => {
            let mut s = base(
                "avron_herbst_demo",
                "free cubic equation in the field cos t, compared with the moving-frame transport",
                512,
                24.0,
                c(0.0),
                NonlinearitySpec::cubic(1.0),
            );
            s.potential.field = vec![TimeCoefficient::cosine()];
            s.time = TimeConfig { s: 0.0, t_end: 2.0, dt: 1e-3, stride: 10 };
            s.diagnostics.extend([Check::energy_law(), Check::virial(), Check::AvronHerbst { tol: 1e-4 }]);
            s
        }
        "lens_roundtrip" => {
            let mut s = base(
                "lens_roundtrip",
                "critical quintic in the unit oscillator against the lens-transformed free solution",
                256,
                12.0,
                c(1.0),
                NonlinearitySpec::power(1.0, 2),
            );
            s.time = TimeConfig { s: 0.0, t_end: 0.5, dt: 1e-4, stride: 50 };
            s.diagnostics.extend([Check::ab_laws(), Check::Lens { tol: 1e-4, dt: None }]);
            s
        }
        _ => return None,
    };
    Some(cfg)
}
