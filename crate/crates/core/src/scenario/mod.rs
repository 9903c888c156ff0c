//! Scenario configs, the builtin registry, single runs and parameter sweeps.

mod builtins;
mod config;
mod run;
mod sweep;
mod validate;

pub use builtins::{builtin, builtin_summaries, BUILTIN_NAMES};
pub use config::{
    parse_scalar, set_path, Check, GrowthQuantity, InitialState, OutputConfig, PotentialConfig, RunControls,
    ScenarioConfig, TimeConfig, SCHEMA_VERSION,
};
pub use run::{check_label, run, run_in_memory, CheckResult, RunReport, RunStatus};
pub use sweep::{sweep, SweepGrid, SweepParam, SweepRow, SweepTable};
pub use validate::{validate, ValidationReport};
