//! Scenario orchestration for the Boussinesq laboratory.
//!
//! A scenario is one strict JSON document ([`ScenarioConfig`]). [`run_scenario`] builds the
//! data, runs the stationary and evolution solvers and the Gevrey diagnostics, and writes a
//! directory of artifacts whose formats are listed in `docs/FORMATS.md`. Each check becomes
//! a `PASS`, `FAIL` or `RECORDED` line in `summary.txt`.

pub mod artifacts;
pub mod config;
pub mod scenario;

pub use config::{
    echo, effective_seed, parse_config, resolve_output_dir, validate, validate_config, ConfigError, EvolutionConfig,
    ForceSet, Preset, Scenario, ScenarioConfig, OUTPUT_DIR_ENV,
};
pub use scenario::{run_scenario, CheckLine, RunError, RunOutcome, Status};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG_ERROR: i32 = 2;
    pub const NUMERICAL_FAILURE: i32 = 3;
}
