//! Scenario configuration: a strict JSON document, validated and default-filled.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use forcing_factory::ForceSpec;
use serde::{Deserialize, Serialize};
use spectral_core::BoxSpec;
use stationary_solver::StationaryConfig;

/// Environment variable that overrides `output_dir` (the `--out` flag still wins).
pub const OUTPUT_DIR_ENV: &str = "BOUSS_OUTPUT_DIR";

/// Amplitude given to default-filled forces.
pub const DEFAULT_AMPLITUDE: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Nonhomogeneous,
    Homogeneous,
    NavierStokes,
    LiouvilleDecay,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Nonhomogeneous => "nonhomogeneous",
            Scenario::Homogeneous => "homogeneous",
            Scenario::NavierStokes => "navier-stokes",
            Scenario::LiouvilleDecay => "liouville-decay",
        }
    }

    /// Which of `(f, g, gvec, initial_u, initial_theta)` the scenario reads.
    fn uses(self) -> [bool; 5] {
        match self {
            Scenario::Nonhomogeneous => [true, true, true, false, false],
            Scenario::Homogeneous => [false, false, true, false, false],
            Scenario::NavierStokes => [true, false, false, false, false],
            Scenario::LiouvilleDecay => [false, false, true, true, true],
        }
    }
}

/// Box presets selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `N = 32`, `L = 2π·16`.
    Desk,
    /// `N = 64`, `L = 2π·16`.
    Heavy,
}

impl Preset {
    pub fn box_spec(self) -> BoxSpec {
        let n = match self {
            Preset::Desk => 32,
            Preset::Heavy => 64,
        };
        BoxSpec::new(32.0 * PI, n).expect("preset boxes are valid")
    }
}

/// Force and initial-state specifications. After validation exactly the
/// entries the scenario reads are present.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceSet {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<ForceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<ForceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gvec: Option<ForceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_u: Option<ForceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_theta: Option<ForceSpec>,
}

const FORCE_NAMES: [&str; 5] = ["f", "g", "gvec", "initial_u", "initial_theta"];

impl ForceSet {
    fn slots(&mut self) -> [&mut Option<ForceSpec>; 5] {
        [&mut self.f, &mut self.g, &mut self.gvec, &mut self.initial_u, &mut self.initial_theta]
    }
}

/// Evolution settings. `t_final`, `dt` and `record_every` drive the Liouville run only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    /// Picard time steps `M` on `[0, T]`.
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(rename = "calibration_C", default = "default_c")]
    pub calibration_c: f64,
    #[serde(default = "default_picard_tol")]
    pub picard_tol: f64,
    #[serde(default = "default_picard_iters")]
    pub max_picard_iters: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
}

fn default_steps() -> usize {
    64
}
fn default_c() -> f64 {
    1.0
}
fn default_picard_tol() -> f64 {
    1e-10
}
fn default_picard_iters() -> usize {
    200
}
fn default_record_every() -> usize {
    10
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            steps: default_steps(),
            calibration_c: default_c(),
            picard_tol: default_picard_tol(),
            max_picard_iters: default_picard_iters(),
            t_final: None,
            dt: None,
            record_every: default_record_every(),
        }
    }
}

/// A validated scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(rename = "box", default = "default_box")]
    pub box_spec: BoxSpec,
    #[serde(default)]
    pub forces: ForceSet,
    #[serde(default = "default_r")]
    pub gevrey_r: f64,
    #[serde(default)]
    pub stationary: StationaryConfig,
    #[serde(default)]
    pub evolution: EvolutionConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn default_box() -> BoxSpec {
    Preset::Desk.box_spec()
}
fn default_r() -> f64 {
    1.0
}

/// Validation failure, naming the offending field where there is one.
#[derive(Clone, Debug, PartialEq)]
pub enum ConfigError {
    /// Malformed JSON, wrong types or unknown keys (serde names the key).
    Parse(String),
    Field {
        field: String,
        message: String,
    },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse(m) => write!(f, "config parse error: {m}"),
            ConfigError::Field { field, message } => write!(f, "config field `{field}`: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn field_err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field: field.into(), message: message.into() }
}

/// Parse without validating.
pub fn parse_config(raw: &str) -> Result<ScenarioConfig, ConfigError> {
    serde_json::from_str(raw).map_err(|e| ConfigError::Parse(e.to_string()))
}

/// Parse, check and fill defaults.
pub fn validate_config(raw: &str) -> Result<ScenarioConfig, ConfigError> {
    validate(parse_config(raw)?)
}

/// Default specification for an omitted force slot.
fn default_force(slot: usize, r: f64) -> ForceSpec {
    // f and g are measured in Ḣ^{-1}, g⃗ in Ḣ^{1/2}, initial states in Ḣ¹.
    let s = [-1.0, -1.0, 0.5, 1.0, 1.0][slot];
    ForceSpec::exp_decay(r, s, DEFAULT_AMPLITUDE, slot as u64 + 1)
}

/// Check a parsed config and fill scenario defaults. Idempotent.
pub fn validate(mut cfg: ScenarioConfig) -> Result<ScenarioConfig, ConfigError> {
    cfg.box_spec.validate().map_err(|e| field_err("box", e.to_string()))?;
    if !(cfg.gevrey_r.is_finite() && cfg.gevrey_r > 0.0) {
        return Err(field_err("gevrey_r", format!("must be positive, got {}", cfg.gevrey_r)));
    }
    cfg.stationary.validate().map_err(|e| field_err("stationary", e.to_string()))?;
    validate_evolution(&mut cfg)?;

    let scenario = cfg.scenario;
    let r = cfg.gevrey_r;
    for (slot, (used, entry)) in scenario.uses().into_iter().zip(cfg.forces.slots()).enumerate() {
        let name = FORCE_NAMES[slot];
        match (used, entry.as_ref()) {
            (false, Some(_)) => {
                return Err(field_err(
                    &format!("forces.{name}"),
                    format!("not allowed in the {} scenario", scenario.name()),
                ))
            }
            (true, None) => *entry = Some(default_force(slot, r)),
            (true, Some(spec)) => spec.validate().map_err(|e| field_err(&format!("forces.{name}"), e.to_string()))?,
            (false, None) => {}
        }
    }
    Ok(cfg)
}

fn validate_evolution(cfg: &mut ScenarioConfig) -> Result<(), ConfigError> {
    let e = &mut cfg.evolution;
    if e.steps < 2 {
        return Err(field_err("evolution.steps", "needs at least 2 steps"));
    }
    if !(e.calibration_c.is_finite() && e.calibration_c > 0.0) {
        return Err(field_err("evolution.calibration_C", "must be positive"));
    }
    if !(e.picard_tol.is_finite() && e.picard_tol > 0.0) {
        return Err(field_err("evolution.picard_tol", "must be positive"));
    }
    if e.max_picard_iters == 0 {
        return Err(field_err("evolution.max_picard_iters", "must be at least 1"));
    }
    if e.record_every == 0 {
        return Err(field_err("evolution.record_every", "must be at least 1"));
    }
    if cfg.scenario != Scenario::LiouvilleDecay {
        if e.t_final.is_some() || e.dt.is_some() {
            return Err(field_err("evolution.t_final", "t_final and dt only apply to the liouville-decay scenario"));
        }
        return Ok(());
    }
    if gevrey_diagnostics::k_max(&cfg.box_spec).is_none() {
        return Err(field_err("box.period_l", "the liouville-decay scenario needs L ≥ 4π so that annulus C_0 exists"));
    }
    // Slowest mode decays like exp(−t(2π/L)²); 25 diffusion times push it below 1e−10.
    let diffusion_time = (cfg.box_spec.period_l / (2.0 * PI)).powi(2);
    let t_final = *e.t_final.get_or_insert(25.0 * diffusion_time);
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(field_err("evolution.t_final", "must be positive"));
    }
    let dt = *e.dt.get_or_insert(t_final / 200.0);
    if !(dt.is_finite() && dt > 0.0 && dt <= t_final) {
        return Err(field_err("evolution.dt", format!("must lie in (0, t_final], got {dt}")));
    }
    Ok(())
}

/// Pretty JSON echo of a config.
pub fn echo(cfg: &ScenarioConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("config serializes")
}

/// Seed actually used for a force: the spec's seed mixed with the run seed.
/// Run seed 0 leaves force seeds unchanged.
pub fn effective_seed(run_seed: u64, force_seed: u64) -> u64 {
    force_seed ^ run_seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Output directory after applying `--out` and then the environment override.
pub fn resolve_output_dir(cfg: &ScenarioConfig, cli_out: Option<PathBuf>) -> PathBuf {
    cli_out
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(cfg.scenario.name()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_homogeneous_fills_defaults() {
        let cfg = validate_config(r#"{"scenario": "homogeneous"}"#).unwrap();
        assert_eq!(cfg.box_spec, Preset::Desk.box_spec());
        assert!(cfg.forces.f.is_none() && cfg.forces.g.is_none());
        let gvec = cfg.forces.gvec.unwrap();
        assert_eq!(gvec.amplitude, DEFAULT_AMPLITUDE);
        assert_eq!(gvec.radius_r, 1.0);
        assert_eq!(cfg.evolution.steps, 64);
    }

    #[test]
    fn liouville_times_scale_with_box() {
        let cfg = validate_config(r#"{"scenario": "liouville-decay"}"#).unwrap();
        assert_eq!(cfg.evolution.t_final, Some(25.0 * 256.0));
        assert_eq!(cfg.evolution.dt, Some(32.0));
    }

    #[test]
    fn zero_run_seed_keeps_force_seeds() {
        assert_eq!(effective_seed(0, 17), 17);
        assert_ne!(effective_seed(1, 17), 17);
    }
}
