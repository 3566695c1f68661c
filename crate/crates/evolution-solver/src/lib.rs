//! Evolution Boussinesq system in mild form on the periodic box.
//!
//! Trajectories live on a uniform time grid. The Picard map
//! `e ↦ e₀ + B(e, e) + L(e)` is iterated over whole trajectories and measured in
//! `‖e‖_{E_T} = sup_t‖v‖_{Ḣ¹} + sup_t‖ϑ‖_{Ḣ¹}`. Existence times come from the
//! closed-form smallness conditions with a multiplicative constant `C`.

pub mod checks;
pub mod constants;
pub mod heat;
pub mod picard;
pub mod scaling;
pub mod state;
pub mod stepping;

pub use checks::{
    calibrate, gevrey_weighted_norm, norm_series, richardson_check, stationary_drift, stationary_drift_check,
    CalibrationCase, CalibrationRecord, DriftReport, NormSample, RichardsonReport, QUADRATURE_BUDGET,
};
pub use constants::{compute_t0, compute_t1, existence_time, ExistenceConstants, T1Mode};
pub use heat::{duhamel_integral, duhamel_series, heat_propagate, psi1, psi2, HeatWeights};
pub use picard::{
    bilinear_term, free_term, linear_term, picard_mild_solve, picard_navier_stokes, PicardConfig, PicardSolution,
};
pub use scaling::{
    heat_lemma_check, measure_bilinear_constant, measure_linear_constant, oscillating_trials, packet_trials,
    HeatLemmaReport, ScalingFit,
};
pub use state::{FlowState, MildTrajectory, TimeGrid};
pub use stepping::evolve_etd;
