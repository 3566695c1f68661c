//! End-to-end checks on trajectories: stationary drift, Richardson error,
//! Gevrey-weighted norms and calibration of `C`.

use serde::{Deserialize, Serialize};
use spectral_core::{gevrey_norm, Error, Result, SpectralScalarField, SpectralVectorField};
use stationary_solver::{Forcing, StationaryResult};

use crate::picard::{picard_mild_solve, PicardConfig, PicardSolution};
use crate::state::{FlowState, MildTrajectory, TimeGrid};

/// Quadrature error budget for the Richardson comparison.
pub const QUADRATURE_BUDGET: f64 = 1e-8;

/// Drift of an evolved stationary state.
#[derive(Clone, Debug)]
pub struct DriftReport {
    /// `max_m (‖u(t_m)−u‖_{Ḣ¹} + ‖θ(t_m)−θ‖_{Ḣ¹}) / (‖u‖_{Ḣ¹} + ‖θ‖_{Ḣ¹})`; 0 for the zero state.
    pub max_relative_drift: f64,
    pub solution: PicardSolution,
}

/// Evolve from `(u, θ)` with the stationary forcing and measure how far the trajectory moves.
pub fn stationary_drift_check(
    initial: &FlowState,
    data: &Forcing,
    grid: &TimeGrid,
    config: &PicardConfig,
) -> Result<DriftReport> {
    let solution = picard_mild_solve(&initial.u, &initial.theta, data, grid, config)?;
    let scale = initial.h1();
    let worst = solution.trajectory.states.iter().map(|s| s.sub(initial).h1()).fold(0.0, f64::max);
    let max_relative_drift = if scale == 0.0 {
        if worst == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        worst / scale
    };
    Ok(DriftReport { max_relative_drift, solution })
}

/// [`stationary_drift_check`] started from a converged stationary solution.
pub fn stationary_drift(
    stationary: &StationaryResult,
    data: &Forcing,
    grid: &TimeGrid,
    config: &PicardConfig,
) -> Result<DriftReport> {
    let s = FlowState::new(stationary.u.clone(), stationary.theta.clone())?;
    stationary_drift_check(&s, data, grid, config)
}

/// One row of the trajectory norm series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSample {
    pub t: f64,
    #[serde(rename = "u_H1")]
    pub u_h1: f64,
    #[serde(rename = "theta_H1")]
    pub theta_h1: f64,
    /// `‖e^{(2r/3)√t√(−Δ)}(u, θ)(t)‖_{Ḣ¹}`, split as `u` plus `θ`.
    #[serde(rename = "gevrey_weighted_H1")]
    pub gevrey_weighted_h1: f64,
}

/// Per-node norms; `r = 0` makes the weighted column the plain `Ḣ¹` sum.
pub fn norm_series(traj: &MildTrajectory, r: f64) -> Vec<NormSample> {
    traj.grid
        .nodes()
        .into_iter()
        .zip(&traj.states)
        .map(|(t, s)| {
            let w = 2.0 * r / 3.0 * t.sqrt();
            NormSample {
                t,
                u_h1: s.u_h1(),
                theta_h1: s.theta_h1(),
                gevrey_weighted_h1: gevrey_norm(&s.u, 1.0, w) + gevrey_norm(&s.theta, 1.0, w),
            }
        })
        .collect()
}

/// `sup_m ‖e^{(2r/3)√t_m√(−Δ)}(u, θ)(t_m)‖_{Ḣ¹}`.
pub fn gevrey_weighted_norm(traj: &MildTrajectory, r: f64) -> f64 {
    norm_series(traj, r).iter().map(|s| s.gevrey_weighted_h1).fold(0.0, f64::max)
}

/// Solution on `M` and `2M` steps compared at the coarse nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RichardsonReport {
    pub coarse_steps: usize,
    /// `‖e_M − e_{2M}‖_{E_T} / ‖e_{2M}‖_{E_T}` over the coarse nodes.
    pub relative_difference: f64,
    pub within_budget: bool,
}

pub fn richardson_check(
    v0: &SpectralVectorField,
    theta0: &SpectralScalarField,
    data: &Forcing,
    grid: &TimeGrid,
    config: &PicardConfig,
) -> Result<RichardsonReport> {
    let fine_grid = TimeGrid::new(grid.t_end, 2 * grid.steps)?;
    let coarse = picard_mild_solve(v0, theta0, data, grid, config)?.trajectory;
    let fine = picard_mild_solve(v0, theta0, data, &fine_grid, config)?.trajectory;
    let sub = MildTrajectory::new(*grid, fine.states.into_iter().step_by(2).collect())?;
    let scale = sub.e_t_norm();
    let diff = coarse.distance(&sub);
    let relative_difference = if scale == 0.0 { diff } else { diff / scale };
    Ok(RichardsonReport {
        coarse_steps: grid.steps,
        relative_difference,
        within_budget: relative_difference <= QUADRATURE_BUDGET,
    })
}

/// Initial state and forcing of one calibration trial.
#[derive(Clone, Debug)]
pub struct CalibrationCase {
    pub initial: FlowState,
    pub data: Forcing,
}

/// Outcome of the calibration sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRecord {
    pub calibration_c: f64,
    pub rounds: usize,
    pub trials: usize,
    /// Largest `max_k ‖e^{(k)}‖_{E_T} / 3δ₀` at the accepted `C`.
    pub worst_ball_fraction: f64,
}

/// Raise `C` by half until every case keeps all Picard iterates inside `3δ₀` at `T = T₀`.
pub fn calibrate(
    cases: &[CalibrationCase],
    steps: usize,
    start_c: f64,
    max_rounds: usize,
) -> Result<CalibrationRecord> {
    let mut c = start_c;
    for round in 1..=max_rounds {
        let mut worst = 0.0f64;
        let mut ok = true;
        for case in cases {
            let cfg = PicardConfig { calibration_c: c, ..PicardConfig::default() };
            let k = crate::constants::compute_t0(&case.initial.u, &case.initial.theta, &case.data, c)?;
            let grid = TimeGrid::new(k.t0, steps)?;
            match picard_mild_solve(&case.initial.u, &case.initial.theta, &case.data, &grid, &cfg) {
                Ok(sol) => {
                    let ball = 3.0 * sol.constants.delta0;
                    if ball > 0.0 {
                        worst = worst.max(sol.max_iterate_norm / ball);
                    }
                    ok &= sol.in_ball;
                }
                Err(Error::ContractionFailure { .. }) | Err(Error::NonConvergence { .. }) => ok = false,
                Err(e) => return Err(e),
            }
            if !ok {
                break;
            }
        }
        if ok {
            return Ok(CalibrationRecord {
                calibration_c: c,
                rounds: round,
                trials: cases.len(),
                worst_ball_fraction: worst,
            });
        }
        c *= 1.5;
    }
    Err(Error::Domain(format!("no calibration constant up to {c} keeps the iterates in the 3δ₀ ball")))
}
