//! Trajectory-level Picard iteration `e ← e₀ + B(e, e) + L(e)` for the mild form.
//!
//! `e₀ = (e^{tΔ}v₀ + ∫e^{(t−τ)Δ}ℙf, e^{tΔ}ϑ₀ + ∫e^{(t−τ)Δ}g)`,
//! `B(e, e) = (−∫e^{(t−τ)Δ}ℙdiv(v⊗v), −∫e^{(t−τ)Δ}div(ϑv))`,
//! `L(e) = (∫e^{(t−τ)Δ}ℙ(ϑg⃗), 0)`.
//! Forcing is time-independent, so its Duhamel term is evaluated in closed form.

use serde::{Deserialize, Serialize};
use spectral_core::field::ensure_same_box;
use spectral_core::nonlinear::{product_with_physical, PhysicalVector};
use spectral_core::{
    leray_project, nonlinear_div_tensor, nonlinear_terms, Error, Result, SpectralScalarField, SpectralVectorField,
};
use stationary_solver::Forcing;

use crate::constants::{compute_t0, ExistenceConstants};
use crate::heat::{constant_duhamel_scalar, constant_duhamel_vector, duhamel_series, heat_scalar, heat_vector};
use crate::state::{FlowState, MildTrajectory, TimeGrid};

fn default_tol() -> f64 {
    1e-10
}
fn default_max_iters() -> usize {
    200
}
fn default_c() -> f64 {
    1.0
}

/// Stopping rule and calibration constant of the Picard iteration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardConfig {
    /// Stop once `‖e^{(k+1)} − e^{(k)}‖_{E_T} ≤ tol·‖e^{(k+1)}‖_{E_T}`.
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    /// Multiplier `C` in `δ₀`, `η₀`.
    #[serde(default = "default_c")]
    pub calibration_c: f64,
}

impl Default for PicardConfig {
    fn default() -> Self {
        PicardConfig { tol: default_tol(), max_iters: default_max_iters(), calibration_c: default_c() }
    }
}

impl PicardConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Domain(format!("Picard tol = {} must be positive", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::Domain("Picard max_iters must be at least 1".into()));
        }
        if !(self.calibration_c > 0.0 && self.calibration_c.is_finite()) {
            return Err(Error::Domain(format!("calibration_C = {} must be positive", self.calibration_c)));
        }
        Ok(())
    }
}

/// Converged Picard trajectory with its bookkeeping.
#[derive(Clone, Debug)]
pub struct PicardSolution {
    pub trajectory: MildTrajectory,
    pub constants: ExistenceConstants,
    pub iterations: usize,
    /// `‖e^{(k+1)} − e^{(k)}‖_{E_T}` per iteration.
    pub increments: Vec<f64>,
    /// Largest `‖e^{(k)}‖_{E_T}` over all iterates, `e₀` included.
    pub max_iterate_norm: f64,
    /// Every iterate stayed within `3δ₀`.
    pub in_ball: bool,
    /// The horizon exceeds `T₀`; the run is outside the existence statement.
    pub beyond_t0: bool,
}

impl PicardSolution {
    /// Geometric rate: the largest ratio of successive increments.
    pub fn contraction_ratio(&self) -> Option<f64> {
        self.increments.windows(2).filter(|w| w[0] > 0.0 && w[1] > 0.0).map(|w| w[1] / w[0]).reduce(f64::max)
    }
}

/// `e₀` at every node.
pub fn free_term(
    v0: &SpectralVectorField,
    theta0: &SpectralScalarField,
    data: &Forcing,
    grid: &TimeGrid,
) -> Result<MildTrajectory> {
    ensure_same_box(&[v0.box_spec(), theta0.box_spec(), data.box_spec()])?;
    let pf = leray_project(&data.f);
    let mut states = Vec::with_capacity(grid.steps + 1);
    for t in grid.nodes() {
        let u = &heat_vector(v0, t)? + &constant_duhamel_vector(&pf, t)?;
        let theta = &heat_scalar(theta0, t)? + &constant_duhamel_scalar(&data.g, t)?;
        states.push(FlowState { u, theta });
    }
    MildTrajectory::new(*grid, states)
}

/// Integrand of `B(e, e) + L(e)` at one node: `(ℙ(ϑg⃗ − div(v⊗v)), −div(ϑv))`.
fn integrand(s: &FlowState, gvec: Option<&PhysicalVector>) -> FlowState {
    let nl = nonlinear_terms(&s.u, &s.theta).expect("state shares one box");
    let forcing = match gvec {
        Some(g) if !s.theta.is_zero() => &product_with_physical(&s.theta, g).expect("same box") - &nl.momentum,
        _ => -&nl.momentum,
    };
    FlowState { u: leray_project(&forcing), theta: -&nl.heat }
}

fn integrate(traj: &MildTrajectory, f: impl Fn(&FlowState) -> FlowState) -> MildTrajectory {
    let samples: Vec<FlowState> = traj.states.iter().map(f).collect();
    let states = duhamel_series(&samples, traj.grid.dt()).expect("grid spacing is positive");
    MildTrajectory { grid: traj.grid, states }
}

/// `B(e, e)` on the grid of `e`.
pub fn bilinear_term(e: &MildTrajectory) -> MildTrajectory {
    integrate(e, |s| integrand(s, None))
}

/// `L(e)` on the grid of `e`.
pub fn linear_term(e: &MildTrajectory, gvec: &SpectralVectorField) -> Result<MildTrajectory> {
    ensure_same_box(&[e.box_spec(), gvec.box_spec()])?;
    let b = *gvec.box_spec();
    if gvec.is_zero() {
        return Ok(MildTrajectory::constant(e.grid, &FlowState::zeros(&b)));
    }
    let g = PhysicalVector::new(gvec);
    Ok(integrate(e, |s| FlowState {
        u: leray_project(&product_with_physical(&s.theta, &g).expect("same box")),
        theta: SpectralScalarField::zeros(&b),
    }))
}

fn add(a: &MildTrajectory, b: &MildTrajectory) -> MildTrajectory {
    MildTrajectory { grid: a.grid, states: a.states.iter().zip(&b.states).map(|(x, y)| x.add(y)).collect() }
}

/// Solve `e = e₀ + B(e, e) + L(e)` on `grid`, starting from `e₀`.
///
/// A horizon above `T₀` is allowed and flagged in [`PicardSolution::beyond_t0`].
pub fn picard_mild_solve(
    v0: &SpectralVectorField,
    theta0: &SpectralScalarField,
    data: &Forcing,
    grid: &TimeGrid,
    config: &PicardConfig,
) -> Result<PicardSolution> {
    config.validate()?;
    let constants = compute_t0(v0, theta0, data, config.calibration_c)?;
    let e0 = free_term(v0, theta0, data, grid)?;
    let gvec = (!data.gvec.is_zero()).then(|| PhysicalVector::new(&data.gvec));
    let ball = 3.0 * constants.delta0;
    iterate(e0, ball, config, constants, grid, |e| integrate(e, |s| integrand(s, gvec.as_ref())))
}

/// The θ-free iteration `v ← e^{tΔ}v₀ + ∫e^{(t−τ)Δ}ℙ(f − div(v⊗v))`.
pub fn picard_navier_stokes(
    v0: &SpectralVectorField,
    f: &SpectralVectorField,
    grid: &TimeGrid,
    config: &PicardConfig,
) -> Result<PicardSolution> {
    config.validate()?;
    let b = *v0.box_spec();
    let data = Forcing::new(f.clone(), SpectralScalarField::zeros(&b), SpectralVectorField::zeros(&b))?;
    let theta0 = SpectralScalarField::zeros(&b);
    let constants = compute_t0(v0, &theta0, &data, config.calibration_c)?;
    let e0 = free_term(v0, &theta0, &data, grid)?;
    let ball = 3.0 * constants.delta0;
    iterate(e0, ball, config, constants, grid, |e| {
        integrate(e, |s| FlowState {
            u: leray_project(&-&nonlinear_div_tensor(&s.u)),
            theta: SpectralScalarField::zeros(&b),
        })
    })
}

fn iterate(
    e0: MildTrajectory,
    ball: f64,
    config: &PicardConfig,
    constants: ExistenceConstants,
    grid: &TimeGrid,
    duhamel: impl Fn(&MildTrajectory) -> MildTrajectory,
) -> Result<PicardSolution> {
    let beyond_t0 = grid.t_end > constants.t0;
    let mut max_norm = e0.e_t_norm();
    let mut increments = Vec::new();
    let mut current = e0.clone();
    for k in 0..config.max_iters {
        let next = add(&e0, &duhamel(&current));
        let norm = next.e_t_norm();
        max_norm = max_norm.max(norm);
        if !norm.is_finite() || norm > 10.0 * ball {
            return Err(Error::ContractionFailure { iteration: k + 1, norm, bound: 10.0 * ball });
        }
        let step = next.distance(&current);
        increments.push(step);
        current = next;
        if step <= config.tol * norm || step == 0.0 {
            return Ok(PicardSolution {
                trajectory: current,
                constants,
                iterations: k + 1,
                increments,
                max_iterate_norm: max_norm,
                in_ball: max_norm <= ball,
                beyond_t0,
            });
        }
    }
    Err(Error::NonConvergence { iterations: config.max_iters, history: increments })
}
