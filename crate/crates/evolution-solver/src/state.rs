//! Time grids, flow states and sampled trajectories.

use serde::{Deserialize, Serialize};
use spectral_core::field::ensure_same_box;
use spectral_core::{sobolev_norm, BoxSpec, Error, Result, SpectralScalarField, SpectralVectorField};

/// Uniform grid `t_m = m·t_end/M`, `m = 0..=M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_end: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t_end: f64, steps: usize) -> Result<Self> {
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::Domain(format!("time grid needs t_end > 0, got {t_end}")));
        }
        if steps < 2 {
            return Err(Error::Domain(format!("time grid needs at least 2 steps, got {steps}")));
        }
        Ok(TimeGrid { t_end, steps })
    }

    pub fn dt(&self) -> f64 {
        self.t_end / self.steps as f64
    }

    pub fn node(&self, m: usize) -> f64 {
        m as f64 * self.t_end / self.steps as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.steps).map(|m| self.node(m)).collect()
    }
}

/// A velocity/temperature pair `(u, θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub u: SpectralVectorField,
    pub theta: SpectralScalarField,
}

impl FlowState {
    pub fn new(u: SpectralVectorField, theta: SpectralScalarField) -> Result<Self> {
        ensure_same_box(&[u.box_spec(), theta.box_spec()])?;
        Ok(FlowState { u, theta })
    }

    pub fn zeros(b: &BoxSpec) -> Self {
        FlowState { u: SpectralVectorField::zeros(b), theta: SpectralScalarField::zeros(b) }
    }

    pub fn box_spec(&self) -> &BoxSpec {
        self.theta.box_spec()
    }

    pub fn u_h1(&self) -> f64 {
        sobolev_norm(&self.u, 1.0)
    }

    pub fn theta_h1(&self) -> f64 {
        sobolev_norm(&self.theta, 1.0)
    }

    /// `‖u‖_{Ḣ¹} + ‖θ‖_{Ḣ¹}`.
    pub fn h1(&self) -> f64 {
        self.u_h1() + self.theta_h1()
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.theta.is_zero()
    }

    pub fn scaled(&self, a: f64) -> Self {
        FlowState { u: self.u.scaled(a), theta: self.theta.scaled(a) }
    }

    pub fn sub(&self, other: &FlowState) -> FlowState {
        FlowState { u: &self.u - &other.u, theta: &self.theta - &other.theta }
    }

    pub fn add(&self, other: &FlowState) -> FlowState {
        FlowState { u: &self.u + &other.u, theta: &self.theta + &other.theta }
    }
}

/// Node values of a trajectory on `[0, T]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MildTrajectory {
    pub grid: TimeGrid,
    pub states: Vec<FlowState>,
}

impl MildTrajectory {
    pub fn new(grid: TimeGrid, states: Vec<FlowState>) -> Result<Self> {
        if states.len() != grid.steps + 1 {
            return Err(Error::ShapeMismatch(format!("{} states for {} grid nodes", states.len(), grid.steps + 1)));
        }
        Ok(MildTrajectory { grid, states })
    }

    /// The same state at every node.
    pub fn constant(grid: TimeGrid, state: &FlowState) -> Self {
        MildTrajectory { grid, states: vec![state.clone(); grid.steps + 1] }
    }

    pub fn box_spec(&self) -> &BoxSpec {
        self.states[0].box_spec()
    }

    /// `‖e‖_{E_T} = sup_m ‖u(t_m)‖_{Ḣ¹} + sup_m ‖θ(t_m)‖_{Ḣ¹}`.
    pub fn e_t_norm(&self) -> f64 {
        let su = self.states.iter().map(FlowState::u_h1).fold(0.0, f64::max);
        let st = self.states.iter().map(FlowState::theta_h1).fold(0.0, f64::max);
        su + st
    }

    /// `‖self − other‖_{E_T}`.
    pub fn distance(&self, other: &MildTrajectory) -> f64 {
        let mut su = 0.0f64;
        let mut st = 0.0f64;
        for (a, b) in self.states.iter().zip(&other.states) {
            su = su.max(sobolev_norm(&(&a.u - &b.u), 1.0));
            st = st.max(sobolev_norm(&(&a.theta - &b.theta), 1.0));
        }
        su + st
    }

    /// Largest relative divergence of `u` over the nodes.
    pub fn max_divergence_defect(&self) -> f64 {
        self.states.iter().map(|s| s.u.divergence_defect()).fold(0.0, f64::max)
    }

    pub fn final_state(&self) -> &FlowState {
        self.states.last().expect("a trajectory has at least three nodes")
    }
}
