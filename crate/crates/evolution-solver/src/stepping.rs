//! Per-step exponential integrator for horizons beyond `T₀`.
//!
//! This is not the trajectory-level Picard construction and carries none of its
//! guarantees; it reuses the same `ψ` weights step by step:
//! predictor `x* = e^{hΔ}xₙ + hψ₁N(xₙ)`, corrector
//! `xₙ₊₁ = e^{hΔ}xₙ + h[(ψ₁−ψ₂)N(xₙ) + ψ₂N(x*)]`.

use spectral_core::field::ensure_same_box;
use spectral_core::nonlinear::{product_with_physical, PhysicalVector};
use spectral_core::{leray_project, nonlinear_terms, Error, Result, SpectralScalarField, SpectralVectorField};
use stationary_solver::Forcing;

use crate::heat::HeatWeights;
use crate::state::FlowState;

/// Right-hand side `(ℙ(f + ϑg⃗ − div(u⊗u)), g − div(ϑu))` without the Laplacian.
struct Rhs<'a> {
    data: &'a Forcing,
    pf: SpectralVectorField,
    gvec: Option<PhysicalVector>,
}

impl<'a> Rhs<'a> {
    fn new(data: &'a Forcing) -> Self {
        let gvec = (!data.gvec.is_zero()).then(|| PhysicalVector::new(&data.gvec));
        Rhs { data, pf: leray_project(&data.f), gvec }
    }

    fn eval(&self, s: &FlowState) -> FlowState {
        let nl = nonlinear_terms(&s.u, &s.theta).expect("state shares one box");
        let mut m = -&nl.momentum;
        if let Some(g) = &self.gvec {
            if !s.theta.is_zero() {
                m += &product_with_physical(&s.theta, g).expect("same box");
            }
        }
        FlowState { u: &self.pf + &leray_project(&m), theta: &self.data.g - &nl.heat }
    }
}

/// Advance `steps` steps of size `dt`, calling `observe(t, state)` at `t = 0` and after every step.
/// Returns the final state.
pub fn evolve_etd(
    v0: &SpectralVectorField,
    theta0: &SpectralScalarField,
    data: &Forcing,
    dt: f64,
    steps: usize,
    mut observe: impl FnMut(f64, &FlowState),
) -> Result<FlowState> {
    ensure_same_box(&[v0.box_spec(), theta0.box_spec(), data.box_spec()])?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Domain(format!("step size must be positive, got {dt}")));
    }
    let w = HeatWeights::new(v0.box_spec(), dt);
    let rhs = Rhs::new(data);
    let mut x = FlowState { u: leray_project(v0), theta: theta0.clone() };
    observe(0.0, &x);
    for n in 0..steps {
        let nx = rhs.eval(&x);
        let pred = w.step_frozen(&x, &nx);
        let np = rhs.eval(&pred);
        x = w.step_state(&x, &nx, &np);
        if !x.h1().is_finite() {
            return Err(Error::NonConvergence { iterations: n + 1, history: vec![f64::INFINITY] });
        }
        observe((n + 1) as f64 * dt, &x);
    }
    Ok(x)
}
