//! Stationary Boussinesq solutions by damped fixed-point iteration.
//!
//! The map is
//! `θ' = (−Δ)^{−1}(g − div(θu))`,
//! `u' = ℙ(−Δ)^{−1}(f − div(u⊗u) + θg⃗)`,
//! iterated from `(0, 0)` with relaxation `x ← (1−α)x + α·Map(x)`.

use serde::{Deserialize, Serialize};
use spectral_core::field::{ensure_same_box, DIV_TOL};
use spectral_core::nonlinear::{product_with_physical, PhysicalVector};
use spectral_core::norms::lp_norm;
use spectral_core::{
    divergence, inverse_laplacian, inverse_laplacian_vector, leray_project, nonlinear_div_tensor, nonlinear_terms,
    sobolev_norm, BoxSpec, Error, Result, SpectralScalarField, SpectralVectorField,
};

fn default_alpha() -> f64 {
    1.0
}
fn default_tol() -> f64 {
    1e-11
}
fn default_max_iters() -> usize {
    500
}

/// Consecutive growth steps that count as divergence.
pub const GROWTH_LIMIT: usize = 20;

/// Iteration schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationaryConfig {
    #[serde(default = "default_alpha")]
    pub damping_alpha: f64,
    #[serde(default = "default_tol")]
    pub tol_residual: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
}

impl Default for StationaryConfig {
    fn default() -> Self {
        StationaryConfig { damping_alpha: default_alpha(), tol_residual: default_tol(), max_iters: default_max_iters() }
    }
}

impl StationaryConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping_alpha > 0.0 && self.damping_alpha <= 1.0) {
            return Err(Error::Domain(format!("damping_alpha = {} must lie in (0, 1]", self.damping_alpha)));
        }
        if !(self.tol_residual > 0.0 && self.tol_residual.is_finite()) {
            return Err(Error::Domain(format!("tol_residual = {} must be positive", self.tol_residual)));
        }
        if self.max_iters == 0 {
            return Err(Error::Domain("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// Stationary forcing `(f⃗, g, g⃗)`.
#[derive(Clone, Debug)]
pub struct Forcing {
    pub f: SpectralVectorField,
    pub g: SpectralScalarField,
    pub gvec: SpectralVectorField,
}

impl Forcing {
    pub fn new(f: SpectralVectorField, g: SpectralScalarField, gvec: SpectralVectorField) -> Result<Self> {
        ensure_same_box(&[f.box_spec(), g.box_spec(), gvec.box_spec()])?;
        let d = f.divergence_defect();
        if d > DIV_TOL {
            return Err(Error::Domain(format!("f must be divergence-free (relative divergence {d:.3e})")));
        }
        Ok(Forcing { f, g, gvec })
    }

    pub fn zeros(b: &BoxSpec) -> Self {
        Forcing {
            f: SpectralVectorField::zeros(b),
            g: SpectralScalarField::zeros(b),
            gvec: SpectralVectorField::zeros(b),
        }
    }

    pub fn box_spec(&self) -> &BoxSpec {
        self.f.box_spec()
    }
}

/// One row of the iteration log.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub du_h1: f64,
    pub dtheta_h1: f64,
    pub res_m: f64,
    pub res_h: f64,
}

/// LHS/RHS ratios of the energy and pressure estimates, constants omitted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    /// `‖θ‖_{Ḣ¹} / ‖g‖_{Ḣ^{−1}}`, at most 1.
    pub theta_ratio: f64,
    /// `‖u‖²_{Ḣ¹} / (‖g‖²_{Ḣ^{−1}}‖g⃗‖²_{L^{3/2}} + ‖f‖²_{Ḣ^{−1}})`.
    pub u_ratio: f64,
    /// `‖P_u‖_{Ḣ^{1/2}} / ‖u‖²_{Ḣ¹}`.
    pub pressure_u_ratio: f64,
    /// `‖P_θ‖_{Ḣ¹} / (‖θ‖_{Ḣ¹}‖g⃗‖_{Ḣ^{1/2}})`.
    pub pressure_theta_ratio: f64,
}

/// A converged stationary state.
#[derive(Clone, Debug)]
pub struct StationaryResult {
    pub u: SpectralVectorField,
    pub theta: SpectralScalarField,
    pub pressure_u: SpectralScalarField,
    pub pressure_theta: SpectralScalarField,
    pub iterations: usize,
    pub final_update_norm: f64,
    pub energy_report: EnergyReport,
    pub history: Vec<IterationRecord>,
}

/// Forcing prepared once per solve: `(−Δ)^{−1}g` and the grid samples of `g⃗`.
struct Prepared<'a> {
    data: &'a Forcing,
    g_lin: SpectralScalarField,
    gvec_phys: Option<PhysicalVector>,
}

impl<'a> Prepared<'a> {
    fn new(data: &'a Forcing) -> Self {
        let gvec_phys = (!data.gvec.is_zero()).then(|| PhysicalVector::new(&data.gvec));
        Prepared { data, g_lin: inverse_laplacian(&data.g), gvec_phys }
    }
}

/// Everything one map evaluation produces, kept for the residual.
struct MapEval {
    u: SpectralVectorField,
    theta: SpectralScalarField,
    momentum: SpectralVectorField,
    heat: SpectralScalarField,
    buoyancy: Option<SpectralVectorField>,
}

fn evaluate(u: &SpectralVectorField, theta: &SpectralScalarField, prep: &Prepared) -> MapEval {
    let nl = nonlinear_terms(u, theta).expect("state shares the forcing box");
    let buoyancy = match &prep.gvec_phys {
        Some(g) if !theta.is_zero() => Some(product_with_physical(theta, g).expect("same box")),
        _ => None,
    };
    let mut rhs = &prep.data.f - &nl.momentum;
    if let Some(b) = &buoyancy {
        rhs += b;
    }
    let u_new = leray_project(&inverse_laplacian_vector(&rhs));
    let theta_new = &prep.g_lin - &inverse_laplacian(&nl.heat);
    MapEval { u: u_new, theta: theta_new, momentum: nl.momentum, heat: nl.heat, buoyancy }
}

/// One application of the fixed-point map.
pub fn apply_fixed_point_map(
    u: &SpectralVectorField,
    theta: &SpectralScalarField,
    f: &SpectralVectorField,
    g: &SpectralScalarField,
    gvec: &SpectralVectorField,
) -> Result<(SpectralVectorField, SpectralScalarField)> {
    ensure_same_box(&[u.box_spec(), theta.box_spec(), f.box_spec(), g.box_spec(), gvec.box_spec()])?;
    let data = Forcing::new(f.clone(), g.clone(), gvec.clone())?;
    let e = evaluate(u, theta, &Prepared::new(&data));
    Ok((e.u, e.theta))
}

/// The θ-free map `u' = ℙ(−Δ)^{−1}(f − div(u⊗u))`.
pub fn apply_navier_stokes_map(u: &SpectralVectorField, f: &SpectralVectorField) -> Result<SpectralVectorField> {
    ensure_same_box(&[u.box_spec(), f.box_spec()])?;
    let rhs = f - &nonlinear_div_tensor(u);
    Ok(leray_project(&inverse_laplacian_vector(&rhs)))
}

/// `P_u = (−Δ)^{−1}div div(u⊗u)` and `P_θ = −(−Δ)^{−1}div(θg⃗)`.
pub fn compute_pressure(
    u: &SpectralVectorField,
    theta: &SpectralScalarField,
    gvec: &SpectralVectorField,
) -> Result<(SpectralScalarField, SpectralScalarField)> {
    ensure_same_box(&[u.box_spec(), theta.box_spec(), gvec.box_spec()])?;
    let p_u = inverse_laplacian(&divergence(&nonlinear_div_tensor(u)));
    let b = *u.box_spec();
    let p_t = if theta.is_zero() || gvec.is_zero() {
        SpectralScalarField::zeros(&b)
    } else {
        let tg = product_with_physical(theta, &PhysicalVector::new(gvec))?;
        -&inverse_laplacian(&divergence(&tg))
    };
    Ok((p_u, p_t))
}

fn pressure_from_terms(
    momentum: &SpectralVectorField,
    buoyancy: Option<&SpectralVectorField>,
    b: &BoxSpec,
) -> (SpectralScalarField, SpectralScalarField) {
    let p_u = inverse_laplacian(&divergence(momentum));
    let p_t = match buoyancy {
        Some(tg) => -&inverse_laplacian(&divergence(tg)),
        None => SpectralScalarField::zeros(b),
    };
    (p_u, p_t)
}

fn minus_laplacian(f: &SpectralScalarField) -> SpectralScalarField {
    let lat = f.lattice();
    f.map_indexed(|i, c| c * lat.norm_sq()[i])
}

fn residual_from_terms(
    u: &SpectralVectorField,
    theta: &SpectralScalarField,
    pressure: &SpectralScalarField,
    momentum: &SpectralVectorField,
    heat: &SpectralScalarField,
    buoyancy: Option<&SpectralVectorField>,
    data: &Forcing,
) -> (f64, f64) {
    // −Δu + div(u⊗u) + ∇P − θg⃗ − f
    let grad = spectral_core::ops::gradient(pressure);
    let mut parts = [0, 1, 2].map(|j| {
        let mut r = minus_laplacian(u.component(j));
        r += momentum.component(j);
        r += grad.component(j);
        r -= data.f.component(j);
        if let Some(b) = buoyancy {
            r -= b.component(j);
        }
        r
    });
    for p in parts.iter_mut() {
        p.coeffs_mut()[0] = Default::default();
    }
    let res_m = SpectralVectorField::from_components(parts).expect("same box");
    // −Δθ + div(θu) − g
    let res_h = &(&minus_laplacian(theta) + heat) - &data.g;
    (sobolev_norm(&res_m, -1.0), sobolev_norm(&res_h, -1.0))
}

/// Ḣ^{−1} norms of the momentum and heat residuals.
pub fn pde_residual(
    u: &SpectralVectorField,
    theta: &SpectralScalarField,
    pressure: &SpectralScalarField,
    f: &SpectralVectorField,
    g: &SpectralScalarField,
    gvec: &SpectralVectorField,
) -> Result<(f64, f64)> {
    ensure_same_box(&[
        u.box_spec(),
        theta.box_spec(),
        pressure.box_spec(),
        f.box_spec(),
        g.box_spec(),
        gvec.box_spec(),
    ])?;
    let data = Forcing { f: f.clone(), g: g.clone(), gvec: gvec.clone() };
    let nl = nonlinear_terms(u, theta)?;
    let buoyancy = if theta.is_zero() || gvec.is_zero() {
        None
    } else {
        Some(product_with_physical(theta, &PhysicalVector::new(gvec))?)
    };
    Ok(residual_from_terms(u, theta, pressure, &nl.momentum, &nl.heat, buoyancy.as_ref(), &data))
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Energy and pressure ratios of a solved state.
pub fn energy_report(
    u: &SpectralVectorField,
    theta: &SpectralScalarField,
    pressure_u: &SpectralScalarField,
    pressure_theta: &SpectralScalarField,
    data: &Forcing,
) -> EnergyReport {
    let u1 = sobolev_norm(u, 1.0);
    let t1 = sobolev_norm(theta, 1.0);
    let g_m1 = sobolev_norm(&data.g, -1.0);
    let f_m1 = sobolev_norm(&data.f, -1.0);
    let gv = lp_norm(&data.gvec, 1.5);
    let gv_half = sobolev_norm(&data.gvec, 0.5);
    EnergyReport {
        theta_ratio: ratio(t1, g_m1),
        u_ratio: ratio(u1 * u1, g_m1 * g_m1 * gv * gv + f_m1 * f_m1),
        pressure_u_ratio: ratio(sobolev_norm(pressure_u, 0.5), u1 * u1),
        pressure_theta_ratio: ratio(sobolev_norm(pressure_theta, 1.0), t1 * gv_half),
    }
}

fn h1_pair(u: &SpectralVectorField, theta: &SpectralScalarField) -> f64 {
    sobolev_norm(u, 1.0).hypot(sobolev_norm(theta, 1.0))
}

/// Residual tolerance scale used by [`StationaryResult::residuals_within`].
pub fn residual_scale(result: &StationaryResult, data: &Forcing) -> f64 {
    h1_pair(&result.u, &result.theta) + sobolev_norm(&data.f, -1.0) + sobolev_norm(&data.g, -1.0)
}

impl StationaryResult {
    /// Both residuals of the final state within `10·tol·scale`.
    pub fn residuals_within(&self, data: &Forcing, tol: f64) -> Result<bool> {
        let p = &self.pressure_u + &self.pressure_theta;
        let (m, h) = pde_residual(&self.u, &self.theta, &p, &data.f, &data.g, &data.gvec)?;
        Ok(m + h <= 10.0 * tol * residual_scale(self, data))
    }
}

/// Damped fixed-point iteration from `(0, 0)`.
pub fn solve_stationary(data: &Forcing, config: &StationaryConfig) -> Result<StationaryResult> {
    config.validate()?;
    let b = *data.box_spec();
    let prep = Prepared::new(data);
    let mut u = SpectralVectorField::zeros(&b);
    let mut theta = SpectralScalarField::zeros(&b);
    let mut history = Vec::new();
    let mut updates = Vec::new();
    let mut growth = 0usize;
    let alpha = config.damping_alpha;
    for n in 0..config.max_iters {
        let e = evaluate(&u, &theta, &prep);
        let du = sobolev_norm(&(&e.u - &u), 1.0);
        let dt = sobolev_norm(&(&e.theta - &theta), 1.0);
        let (p_u, p_t) = pressure_from_terms(&e.momentum, e.buoyancy.as_ref(), &b);
        let p = &p_u + &p_t;
        let (res_m, res_h) = residual_from_terms(&u, &theta, &p, &e.momentum, &e.heat, e.buoyancy.as_ref(), data);
        history.push(IterationRecord { iter: n, du_h1: du, dtheta_h1: dt, res_m, res_h });
        let update = du.hypot(dt);
        let size = h1_pair(&u, &theta);
        if !update.is_finite() {
            updates.push(update);
            return Err(Error::NonConvergence { iterations: n + 1, history: updates });
        }
        if update <= config.tol_residual * size || (update == 0.0 && size == 0.0) {
            let energy = energy_report(&u, &theta, &p_u, &p_t, data);
            return Ok(StationaryResult {
                u,
                theta,
                pressure_u: p_u,
                pressure_theta: p_t,
                iterations: n + 1,
                final_update_norm: update,
                energy_report: energy,
                history,
            });
        }
        if updates.last().is_some_and(|&last| update > last) {
            growth += 1;
        } else {
            growth = 0;
        }
        updates.push(update);
        if growth >= GROWTH_LIMIT {
            return Err(Error::NonConvergence { iterations: n + 1, history: updates });
        }
        if alpha == 1.0 {
            u = e.u;
            theta = e.theta;
        } else {
            u = &u.scaled(1.0 - alpha) + &e.u.scaled(alpha);
            theta = &theta.scaled(1.0 - alpha) + &e.theta.scaled(alpha);
        }
    }
    Err(Error::NonConvergence { iterations: config.max_iters, history: updates })
}

/// Stationary Navier–Stokes solve through the θ-free map, same schedule and stopping rule.
pub fn solve_navier_stokes(f: &SpectralVectorField, config: &StationaryConfig) -> Result<SpectralVectorField> {
    config.validate()?;
    let mut u = SpectralVectorField::zeros(f.box_spec());
    let mut last = f64::INFINITY;
    let mut growth = 0usize;
    let mut updates = Vec::new();
    let alpha = config.damping_alpha;
    for n in 0..config.max_iters {
        let next = apply_navier_stokes_map(&u, f)?;
        let update = sobolev_norm(&(&next - &u), 1.0);
        let size = sobolev_norm(&u, 1.0);
        if !update.is_finite() {
            return Err(Error::NonConvergence { iterations: n + 1, history: updates });
        }
        if update <= config.tol_residual * size || (update == 0.0 && size == 0.0) {
            return Ok(u);
        }
        growth = if update > last { growth + 1 } else { 0 };
        last = update;
        updates.push(update);
        if growth >= GROWTH_LIMIT {
            return Err(Error::NonConvergence { iterations: n + 1, history: updates });
        }
        u = if alpha == 1.0 { next } else { &u.scaled(1.0 - alpha) + &next.scaled(alpha) };
    }
    Err(Error::NonConvergence { iterations: config.max_iters, history: updates })
}
