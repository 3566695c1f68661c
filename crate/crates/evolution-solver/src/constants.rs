//! Existence times `T₀`, `T₁` and the analyticity parameter `ρ`.

use forcing_factory::control_gevrey_constant;
use serde::{Deserialize, Serialize};
use spectral_core::field::ensure_same_box;
use spectral_core::{gevrey_norm, lp_norm, sobolev_norm, Error, Result, SpectralScalarField, SpectralVectorField};
use stationary_solver::Forcing;

/// Which `δ₁` to use in `T₁`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum T1Mode {
    /// Data-only: `δ₁` built from the energy and control estimates.
    #[default]
    Uniform,
    /// `f = g = 0`: `δ₁ = C(e^{r²}+1)(‖u‖_{Ḣ¹}+‖θ‖_{Ḣ¹})` from the state itself.
    Homogeneous,
}

/// Smallness parameters and existence times of one data set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExistenceConstants {
    pub delta0: f64,
    pub eta0: f64,
    #[serde(rename = "T0")]
    pub t0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta1: Option<f64>,
    #[serde(rename = "T1", default, skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(rename = "calibration_C")]
    pub calibration_c: f64,
}

/// `½·min(1, (9δ)^{−4}, (3η)^{−2})`, with zero `δ` or `η` dropping its branch.
pub fn existence_time(delta: f64, eta: f64) -> f64 {
    let a = if delta > 0.0 { (9.0 * delta).powi(-4) } else { f64::INFINITY };
    let b = if eta > 0.0 { (3.0 * eta).powi(-2) } else { f64::INFINITY };
    0.5 * a.min(b).min(1.0)
}

fn check_c(c: f64) -> Result<()> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Domain(format!("calibration constant must be positive, got {c}")));
    }
    Ok(())
}

fn check_boxes(v0: &SpectralVectorField, theta0: &SpectralScalarField, data: &Forcing) -> Result<()> {
    ensure_same_box(&[v0.box_spec(), theta0.box_spec(), data.box_spec()])
}

/// `δ₀ = C(‖v₀‖ + ‖ϑ₀‖ + ‖f‖ + ‖g‖)` in `Ḣ¹`, `η₀ = C‖g⃗‖_{Ḣ^{1/2}}` and `T₀`.
pub fn compute_t0(
    v0: &SpectralVectorField,
    theta0: &SpectralScalarField,
    data: &Forcing,
    c: f64,
) -> Result<ExistenceConstants> {
    check_c(c)?;
    check_boxes(v0, theta0, data)?;
    let delta0 = c
        * (sobolev_norm(v0, 1.0) + sobolev_norm(theta0, 1.0) + sobolev_norm(&data.f, 1.0) + sobolev_norm(&data.g, 1.0));
    let eta0 = c * sobolev_norm(&data.gvec, 0.5);
    Ok(ExistenceConstants {
        delta0,
        eta0,
        t0: existence_time(delta0, eta0),
        delta1: None,
        eta1: None,
        t1: None,
        rho: None,
        calibration_c: c,
    })
}

fn finite_gevrey(x: f64, r: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::DataNotGevrey { r })
    }
}

/// `T₀` plus `δ₁`, `η₁ = C_r‖g⃗‖_{G^{1/2}_r}`, `T₁` and `ρ = (2r/3)T₁`.
///
/// `T₁` is capped at `T₀`: the raw formula can exceed `T₀` for small data,
/// which would put the Gevrey argument outside the interval where the solution exists.
pub fn compute_t1(
    v0: &SpectralVectorField,
    theta0: &SpectralScalarField,
    data: &Forcing,
    r: f64,
    c: f64,
    mode: T1Mode,
) -> Result<ExistenceConstants> {
    let mut k = compute_t0(v0, theta0, data, c)?;
    let c_r = control_gevrey_constant(r)?;
    let growth = c * ((r * r).exp() + 1.0);
    let delta1 = match mode {
        T1Mode::Uniform => {
            let g_m1 = sobolev_norm(&data.g, -1.0);
            let f_m1 = sobolev_norm(&data.f, -1.0);
            let fg = gevrey_norm(&data.f, -1.0, r).hypot(gevrey_norm(&data.g, -1.0, r));
            let fg = finite_gevrey(fg, r)?;
            growth * (g_m1 * lp_norm(&data.gvec, 1.5) + f_m1 + g_m1 + c_r * fg)
        }
        T1Mode::Homogeneous => growth * (sobolev_norm(v0, 1.0) + sobolev_norm(theta0, 1.0)),
    };
    let eta1 = c_r * finite_gevrey(gevrey_norm(&data.gvec, 0.5, r), r)?;
    let t1 = existence_time(delta1, eta1).min(k.t0);
    k.delta1 = Some(delta1);
    k.eta1 = Some(eta1);
    k.t1 = Some(t1);
    k.rho = Some(2.0 * r / 3.0 * t1);
    Ok(k)
}
