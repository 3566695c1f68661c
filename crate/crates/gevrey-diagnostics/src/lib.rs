//! Diagnostics of Fourier decay and of the Liouville inequality chain.
//!
//! - analyticity radius from the exponential decay of shell maxima,
//! - sups over dyadic annuli `C_k = {2^{−(k+1)} ≤ |ξ| ≤ 2^{−k}}`,
//! - the Besov norm `sup_{t>0} t^{1/2}‖e^{tΔ}φ‖_{L^∞}` and the improved Sobolev ratio,
//! - lattice `ℓ¹`, `L^∞` and `Ẇ^{s,p}` norms.

use serde::{Deserialize, Serialize};
use spectral_core::field::ensure_same_box;
use spectral_core::norms::lp_norm;
use spectral_core::ops::physical_pair;
use spectral_core::{
    apply_multiplier, apply_multiplier_vector, gevrey_norm, sobolev_norm, BoxSpec, Complex64, Error, Lattice, Result,
    SpectralField, SpectralScalarField, SpectralVectorField, WaveVector,
};

/// Noise floor for the radius regression, relative to the largest coefficient.
pub const NOISE_FLOOR: f64 = 1e-14;
/// Fewest shells the radius regression accepts.
pub const MIN_SHELLS: usize = 4;
/// Points of the default Besov time grid.
pub const BESOV_POINTS: usize = 64;

/// Scalar or vector field that the diagnostics can act on.
pub trait Diagnosable: SpectralField + Sized {
    /// Euclidean magnitude of the coefficient at lattice index `i`.
    fn magnitude_at(&self, i: usize) -> f64;
    /// Same field with a real Fourier multiplier applied.
    fn multiplied(&self, m: &dyn Fn(&WaveVector) -> f64) -> Self;
    /// `‖e^{tΔ}φ‖_{L^∞}` for each `t`.
    fn heated_sup(&self, times: &[f64]) -> Vec<f64> {
        times
            .iter()
            .map(|&t| lp_norm(&self.multiplied(&|p: &WaveVector| (-t * p.norm * p.norm).exp()), f64::INFINITY))
            .collect()
    }
}

impl Diagnosable for SpectralScalarField {
    fn magnitude_at(&self, i: usize) -> f64 {
        self.coeffs()[i].norm()
    }

    fn multiplied(&self, m: &dyn Fn(&WaveVector) -> f64) -> Self {
        apply_multiplier(self, |p| Complex64::new(m(p), 0.0)).expect("multiplier is finite")
    }

    // two times per complex transform
    fn heated_sup(&self, times: &[f64]) -> Vec<f64> {
        let lat = self.lattice();
        let n = self.box_spec().n();
        let heat = |t: f64| -> Vec<Complex64> {
            self.coeffs().iter().zip(lat.norm_sq()).map(|(c, k2)| (-t * k2).exp() * c).collect()
        };
        let sup = |x: &[f64]| x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut out = Vec::with_capacity(times.len());
        for pair in times.chunks(2) {
            let a = heat(pair[0]);
            let b = pair.get(1).map(|&t| heat(t));
            let (x, y) = physical_pair(&a, b.as_deref(), n);
            out.push(sup(&x));
            if b.is_some() {
                out.push(sup(&y));
            }
        }
        out
    }
}

impl Diagnosable for SpectralVectorField {
    fn magnitude_at(&self, i: usize) -> f64 {
        self.components().iter().map(|c| c.coeffs()[i].norm_sqr()).sum::<f64>().sqrt()
    }

    fn multiplied(&self, m: &dyn Fn(&WaveVector) -> f64) -> Self {
        apply_multiplier_vector(self, |p| Complex64::new(m(p), 0.0)).expect("multiplier is finite")
    }
}

/// Exponential decay rate of shell maxima.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    /// `ρ` in `max_shell |c| ≈ A·e^{−ρ|ξ|}|ξ|^{−γ}`, clamped at 0.
    pub radius: f64,
    /// Fitted algebraic exponent `γ`.
    pub algebraic_exponent: f64,
    pub r_squared: f64,
    /// `(|ξ| of the shell maximum, max |c|)` for the shells used.
    pub shells: Vec<(f64, f64)>,
}

/// Shell maxima of `mag` over shells of width `2π/L`, with the `|ξ|` where each max sits.
fn shell_maxima(lat: &Lattice, mag: impl Fn(usize) -> f64) -> Vec<Option<(f64, f64)>> {
    let d = lat.box_spec().dxi();
    let mut shells: Vec<Option<(f64, f64)>> = Vec::new();
    for (i, p) in lat.points().iter().enumerate().skip(1) {
        if !lat.retained()[i] {
            continue;
        }
        let s = (p.norm / d).floor() as usize;
        if shells.len() <= s {
            shells.resize(s + 1, None);
        }
        let m = mag(i);
        match shells[s] {
            Some((_, best)) if best >= m => {}
            _ => shells[s] = Some((p.norm, m)),
        }
    }
    shells
}

fn fit_radius(shells: Vec<Option<(f64, f64)>>) -> Result<RadiusEstimate> {
    let top = shells.iter().flatten().map(|s| s.1).fold(0.0, f64::max);
    let floor = NOISE_FLOOR * top;
    let mut used = Vec::new();
    for s in shells.into_iter().skip_while(|s| s.is_none()) {
        match s {
            Some((x, m)) if m > floor && top > 0.0 => used.push((x, m)),
            Some(_) => break,
            None => continue,
        }
    }
    if used.len() < MIN_SHELLS {
        return Err(Error::InsufficientDecayRange { usable: used.len(), needed: MIN_SHELLS });
    }
    // least squares for ln m = a − ρ x − γ ln x
    let rows: Vec<[f64; 3]> = used.iter().map(|&(x, _)| [1.0, x, x.ln()]).collect();
    let y: Vec<f64> = used.iter().map(|&(_, m)| m.ln()).collect();
    let coef = least_squares3(&rows, &y);
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 =
        rows.iter().zip(&y).map(|(r, v)| (v - (coef[0] * r[0] + coef[1] * r[1] + coef[2] * r[2])).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(RadiusEstimate { radius: (-coef[1]).max(0.0), algebraic_exponent: -coef[2], r_squared, shells: used })
}

/// Normal equations for three unknowns, solved by Gaussian elimination with pivoting.
/// A singular system (e.g. perfectly flat data) yields the zero slope.
#[allow(clippy::needless_range_loop)]
fn least_squares3(rows: &[[f64; 3]], y: &[f64]) -> [f64; 3] {
    let mut a = [[0.0f64; 4]; 3];
    for (r, v) in rows.iter().zip(y) {
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += r[i] * r[j];
            }
            a[i][3] += r[i] * v;
        }
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).expect("rows");
        a.swap(col, piv);
        if a[col][col].abs() < 1e-300 {
            return [0.0; 3];
        }
        for row in 0..3 {
            if row != col {
                let f = a[row][col] / a[col][col];
                for k in col..4 {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    [a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]]
}

/// Analyticity radius of one field.
pub fn radius_estimate<F: Diagnosable>(field: &F) -> Result<RadiusEstimate> {
    let lat = Lattice::for_box(field.box_spec());
    fit_radius(shell_maxima(&lat, |i| field.magnitude_at(i)))
}

/// Radius of the pair `(u, θ)` from the larger of `|û|`, `|θ̂|` per mode.
pub fn radius_estimate_pair(u: &SpectralVectorField, theta: &SpectralScalarField) -> Result<RadiusEstimate> {
    ensure_same_box(&[u.box_spec(), theta.box_spec()])?;
    let lat = Lattice::for_box(u.box_spec());
    fit_radius(shell_maxima(&lat, |i| u.magnitude_at(i).max(theta.magnitude_at(i))))
}

/// Largest `k` whose annulus is guaranteed to meet the lattice: `⌊log₂(L/4π)⌋`, or `None` when `L < 4π`.
pub fn k_max(b: &BoxSpec) -> Option<u32> {
    let x = (b.period_l / (4.0 * std::f64::consts::PI)).log2();
    (x >= 0.0).then(|| (x + 1e-12).floor() as u32)
}

/// `‖ĉ‖_{L^∞(C_k)}`: max `|c(ξ)|` over `2^{−(k+1)} ≤ |ξ| ≤ 2^{−k}`.
pub fn annulus_sup<F: Diagnosable>(field: &F, k: u32) -> Result<f64> {
    let b = field.box_spec();
    let lat = Lattice::for_box(b);
    let (lo, hi) = (0.5f64.powi(k as i32 + 1), 0.5f64.powi(k as i32));
    let required = 4.0 * std::f64::consts::PI * 2f64.powi(k as i32);
    if k_max(b).is_none_or(|m| k > m) {
        return Err(Error::EmptyAnnulus { k, required_period: required });
    }
    let mut found = false;
    let mut sup = 0.0f64;
    for (i, p) in lat.points().iter().enumerate() {
        if p.norm >= lo * (1.0 - 1e-12) && p.norm <= hi * (1.0 + 1e-12) {
            found = true;
            sup = sup.max(field.magnitude_at(i));
        }
    }
    if !found {
        return Err(Error::EmptyAnnulus { k, required_period: required });
    }
    Ok(sup)
}

/// One row of the annulus table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusRow {
    pub k: u32,
    pub u_sup: f64,
    pub theta_sup: f64,
    /// `2^{−k}(u_sup + θ_sup)`.
    pub weighted: f64,
    /// `2^{−2k+1}(u_sup + θ_sup)`, the summand of the `I₁` estimate.
    pub i1_term: f64,
}

/// Liouville indicator `max_k 2^{−k}(‖û‖_{L^∞(C_k)} + ‖θ̂‖_{L^∞(C_k)})` and its table.
pub fn liouville_indicator(u: &SpectralVectorField, theta: &SpectralScalarField) -> Result<(f64, Vec<AnnulusRow>)> {
    ensure_same_box(&[u.box_spec(), theta.box_spec()])?;
    let Some(km) = k_max(u.box_spec()) else {
        return Err(Error::EmptyAnnulus { k: 0, required_period: 4.0 * std::f64::consts::PI });
    };
    let mut rows = Vec::new();
    for k in 0..=km {
        let us = annulus_sup(u, k)?;
        let ts = annulus_sup(theta, k)?;
        let s = us + ts;
        rows.push(AnnulusRow {
            k,
            u_sup: us,
            theta_sup: ts,
            weighted: s * 0.5f64.powi(k as i32),
            i1_term: s * 2f64.powi(1 - 2 * k as i32),
        });
    }
    let ind = rows.iter().map(|r| r.weighted).fold(0.0, f64::max);
    Ok((ind, rows))
}

/// Default Besov grid: [`BESOV_POINTS`] log-spaced times over `[10^{−6}L², 4L²]`.
pub fn besov_time_grid(b: &BoxSpec) -> Vec<f64> {
    let l2 = b.period_l * b.period_l;
    let (lo, hi) = ((1e-6 * l2).ln(), (4.0 * l2).ln());
    (0..BESOV_POINTS).map(|i| (lo + (hi - lo) * i as f64 / (BESOV_POINTS - 1) as f64).exp()).collect()
}

/// `max_t t^{1/2}‖e^{tΔ}φ‖_{L^∞}` over `t_grid`, with the maximizing `t`.
pub fn besov_norm<F: Diagnosable>(field: &F, t_grid: &[f64]) -> (f64, f64) {
    let mut best = (0.0, t_grid.first().copied().unwrap_or(0.0));
    for (&t, s) in t_grid.iter().zip(field.heated_sup(t_grid)) {
        let v = t.sqrt() * s;
        if v > best.0 {
            best = (v, t);
        }
    }
    best
}

/// `‖φ‖_{L⁴} / (‖φ‖^{1/2}_{Ḃ^{−1}_{∞,∞}}‖φ‖^{1/2}_{Ḣ¹})` with the default Besov grid.
pub fn improved_sobolev_ratio<F: Diagnosable>(field: &F) -> Result<f64> {
    let h1 = sobolev_norm(field, 1.0);
    if h1 == 0.0 {
        return Err(Error::UndefinedRatio("improved Sobolev ratio of the zero field".into()));
    }
    let (b, _) = besov_norm(field, &besov_time_grid(field.box_spec()));
    Ok(lp_norm(field, 4.0) / (b * h1).sqrt())
}

/// Lattice `ℓ¹` norm `Σ|c(ξ)|` and grid `L^∞` norm; requires a finite `G¹_ρ` norm.
pub fn fourier_l1_and_linf<F: Diagnosable>(field: &F, rho: f64) -> Result<(f64, f64)> {
    if !gevrey_norm(field, 1.0, rho).is_finite() {
        return Err(Error::DataNotGevrey { r: rho });
    }
    let n = field.box_spec().len();
    let l1: f64 = (0..n).map(|i| field.magnitude_at(i)).sum();
    Ok((l1, lp_norm(field, f64::INFINITY)))
}

/// `‖(−Δ)^{s/2}φ‖_{L^p}`.
pub fn wsp_norm<F: Diagnosable>(field: &F, s: f64, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain(format!("Ẇ^{{s,p}} needs p ≥ 1, got {p}")));
    }
    if s == 0.0 {
        return Ok(lp_norm(field, p));
    }
    Ok(lp_norm(&field.multiplied(&|w: &WaveVector| w.norm.powf(s)), p))
}

/// Diagnostics of one state `(u, θ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GevreyReport {
    pub measured_radius: f64,
    pub r_squared: f64,
    pub guaranteed_rho: Option<f64>,
    pub shell_data: Vec<(f64, f64)>,
    /// Empty when the box has no guaranteed annulus (`L < 4π`).
    pub annulus_sups: Vec<AnnulusRow>,
    pub liouville_indicator: Option<f64>,
    /// `‖u‖_B + ‖θ‖_B`.
    pub besov_norm: f64,
    /// Larger of the two fields' ratios (zero fields skipped).
    pub improved_sobolev_ratio: Option<f64>,
}

pub fn gevrey_report(
    u: &SpectralVectorField,
    theta: &SpectralScalarField,
    guaranteed_rho: Option<f64>,
) -> Result<GevreyReport> {
    let rad = radius_estimate_pair(u, theta)?;
    let (liouville_indicator, annulus_sups) = match k_max(u.box_spec()) {
        Some(_) => {
            let (i, rows) = liouville_indicator(u, theta)?;
            (Some(i), rows)
        }
        None => (None, Vec::new()),
    };
    let grid = besov_time_grid(u.box_spec());
    let besov = besov_norm(u, &grid).0 + besov_norm(theta, &grid).0;
    let ratios: Vec<f64> =
        [(!u.is_zero()).then(|| improved_sobolev_ratio(u)), (!theta.is_zero()).then(|| improved_sobolev_ratio(theta))]
            .into_iter()
            .flatten()
            .collect::<Result<_>>()?;
    Ok(GevreyReport {
        measured_radius: rad.radius,
        r_squared: rad.r_squared,
        guaranteed_rho,
        shell_data: rad.shells,
        annulus_sups,
        liouville_indicator,
        besov_norm: besov,
        improved_sobolev_ratio: ratios.into_iter().reduce(f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn least_squares_recovers_exact_model() {
        let rows: Vec<[f64; 3]> = (1..10).map(|i| [1.0, i as f64, (i as f64).ln()]).collect();
        let y: Vec<f64> = rows.iter().map(|r| 0.3 - 1.7 * r[1] - 2.0 * r[2]).collect();
        let c = least_squares3(&rows, &y);
        assert!((c[0] - 0.3).abs() < 1e-10 && (c[1] + 1.7).abs() < 1e-10 && (c[2] + 2.0).abs() < 1e-10);
    }

    #[test]
    fn k_max_by_box() {
        assert_eq!(k_max(&BoxSpec::new(2.0 * PI, 8).unwrap()), None);
        assert_eq!(k_max(&BoxSpec::new(4.0 * PI, 8).unwrap()), Some(0));
        assert_eq!(k_max(&BoxSpec::new(32.0 * PI, 8).unwrap()), Some(3));
    }

    #[test]
    fn besov_grid_spans_the_box() {
        let b = BoxSpec::new(2.0, 8).unwrap();
        let g = besov_time_grid(&b);
        assert_eq!(g.len(), BESOV_POINTS);
        assert!((g[0] - 4e-6).abs() < 1e-18 && (g[63] - 16.0).abs() < 1e-12);
    }
}
