//! Forcing data `(f⃗, g, g⃗)` with a prescribed Gevrey radius and calibrated norm.
//!
//! Coefficients follow `c(ξ) = A·e^{iφ(seed,k)}·e^{−r|ξ|}·|ξ|^{−β}` on the dealiasing band,
//! with `A` fixed so that `‖·‖_{Ḣ^s}` equals the requested amplitude. Phases come from a
//! ChaCha stream addressed by the integer wavevector, so a field does not depend on `N`
//! except through which modes exist.

use std::f64::consts::PI;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use spectral_core::{
    gevrey_norm, leray_project, sobolev_norm, BoxSpec, Complex64, Error, Result, SpectralScalarField,
    SpectralVectorField,
};

/// Shape of the coefficient envelope.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumShape {
    /// `e^{−r|ξ|}|ξ|^{−β}` on every retained mode.
    #[default]
    ExpDecay,
    /// One conjugate pair at `mode`.
    SingleMode,
    /// The exp-decay envelope restricted to `|ξ| ≤ band_limit`.
    BandLimited,
}

fn default_beta() -> f64 {
    2.0
}

/// Recipe for one forcing field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceSpec {
    pub radius_r: f64,
    pub sobolev_exponent_s: f64,
    pub amplitude: f64,
    pub seed: u64,
    #[serde(default)]
    pub spectrum_shape: SpectrumShape,
    /// Algebraic decay exponent `β`.
    #[serde(default = "default_beta")]
    pub decay_beta: f64,
    /// Integer wavevector used by the single-mode shape (default `(1, 0, 0)`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<[i32; 3]>,
    /// Cutoff `|ξ|` for the band-limited shape.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band_limit: Option<f64>,
}

impl ForceSpec {
    pub fn exp_decay(radius_r: f64, sobolev_exponent_s: f64, amplitude: f64, seed: u64) -> Self {
        ForceSpec {
            radius_r,
            sobolev_exponent_s,
            amplitude,
            seed,
            spectrum_shape: SpectrumShape::ExpDecay,
            decay_beta: default_beta(),
            mode: None,
            band_limit: None,
        }
    }

    pub fn single_mode(k: [i32; 3], sobolev_exponent_s: f64, amplitude: f64, seed: u64) -> Self {
        ForceSpec {
            spectrum_shape: SpectrumShape::SingleMode,
            mode: Some(k),
            ..Self::exp_decay(0.0, sobolev_exponent_s, amplitude, seed)
        }
    }

    pub fn band_limited(radius_r: f64, sobolev_exponent_s: f64, amplitude: f64, seed: u64, limit: f64) -> Self {
        ForceSpec {
            spectrum_shape: SpectrumShape::BandLimited,
            band_limit: Some(limit),
            ..Self::exp_decay(radius_r, sobolev_exponent_s, amplitude, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius_r.is_finite() && self.radius_r >= 0.0) {
            return Err(Error::Domain(format!("radius_r = {} must be finite and nonnegative", self.radius_r)));
        }
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(Error::Domain(format!("amplitude = {} must be finite and nonnegative", self.amplitude)));
        }
        if !self.sobolev_exponent_s.is_finite() || !self.decay_beta.is_finite() {
            return Err(Error::Domain("sobolev_exponent_s and decay_beta must be finite".into()));
        }
        match self.spectrum_shape {
            SpectrumShape::BandLimited if !self.band_limit.is_some_and(|c| c > 0.0) => {
                Err(Error::Domain("band-limited shape needs a positive band_limit".into()))
            }
            SpectrumShape::SingleMode if self.mode == Some([0, 0, 0]) => {
                Err(Error::Domain("single-mode shape needs a nonzero mode".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Unit-modulus phase addressed by `(seed, stream, k)`.
pub fn phase(seed: u64, stream: u64, k: [i32; 3]) -> Complex64 {
    const OFF: i64 = 1 << 20;
    let code = k.iter().fold(0u128, |acc, &c| (acc << 21) | (c as i64 + OFF) as u128);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(code * 2);
    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * u)
}

/// Unnormalized envelope on the lattice, Hermitian by construction.
fn raw_scalar(spec: &ForceSpec, b: &BoxSpec, stream: u64) -> SpectralScalarField {
    let mut f = SpectralScalarField::zeros(b);
    let lat = f.lattice();
    match spec.spectrum_shape {
        SpectrumShape::SingleMode => {
            let k = spec.mode.unwrap_or([1, 0, 0]);
            f.set_mode(k, phase(spec.seed, stream, k));
        }
        SpectrumShape::ExpDecay | SpectrumShape::BandLimited => {
            let limit = match spec.spectrum_shape {
                SpectrumShape::BandLimited => spec.band_limit.unwrap_or(f64::INFINITY),
                _ => f64::INFINITY,
            };
            let c = f.coeffs_mut();
            for (i, p) in lat.points().iter().enumerate() {
                let j = lat.partner()[i];
                if i >= j || !lat.retained()[i] || p.norm > limit {
                    continue;
                }
                let env = (-spec.radius_r * p.norm).exp() * p.norm.powf(-spec.decay_beta);
                let z = phase(spec.seed, stream, p.k) * env;
                c[i] = z;
                c[j] = z.conj();
            }
        }
    }
    f
}

/// Scalar datum with `‖·‖_{Ḣ^s} = amplitude`.
pub fn make_gevrey_scalar(spec: &ForceSpec, b: &BoxSpec) -> Result<SpectralScalarField> {
    spec.validate()?;
    b.validate()?;
    if spec.amplitude == 0.0 {
        return Ok(SpectralScalarField::zeros(b));
    }
    let raw = raw_scalar(spec, b, 0);
    let norm = sobolev_norm(&raw, spec.sobolev_exponent_s);
    if norm == 0.0 {
        return Err(Error::Domain("the requested spectrum has no modes on this box".into()));
    }
    Ok(raw.scaled(spec.amplitude / norm))
}

/// Vector datum, one independent phase stream per component; Leray-projected and
/// recalibrated when `divergence_free` is set.
pub fn make_gevrey_vector(spec: &ForceSpec, b: &BoxSpec, divergence_free: bool) -> Result<SpectralVectorField> {
    spec.validate()?;
    b.validate()?;
    if spec.amplitude == 0.0 {
        return Ok(SpectralVectorField::zeros(b));
    }
    let raw = SpectralVectorField::from_components([0, 1, 2].map(|s| raw_scalar(spec, b, s)))?;
    let raw = if divergence_free { leray_project(&raw) } else { raw };
    let norm = sobolev_norm(&raw, spec.sobolev_exponent_s);
    if norm == 0.0 {
        return Err(Error::Domain("the requested spectrum has no divergence-free part on this box".into()));
    }
    Ok(raw.scaled(spec.amplitude / norm))
}

/// `C_r = (3/(2r))²`.
pub fn control_gevrey_constant(r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("control constant needs r > 0, got {r}")));
    }
    Ok((3.0 / (2.0 * r)).powi(2))
}

/// `sup_t ‖e^{(2r/3)√t|ξ|} φ‖_{Ḣ¹} / ‖φ‖_{G^{−1}_r}` over the given times.
pub fn control_gevrey_ratio<F: spectral_core::SpectralField>(field: &F, r: f64, times: &[f64]) -> Result<f64> {
    let den = gevrey_norm(field, -1.0, r);
    if den == 0.0 {
        return Err(Error::UndefinedRatio("zero forcing".into()));
    }
    if !den.is_finite() {
        return Err(Error::DataNotGevrey { r });
    }
    Ok(times.iter().map(|&t| gevrey_norm(field, 1.0, 2.0 * r / 3.0 * t.sqrt()) / den).fold(0.0, f64::max))
}

/// `n` uniformly spaced times in `(0, 1]`.
pub fn unit_time_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64 / n as f64).collect()
}
