//! Transforms and Fourier multipliers.

use num_complex::Complex64;

use crate::box_spec::BoxSpec;
use crate::error::{Error, Result};
use crate::fft;
use crate::field::{SpectralScalarField, SpectralVectorField};
use crate::lattice::{Lattice, WaveVector};

/// Relative Hermitian defect accepted by the inverse transform.
const HERMITIAN_TOL: f64 = 1e-10;

/// Grid samples `φ(x_j)`, `x_j = j·L/N`, row-major over `j ∈ [0, N)³`.
pub fn transform_to_physical(field: &SpectralScalarField) -> Result<Vec<f64>> {
    let defect = field.hermitian_defect();
    if defect > HERMITIAN_TOL * field.max_abs() {
        return Err(Error::SymmetryViolation { defect });
    }
    let (x, _) = physical_pair(field.coeffs(), None, field.box_spec().n());
    Ok(x)
}

/// Coefficients of real grid samples. The output is exactly Hermitian; its mean is kept.
pub fn transform_to_spectral(box_spec: &BoxSpec, samples: &[f64]) -> Result<SpectralScalarField> {
    if samples.len() != box_spec.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} samples for a box with {} grid points",
            samples.len(),
            box_spec.len()
        )));
    }
    let (c, _) = spectral_pair(box_spec, samples, None);
    SpectralScalarField::from_coeffs(box_spec, c)
}

/// Inverse transforms of one or two Hermitian coefficient arrays using a single complex FFT.
/// Returns the real samples of `a` and of `b` (empty when `b` is absent).
pub fn physical_pair(a: &[Complex64], b: Option<&[Complex64]>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let i = Complex64::i();
    let mut z: Vec<Complex64> = match b {
        Some(b) => a.iter().zip(b).map(|(x, y)| x + i * y).collect(),
        None => a.to_vec(),
    };
    fft::inverse(&mut z, n);
    let x = z.iter().map(|c| c.re).collect();
    let y = if b.is_some() { z.iter().map(|c| c.im).collect() } else { Vec::new() };
    (x, y)
}

/// Forward transforms (normalized by `1/N³`) of one or two real sample arrays with a single complex FFT.
/// Both outputs are exactly Hermitian.
pub fn spectral_pair(box_spec: &BoxSpec, x: &[f64], y: Option<&[f64]>) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = box_spec.n();
    let scale = 1.0 / box_spec.len() as f64;
    let mut z: Vec<Complex64> = match y {
        Some(y) => x.iter().zip(y).map(|(&a, &b)| Complex64::new(a, b)).collect(),
        None => x.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
    };
    fft::forward(&mut z, n);
    let lat = Lattice::for_box(box_spec);
    let partner = lat.partner();
    let mut a = Vec::with_capacity(z.len());
    let mut b = Vec::with_capacity(if y.is_some() { z.len() } else { 0 });
    for (k, zk) in z.iter().enumerate() {
        let zp = z[partner[k]].conj();
        a.push(0.5 * scale * (zk + zp));
        if y.is_some() {
            // (Z(k) − conj Z(−k)) / 2i
            let d = 0.5 * scale * (zk - zp);
            b.push(Complex64::new(d.im, -d.re));
        }
    }
    (a, b)
}

/// `ĉ_out(ξ) = m(ξ)·ĉ(ξ)` for `ξ ≠ 0`; the zero mode is left untouched.
pub fn apply_multiplier(
    field: &SpectralScalarField,
    m: impl Fn(&WaveVector) -> Complex64,
) -> Result<SpectralScalarField> {
    let lat = field.lattice();
    let mut out = field.clone();
    for (i, (c, p)) in out.coeffs_mut().iter_mut().zip(lat.points()).enumerate() {
        if i == 0 {
            continue;
        }
        let v = m(p);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::MultiplierDomain { k: p.k });
        }
        *c *= v;
    }
    Ok(out)
}

/// The same multiplier on each component. A scalar multiplier keeps the divergence-free tag.
pub fn apply_multiplier_vector(
    field: &SpectralVectorField,
    m: impl Fn(&WaveVector) -> Complex64,
) -> Result<SpectralVectorField> {
    let [a, b, c] = field.components();
    let out = SpectralVectorField::from_components([
        apply_multiplier(a, &m)?,
        apply_multiplier(b, &m)?,
        apply_multiplier(c, &m)?,
    ])?;
    Ok(out.with_tag(field.is_divergence_free()))
}

/// `(−Δ)^{−1}`: divide by `|ξ|²`, zero mode set to 0.
pub fn inverse_laplacian(field: &SpectralScalarField) -> SpectralScalarField {
    let lat = field.lattice();
    let k2 = lat.norm_sq();
    field.map_indexed(|i, c| if i == 0 { Complex64::default() } else { c / k2[i] })
}

pub fn inverse_laplacian_vector(field: &SpectralVectorField) -> SpectralVectorField {
    let [a, b, c] = field.components();
    SpectralVectorField::from_components([inverse_laplacian(a), inverse_laplacian(b), inverse_laplacian(c)])
        .expect("components share a box")
        .with_tag(field.is_divergence_free())
}

/// Leray projector `ĉ − ξ(ξ·ĉ)/|ξ|²`; zero mode set to 0 and the output tagged divergence-free.
pub fn leray_project(field: &SpectralVectorField) -> SpectralVectorField {
    let lat = field.component(0).lattice();
    let [a, b, c] = field.components();
    let (a, b, c) = (a.coeffs(), b.coeffs(), c.coeffs());
    let n = a.len();
    let mut out = [vec![Complex64::default(); n], vec![Complex64::default(); n], vec![Complex64::default(); n]];
    for (i, p) in lat.points().iter().enumerate().skip(1) {
        let v = [a[i], b[i], c[i]];
        let d = (v[0] * p.xi[0] + v[1] * p.xi[1] + v[2] * p.xi[2]) / lat.norm_sq()[i];
        for j in 0..3 {
            out[j][i] = v[j] - d * p.xi[j];
        }
    }
    let b = field.box_spec();
    let [x, y, z] = out.map(|c| SpectralScalarField::from_coeffs(b, c).expect("length matches"));
    SpectralVectorField::from_components([x, y, z]).expect("components share a box").with_tag(true)
}

/// `div v`, i.e. `i ξ·ĉ(ξ)`.
pub fn divergence(field: &SpectralVectorField) -> SpectralScalarField {
    let lat = field.component(0).lattice();
    let [a, b, c] = field.components();
    let i = Complex64::i();
    let coeffs = lat
        .points()
        .iter()
        .enumerate()
        .map(|(m, p)| i * (a.coeffs()[m] * p.xi[0] + b.coeffs()[m] * p.xi[1] + c.coeffs()[m] * p.xi[2]))
        .collect();
    SpectralScalarField::from_coeffs(field.box_spec(), coeffs).expect("length matches")
}

/// `∇φ`, i.e. `i ξ ĉ(ξ)` per component.
pub fn gradient(field: &SpectralScalarField) -> SpectralVectorField {
    let lat = field.lattice();
    let i = Complex64::i();
    let comp = |j: usize| field.map_indexed(|m, c| i * lat.points()[m].xi[j] * c);
    SpectralVectorField::from_components([comp(0), comp(1), comp(2)]).expect("components share a box")
}
