#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spectral_core::{leray_project, BoxSpec, Complex64, SpectralScalarField, SpectralVectorField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mean-free Hermitian field with independent uniform coefficients on every mode.
pub fn random_scalar(b: &BoxSpec, r: &mut ChaCha8Rng) -> SpectralScalarField {
    let mut f =
        SpectralScalarField::from_fn(b, |_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)));
    f.symmetrize();
    f.coeffs_mut()[0] = Complex64::default();
    f
}

pub fn random_vector(b: &BoxSpec, r: &mut ChaCha8Rng) -> SpectralVectorField {
    SpectralVectorField::from_components([random_scalar(b, r), random_scalar(b, r), random_scalar(b, r)]).unwrap()
}

pub fn random_solenoidal(b: &BoxSpec, r: &mut ChaCha8Rng) -> SpectralVectorField {
    leray_project(&random_vector(b, r))
}

pub fn max_diff(a: &SpectralScalarField, b: &SpectralScalarField) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
