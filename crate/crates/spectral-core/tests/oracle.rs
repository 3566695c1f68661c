//! Pseudospectral products against the direct convolution.

mod common;

use common::*;
use spectral_core::nonlinear::dealiased_product;
use spectral_core::{
    convolution_oracle, nonlinear_div_scalar, nonlinear_div_tensor, nonlinear_terms, BoxSpec, Complex64,
    SpectralScalarField,
};

/// `Σ_j iξ_j T_j` built from oracle products.
fn oracle_divergence(b: &BoxSpec, t: [SpectralScalarField; 3]) -> SpectralScalarField {
    let i = Complex64::i();
    let lat = spectral_core::wavenumber_lattice(b);
    SpectralScalarField::from_fn(b, |p| {
        let m = lat.index_of(p.k);
        i * (t[0].coeffs()[m] * p.xi[0] + t[1].coeffs()[m] * p.xi[1] + t[2].coeffs()[m] * p.xi[2])
    })
}

fn rel(a: &SpectralScalarField, b: &SpectralScalarField) -> f64 {
    max_diff(a, b) / b.max_abs()
}

#[test]
fn tensor_divergence_matches_oracle() {
    for (n, l) in [(8, 2.0 * std::f64::consts::PI), (12, 3.7)] {
        let b = BoxSpec::new(l, n).unwrap();
        let mut r = rng(n as u64);
        for _ in 0..5 {
            let u = random_solenoidal(&b, &mut r);
            let got = nonlinear_div_tensor(&u);
            let c = u.components();
            for i in 0..3 {
                let t = [0, 1, 2].map(|j| convolution_oracle(&c[i], &c[j]).unwrap());
                let want = oracle_divergence(&b, t);
                assert!(rel(got.component(i), &want) < 1e-12, "N={n} component {i}");
            }
        }
    }
}

#[test]
fn scalar_divergence_matches_oracle() {
    let b = BoxSpec::new(5.0, 8).unwrap();
    let mut r = rng(17);
    for _ in 0..10 {
        let u = random_solenoidal(&b, &mut r);
        let th = random_scalar(&b, &mut r);
        let got = nonlinear_div_scalar(&th, &u).unwrap();
        let t = [0, 1, 2].map(|j| convolution_oracle(&th, u.component(j)).unwrap());
        assert!(rel(&got, &oracle_divergence(&b, t)) < 1e-12);
        let both = nonlinear_terms(&u, &th).unwrap();
        assert_eq!(both.heat, got);
        let alone = nonlinear_div_tensor(&u);
        for j in 0..3 {
            assert!(rel(both.momentum.component(j), alone.component(j)) < 1e-13);
        }
    }
}

#[test]
fn zero_temperature_reduces_bitwise() {
    let b = BoxSpec::new(5.0, 12).unwrap();
    let u = random_solenoidal(&b, &mut rng(5));
    let both = nonlinear_terms(&u, &SpectralScalarField::zeros(&b)).unwrap();
    assert_eq!(both.momentum, nonlinear_div_tensor(&u));
    assert!(both.heat.is_zero());
}

#[test]
fn plain_products_match_oracle() {
    let b = BoxSpec::new(1.0, 10).unwrap();
    let mut r = rng(3);
    for _ in 0..10 {
        let f = random_scalar(&b, &mut r);
        let g = random_scalar(&b, &mut r);
        let want = convolution_oracle(&f, &g).unwrap();
        assert!(rel(&dealiased_product(&f, &g).unwrap(), &want) < 1e-12);
    }
}

#[test]
fn weighted_convolution_dominates() {
    // |e^{r|ξ|}(a∗b)(ξ)| ≤ ((e^{r|·|}|a|) ∗ (e^{r|·|}|b|))(ξ)
    let b = BoxSpec::new(2.0 * std::f64::consts::PI, 8).unwrap();
    let mut rg = rng(99);
    let r = 0.8;
    for _ in 0..10 {
        let f = random_scalar(&b, &mut rg);
        let g = random_scalar(&b, &mut rg);
        let lhs = convolution_oracle(&f, &g).unwrap();
        let lift = |h: &SpectralScalarField| {
            let lat = h.lattice();
            h.map_indexed(|m, c| Complex64::new(c.norm() * (r * lat.points()[m].norm).exp(), 0.0))
        };
        let rhs = convolution_oracle(&lift(&f), &lift(&g)).unwrap();
        let lat = lhs.lattice();
        for (m, p) in lat.points().iter().enumerate() {
            let l = lhs.coeffs()[m].norm() * (r * p.norm).exp();
            assert!(l <= rhs.coeffs()[m].re * (1.0 + 1e-12) + 1e-300);
        }
    }
}
