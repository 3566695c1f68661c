//! Dealiased pseudospectral quadratic terms `div(u⊗u)` and `div(θu)`.
//!
//! Inputs are truncated to the dealiasing band, multiplied on the grid, transformed
//! back and truncated again. Real fields are transformed two at a time.

use num_complex::Complex64;

use crate::box_spec::BoxSpec;
use crate::error::Result;
use crate::field::{ensure_same_box, SpectralScalarField, SpectralVectorField};
use crate::lattice::Lattice;
use crate::ops::{physical_pair, spectral_pair};

/// `div(u⊗u)` and `div(θu)` from one set of transforms.
#[derive(Clone, Debug)]
pub struct NonlinearTerms {
    pub momentum: SpectralVectorField,
    pub heat: SpectralScalarField,
}

/// Grid samples of a truncated vector field, reusable across many products.
#[derive(Clone, Debug)]
pub struct PhysicalVector {
    box_spec: BoxSpec,
    samples: [Vec<f64>; 3],
}

impl PhysicalVector {
    pub fn new(v: &SpectralVectorField) -> Self {
        let t = v.truncated();
        let n = v.box_spec().n();
        let [a, b, c] = t.components();
        let (x, y) = physical_pair(a.coeffs(), Some(b.coeffs()), n);
        let (z, _) = physical_pair(c.coeffs(), None, n);
        PhysicalVector { box_spec: *v.box_spec(), samples: [x, y, z] }
    }

    pub fn samples(&self) -> &[Vec<f64>; 3] {
        &self.samples
    }
}

fn truncate_in_place(c: &mut [Complex64], retained: &[bool]) {
    for (v, &keep) in c.iter_mut().zip(retained) {
        if !keep {
            *v = Complex64::default();
        }
    }
}

fn scalar(b: &BoxSpec, c: Vec<Complex64>) -> SpectralScalarField {
    SpectralScalarField::from_coeffs(b, c).expect("length matches")
}

fn vector(parts: [SpectralScalarField; 3]) -> SpectralVectorField {
    SpectralVectorField::from_components(parts).expect("components share a box")
}

/// `Σ_j iξ_j T_j` restricted to the retained band.
fn contract(lat: &Lattice, t: [&[Complex64]; 3]) -> Vec<Complex64> {
    let i = Complex64::i();
    lat.points()
        .iter()
        .enumerate()
        .map(|(m, p)| {
            if lat.retained()[m] {
                i * (t[0][m] * p.xi[0] + t[1][m] * p.xi[1] + t[2][m] * p.xi[2])
            } else {
                Complex64::default()
            }
        })
        .collect()
}

fn products(u: &SpectralVectorField, theta: Option<&SpectralScalarField>, tensor: bool) -> NonlinearTerms {
    let b = *u.box_spec();
    let n = b.n();
    let lat = Lattice::for_box(&b);
    let ut = u.truncated();
    let [c1, c2, c3] = ut.components();
    // A zero temperature takes the θ-free path, so the coupled and uncoupled terms agree bitwise.
    let tt = theta.filter(|t| !t.is_zero()).map(|t| t.truncated());
    let (u1, u2) = physical_pair(c1.coeffs(), Some(c2.coeffs()), n);
    let (u3, th) = physical_pair(c3.coeffs(), tt.as_ref().map(|t| t.coeffs()), n);
    let mul = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x * y).collect() };

    let momentum = if tensor {
        let (mut t11, mut t12) = spectral_pair(&b, &mul(&u1, &u1), Some(&mul(&u1, &u2)));
        let (mut t13, mut t22) = spectral_pair(&b, &mul(&u1, &u3), Some(&mul(&u2, &u2)));
        let (mut t23, mut t33) = spectral_pair(&b, &mul(&u2, &u3), Some(&mul(&u3, &u3)));
        for t in [&mut t11, &mut t12, &mut t13, &mut t22, &mut t23, &mut t33] {
            truncate_in_place(t, lat.retained());
        }
        vector([
            scalar(&b, contract(&lat, [&t11, &t12, &t13])),
            scalar(&b, contract(&lat, [&t12, &t22, &t23])),
            scalar(&b, contract(&lat, [&t13, &t23, &t33])),
        ])
    } else {
        SpectralVectorField::zeros(&b)
    };

    let heat = if tt.is_some() {
        let (mut q1, mut q2) = spectral_pair(&b, &mul(&th, &u1), Some(&mul(&th, &u2)));
        let (mut q3, _) = spectral_pair(&b, &mul(&th, &u3), None);
        for q in [&mut q1, &mut q2, &mut q3] {
            truncate_in_place(q, lat.retained());
        }
        scalar(&b, contract(&lat, [&q1, &q2, &q3]))
    } else {
        SpectralScalarField::zeros(&b)
    };
    NonlinearTerms { momentum, heat }
}

/// `div(u⊗u)` with 2/3-rule dealiasing.
pub fn nonlinear_div_tensor(u: &SpectralVectorField) -> SpectralVectorField {
    products(u, None, true).momentum
}

/// `div(θu)` with 2/3-rule dealiasing.
pub fn nonlinear_div_scalar(theta: &SpectralScalarField, u: &SpectralVectorField) -> Result<SpectralScalarField> {
    ensure_same_box(&[theta.box_spec(), u.box_spec()])?;
    Ok(products(u, Some(theta), false).heat)
}

/// Both quadratic terms of the coupled system.
pub fn nonlinear_terms(u: &SpectralVectorField, theta: &SpectralScalarField) -> Result<NonlinearTerms> {
    ensure_same_box(&[theta.box_spec(), u.box_spec()])?;
    Ok(products(u, Some(theta), true))
}

/// Dealiased product `a·b` of two scalars.
pub fn dealiased_product(a: &SpectralScalarField, b: &SpectralScalarField) -> Result<SpectralScalarField> {
    ensure_same_box(&[a.box_spec(), b.box_spec()])?;
    let bx = *a.box_spec();
    let (x, y) = physical_pair(a.truncated().coeffs(), Some(b.truncated().coeffs()), bx.n());
    let p: Vec<f64> = x.iter().zip(&y).map(|(s, t)| s * t).collect();
    let (mut c, _) = spectral_pair(&bx, &p, None);
    truncate_in_place(&mut c, Lattice::for_box(&bx).retained());
    Ok(scalar(&bx, c))
}

/// Dealiased product `θ·g⃗` against a pre-transformed vector.
pub fn product_with_physical(theta: &SpectralScalarField, g: &PhysicalVector) -> Result<SpectralVectorField> {
    ensure_same_box(&[theta.box_spec(), &g.box_spec])?;
    let b = g.box_spec;
    let lat = Lattice::for_box(&b);
    let (th, _) = physical_pair(theta.truncated().coeffs(), None, b.n());
    let mul = |s: &[f64]| -> Vec<f64> { th.iter().zip(s).map(|(x, y)| x * y).collect() };
    let [g1, g2, g3] = &g.samples;
    let (mut p1, mut p2) = spectral_pair(&b, &mul(g1), Some(&mul(g2)));
    let (mut p3, _) = spectral_pair(&b, &mul(g3), None);
    for p in [&mut p1, &mut p2, &mut p3] {
        truncate_in_place(p, lat.retained());
    }
    Ok(vector([scalar(&b, p1), scalar(&b, p2), scalar(&b, p3)]))
}

/// Dealiased product `θ·g⃗`.
pub fn product_scalar_vector(theta: &SpectralScalarField, g: &SpectralVectorField) -> Result<SpectralVectorField> {
    product_with_physical(theta, &PhysicalVector::new(g))
}
