//! Scalar and vector fields stored by their Fourier coefficients.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_complex::Complex64;

use crate::box_spec::BoxSpec;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, WaveVector};

/// Divergence tolerance attached to the `divergence_free` tag.
pub const DIV_TOL: f64 = 1e-12;

/// Anything made of scalar coefficient arrays on one box; norms are defined for all of them.
pub trait SpectralField {
    fn box_spec(&self) -> &BoxSpec;
    fn parts(&self) -> &[SpectralScalarField];
}

/// Coefficients `c(ξ)` of a real scalar field.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralScalarField {
    box_spec: BoxSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralScalarField {
    pub fn zeros(box_spec: &BoxSpec) -> Self {
        SpectralScalarField { box_spec: *box_spec, coeffs: vec![Complex64::default(); box_spec.len()] }
    }

    pub fn from_coeffs(box_spec: &BoxSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != box_spec.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for a box with {} lattice points",
                coeffs.len(),
                box_spec.len()
            )));
        }
        Ok(SpectralScalarField { box_spec: *box_spec, coeffs })
    }

    /// Evaluate `f` at every lattice point. Reality of the result is the caller's business.
    pub fn from_fn(box_spec: &BoxSpec, mut f: impl FnMut(&WaveVector) -> Complex64) -> Self {
        let lat = Lattice::for_box(box_spec);
        let coeffs = lat.points().iter().map(&mut f).collect();
        SpectralScalarField { box_spec: *box_spec, coeffs }
    }

    /// One conjugate pair: `c(k) = amp`, `c(−k) = conj(amp)`.
    pub fn single_mode(box_spec: &BoxSpec, k: [i32; 3], amp: Complex64) -> Self {
        let mut f = Self::zeros(box_spec);
        let lat = f.lattice();
        let i = lat.index_of(k);
        f.coeffs[i] = amp;
        f.coeffs[lat.partner()[i]] = amp.conj();
        f
    }

    pub fn box_spec(&self) -> &BoxSpec {
        &self.box_spec
    }

    pub fn lattice(&self) -> Arc<Lattice> {
        Lattice::for_box(&self.box_spec)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, k: [i32; 3]) -> Complex64 {
        self.coeffs[self.lattice().index_of(k)]
    }

    pub fn set_mode(&mut self, k: [i32; 3], amp: Complex64) {
        let lat = self.lattice();
        let i = lat.index_of(k);
        self.coeffs[i] = amp;
        self.coeffs[lat.partner()[i]] = amp.conj();
    }

    /// `max |c(ξ) − conj c(−ξ)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let lat = self.lattice();
        self.coeffs.iter().zip(lat.partner()).map(|(c, &p)| (c - self.coeffs[p].conj()).norm()).fold(0.0, f64::max)
    }

    /// Replace `c` by its Hermitian part `(c(ξ) + conj c(−ξ))/2`.
    pub fn symmetrize(&mut self) {
        let lat = self.lattice();
        let old = self.coeffs.clone();
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            *c = 0.5 * (old[i] + old[lat.partner()[i]].conj());
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Copy with every mode outside the dealiasing band set to zero.
    pub fn truncated(&self) -> Self {
        let lat = self.lattice();
        let coeffs = self
            .coeffs
            .iter()
            .zip(lat.retained())
            .map(|(&c, &keep)| if keep { c } else { Complex64::default() })
            .collect();
        SpectralScalarField { box_spec: self.box_spec, coeffs }
    }

    /// `L²` inner product `L³ Σ Re(a conj b)`.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_same_box(&self.box_spec, &other.box_spec);
        let s: f64 = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a * b.conj()).re).sum();
        self.box_spec.volume() * s
    }

    pub fn scaled(&self, a: f64) -> Self {
        SpectralScalarField { box_spec: self.box_spec, coeffs: self.coeffs.iter().map(|c| c * a).collect() }
    }

    /// `self ← self + a·x`.
    pub fn axpy(&mut self, a: f64, x: &Self) {
        assert_same_box(&self.box_spec, &x.box_spec);
        for (c, d) in self.coeffs.iter_mut().zip(&x.coeffs) {
            *c += d * a;
        }
    }

    /// Coefficient-wise map keeping the box.
    pub fn map_indexed(&self, mut f: impl FnMut(usize, Complex64) -> Complex64) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, &c)| f(i, c)).collect();
        SpectralScalarField { box_spec: self.box_spec, coeffs }
    }
}

fn assert_same_box(a: &BoxSpec, b: &BoxSpec) {
    assert!(a == b, "fields live on different boxes: {a:?} vs {b:?}");
}

/// Fail with a shape error unless all boxes agree.
pub fn ensure_same_box(boxes: &[&BoxSpec]) -> Result<()> {
    if let Some(first) = boxes.first() {
        if let Some(other) = boxes.iter().find(|b| **b != *first) {
            return Err(Error::ShapeMismatch(format!("box {first:?} vs {other:?}")));
        }
    }
    Ok(())
}

impl SpectralField for SpectralScalarField {
    fn box_spec(&self) -> &BoxSpec {
        &self.box_spec
    }
    fn parts(&self) -> &[SpectralScalarField] {
        std::slice::from_ref(self)
    }
}

/// Three scalar components on one box, optionally tagged divergence-free.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralVectorField {
    components: [SpectralScalarField; 3],
    divergence_free: bool,
}

impl SpectralVectorField {
    /// The zero field (trivially divergence-free).
    pub fn zeros(box_spec: &BoxSpec) -> Self {
        let z = SpectralScalarField::zeros(box_spec);
        SpectralVectorField { components: [z.clone(), z.clone(), z], divergence_free: true }
    }

    /// Untagged field from three components on a common box.
    pub fn from_components(components: [SpectralScalarField; 3]) -> Result<Self> {
        ensure_same_box(&[&components[0].box_spec, &components[1].box_spec, &components[2].box_spec])?;
        Ok(SpectralVectorField { components, divergence_free: false })
    }

    /// Tag as divergence-free if the relative divergence is within [`DIV_TOL`].
    pub fn try_tag_divergence_free(mut self) -> Result<Self> {
        let d = self.divergence_defect();
        if d > DIV_TOL {
            return Err(Error::Domain(format!("relative divergence {d:.3e} exceeds {DIV_TOL:e}")));
        }
        self.divergence_free = true;
        Ok(self)
    }

    pub(crate) fn with_tag(mut self, divergence_free: bool) -> Self {
        self.divergence_free = divergence_free;
        self
    }

    pub fn box_spec(&self) -> &BoxSpec {
        &self.components[0].box_spec
    }

    pub fn components(&self) -> &[SpectralScalarField; 3] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &SpectralScalarField {
        &self.components[j]
    }

    /// Mutable access drops the divergence-free tag.
    pub fn components_mut(&mut self) -> &mut [SpectralScalarField; 3] {
        self.divergence_free = false;
        &mut self.components
    }

    pub fn into_components(self) -> [SpectralScalarField; 3] {
        self.components
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_free
    }

    /// `max_ξ |ξ·ĉ(ξ)| / max_ξ |ĉ(ξ)|` (0 for the zero field).
    pub fn divergence_defect(&self) -> f64 {
        let lat = self.components[0].lattice();
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for (i, p) in lat.points().iter().enumerate() {
            let c = [self.components[0].coeffs[i], self.components[1].coeffs[i], self.components[2].coeffs[i]];
            let d = c[0] * p.xi[0] + c[1] * p.xi[1] + c[2] * p.xi[2];
            num = num.max(d.norm());
            den = den.max((c[0].norm_sqr() + c[1].norm_sqr() + c[2].norm_sqr()).sqrt());
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.components.iter().map(|c| c.hermitian_defect()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn truncated(&self) -> Self {
        SpectralVectorField {
            components: self.components.clone().map(|c| c.truncated()),
            divergence_free: self.divergence_free,
        }
    }

    pub fn inner(&self, other: &Self) -> f64 {
        (0..3).map(|j| self.components[j].inner(&other.components[j])).sum()
    }

    pub fn scaled(&self, a: f64) -> Self {
        SpectralVectorField {
            components: self.components.clone().map(|c| c.scaled(a)),
            divergence_free: self.divergence_free,
        }
    }

    pub fn axpy(&mut self, a: f64, x: &Self) {
        for j in 0..3 {
            self.components[j].axpy(a, &x.components[j]);
        }
        self.divergence_free &= x.divergence_free;
    }
}

impl SpectralField for SpectralVectorField {
    fn box_spec(&self) -> &BoxSpec {
        self.box_spec()
    }
    fn parts(&self) -> &[SpectralScalarField] {
        &self.components
    }
}

macro_rules! impl_linear_ops {
    ($t:ty) => {
        impl Add<&$t> for &$t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                let mut out = self.clone();
                out.axpy(1.0, rhs);
                out
            }
        }
        impl Sub<&$t> for &$t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                let mut out = self.clone();
                out.axpy(-1.0, rhs);
                out
            }
        }
        impl Add<&$t> for $t {
            type Output = $t;
            fn add(mut self, rhs: &$t) -> $t {
                self.axpy(1.0, rhs);
                self
            }
        }
        impl Sub<&$t> for $t {
            type Output = $t;
            fn sub(mut self, rhs: &$t) -> $t {
                self.axpy(-1.0, rhs);
                self
            }
        }
        impl AddAssign<&$t> for $t {
            fn add_assign(&mut self, rhs: &$t) {
                self.axpy(1.0, rhs);
            }
        }
        impl SubAssign<&$t> for $t {
            fn sub_assign(&mut self, rhs: &$t) {
                self.axpy(-1.0, rhs);
            }
        }
        impl Mul<f64> for &$t {
            type Output = $t;
            fn mul(self, a: f64) -> $t {
                self.scaled(a)
            }
        }
        impl Mul<f64> for $t {
            type Output = $t;
            fn mul(self, a: f64) -> $t {
                self.scaled(a)
            }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                self.scaled(-1.0)
            }
        }
    };
}

impl_linear_ops!(SpectralScalarField);
impl_linear_ops!(SpectralVectorField);
