//! Fourier representation of real fields on the periodic box `[0, L)³`.
//!
//! A field is stored through its coefficients `c(ξ)` with
//! `φ(x) = Σ_ξ c(ξ) e^{iξ·x}`, so that `‖φ‖²_{L²} = L³ Σ |c(ξ)|²`.
//! Coefficients are laid out row-major over `(i₁, i₂, i₃) ∈ [0, N)³`, where
//! index `i` carries the wavenumber `k = i` for `i < N/2` and `k = i − N` otherwise.
//! Every PDE field is mean-free: the `ξ = 0` coefficient is kept at zero.

pub mod box_spec;
pub mod error;
pub mod fft;
pub mod field;
pub mod io;
pub mod lattice;
pub mod nonlinear;
pub mod norms;
pub mod ops;
pub mod oracle;

pub use box_spec::BoxSpec;
pub use error::{Error, Result};
pub use field::{SpectralField, SpectralScalarField, SpectralVectorField};
pub use lattice::{wavenumber_lattice, Lattice, WaveVector};
pub use nonlinear::{nonlinear_div_scalar, nonlinear_div_tensor, nonlinear_terms, NonlinearTerms};
pub use norms::{gevrey_norm, lp_norm, sobolev_norm};
pub use ops::{
    apply_multiplier, apply_multiplier_vector, divergence, inverse_laplacian, inverse_laplacian_vector, leray_project,
    transform_to_physical, transform_to_spectral,
};
pub use oracle::convolution_oracle;

pub use num_complex::Complex64;
