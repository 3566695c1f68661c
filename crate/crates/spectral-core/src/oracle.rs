//! Direct lattice convolution, the independent check on the pseudospectral products.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ensure_same_box, SpectralScalarField};

/// Largest resolution the oracle accepts.
pub const ORACLE_MAX_N: usize = 12;

/// `ĉ(ξ) = Σ_η â(ξ−η) b̂(η)` over the retained band, inputs truncated to the same band.
/// This is the Fourier side of the dealiased grid product `a·b`.
pub fn convolution_oracle(a: &SpectralScalarField, b: &SpectralScalarField) -> Result<SpectralScalarField> {
    ensure_same_box(&[a.box_spec(), b.box_spec()])?;
    let n = a.box_spec().n();
    if n > ORACLE_MAX_N {
        return Err(Error::ResolutionTooLarge { n, limit: ORACLE_MAX_N });
    }
    let lat = a.lattice();
    let cut = a.box_spec().dealias_cutoff();
    let band: Vec<usize> = (0..lat.len()).filter(|&i| lat.retained()[i]).collect();
    let mut out = vec![Complex64::default(); lat.len()];
    for &x in &band {
        let kx = lat.points()[x].k;
        let mut s = Complex64::default();
        for &y in &band {
            let ky = lat.points()[y].k;
            let d = [kx[0] - ky[0], kx[1] - ky[1], kx[2] - ky[2]];
            if d.iter().all(|c| c.abs() <= cut) {
                s += a.coeffs()[lat.index_of(d)] * b.coeffs()[y];
            }
        }
        out[x] = s;
    }
    SpectralScalarField::from_coeffs(a.box_spec(), out)
}
