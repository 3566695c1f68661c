//! Sobolev, Gevrey and Lebesgue norms.

use crate::field::SpectralField;
use crate::lattice::Lattice;
use crate::ops::physical_pair;

/// `‖φ‖_{Ḣ^s} = (L³ Σ_{ξ≠0} |ξ|^{2s} |c(ξ)|²)^{1/2}`, summed over components.
pub fn sobolev_norm<F: SpectralField + ?Sized>(field: &F, s: f64) -> f64 {
    let b = field.box_spec();
    let lat = Lattice::for_box(b);
    let w: Vec<f64> = lat.norm_sq().iter().map(|&k2| if k2 > 0.0 { k2.powf(s) } else { 0.0 }).collect();
    let mut acc = 0.0;
    for part in field.parts() {
        acc += part.coeffs().iter().zip(&w).map(|(c, w)| w * c.norm_sqr()).sum::<f64>();
    }
    (b.volume() * acc).sqrt()
}

/// `‖e^{r|ξ|} φ‖_{Ḣ^s}`, accumulated in log space. Returns `+∞` when the sum leaves the `f64` range.
pub fn gevrey_norm<F: SpectralField + ?Sized>(field: &F, s: f64, r: f64) -> f64 {
    assert!(r >= 0.0, "Gevrey radius must be nonnegative");
    if r == 0.0 {
        return sobolev_norm(field, s);
    }
    let b = field.box_spec();
    let lat = Lattice::for_box(b);
    let logs: Vec<f64> = field
        .parts()
        .iter()
        .flat_map(|part| {
            part.coeffs().iter().zip(lat.points()).zip(lat.norm_sq()).filter_map(|((c, p), &k2)| {
                let a = c.norm_sqr();
                (k2 > 0.0 && a > 0.0).then(|| s * k2.ln() + 2.0 * r * p.norm + a.ln())
            })
        })
        .collect();
    let Some(max) = logs.iter().copied().reduce(f64::max) else {
        return 0.0;
    };
    let sum: f64 = logs.iter().map(|l| (l - max).exp()).sum();
    let log_sq = b.volume().ln() + max + sum.ln();
    (0.5 * log_sq).exp()
}

/// Grid samples of `|φ|` (Euclidean magnitude for vector fields).
pub fn physical_magnitude<F: SpectralField + ?Sized>(field: &F) -> Vec<f64> {
    let n = field.box_spec().n();
    let parts = field.parts();
    if parts.len() == 1 {
        return physical_pair(parts[0].coeffs(), None, n).0.iter().map(|x| x.abs()).collect();
    }
    let mut sq = vec![0.0; field.box_spec().len()];
    for pair in parts.chunks(2) {
        let (x, y) = physical_pair(pair[0].coeffs(), pair.get(1).map(|p| p.coeffs()), n);
        for (i, s) in sq.iter_mut().enumerate() {
            *s += x[i] * x[i] + y.get(i).map_or(0.0, |v| v * v);
        }
    }
    sq.into_iter().map(f64::sqrt).collect()
}

/// `(L/N)³`-weighted quadrature `L^p` norm of the grid samples; `p = ∞` is the grid maximum.
pub fn lp_norm<F: SpectralField + ?Sized>(field: &F, p: f64) -> f64 {
    assert!(p >= 1.0, "L^p needs p ≥ 1");
    lp_of_samples(&physical_magnitude(field), field.box_spec().period_l, p)
}

/// The same quadrature applied to precomputed nonnegative samples.
pub fn lp_of_samples(samples: &[f64], period_l: f64, p: f64) -> f64 {
    if p.is_infinite() {
        return samples.iter().copied().fold(0.0, f64::max);
    }
    let cell = period_l.powi(3) / samples.len() as f64;
    let max = samples.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    // scale by the max so high powers do not overflow
    let s: f64 = samples.iter().map(|&x| (x / max).powf(p)).sum();
    max * (cell * s).powf(1.0 / p)
}
