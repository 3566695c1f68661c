//! Cached three-dimensional complex FFTs built from rustfft line transforms.
//!
//! Each pass transforms the contiguous last axis and then rotates the axes
//! `(a, b, c) → (c, a, b)`; three passes transform every axis and restore the layout.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plans(n: usize) -> Arc<Plans> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Plans>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(Plans { forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) })
        })
        .clone()
}

fn transform(data: &mut Vec<Complex64>, n: usize, inverse: bool) {
    assert_eq!(data.len(), n * n * n, "buffer is not N³");
    let p = plans(n);
    let fft = if inverse { &p.inverse } else { &p.forward };
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let mut tmp = vec![Complex64::default(); data.len()];
    for _ in 0..3 {
        fft.process_with_scratch(data, &mut scratch);
        for a in 0..n {
            for b in 0..n {
                let row = (a * n + b) * n;
                for c in 0..n {
                    tmp[(c * n + a) * n + b] = data[row + c];
                }
            }
        }
        std::mem::swap(data, &mut tmp);
    }
}

/// Unnormalized forward DFT, `X_k = Σ_j x_j e^{−2πi k·j/N}`.
pub fn forward(data: &mut Vec<Complex64>, n: usize) {
    transform(data, n, false);
}

/// Unnormalized inverse DFT, `x_j = Σ_k X_k e^{2πi k·j/N}`.
pub fn inverse(data: &mut Vec<Complex64>, n: usize) {
    transform(data, n, true);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(x: &[Complex64], n: usize, sign: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); x.len()];
        let w = sign * 2.0 * std::f64::consts::PI / n as f64;
        for k1 in 0..n {
            for k2 in 0..n {
                for k3 in 0..n {
                    let mut s = Complex64::default();
                    for j1 in 0..n {
                        for j2 in 0..n {
                            for j3 in 0..n {
                                let ph = w * ((k1 * j1 + k2 * j2 + k3 * j3) % n) as f64;
                                s += x[(j1 * n + j2) * n + j3] * Complex64::from_polar(1.0, ph);
                            }
                        }
                    }
                    out[(k1 * n + k2) * n + k3] = s;
                }
            }
        }
        out
    }

    #[test]
    fn matches_naive_dft() {
        let n = 8;
        let x: Vec<Complex64> =
            (0..n * n * n).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
        let mut y = x.clone();
        forward(&mut y, n);
        let want = naive(&x, n, -1.0);
        for (a, b) in y.iter().zip(&want) {
            assert!((a - b).norm() < 1e-11);
        }
        let mut z = x.clone();
        inverse(&mut z, n);
        let want = naive(&x, n, 1.0);
        for (a, b) in z.iter().zip(&want) {
            assert!((a - b).norm() < 1e-11);
        }
    }
}
