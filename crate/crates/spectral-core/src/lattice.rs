//! Wavenumber lattice of a box, built once per box and shared.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::box_spec::BoxSpec;

/// One lattice point: integer index `k`, wavevector `ξ = (2π/L)k` and `|ξ|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveVector {
    pub k: [i32; 3],
    pub xi: [f64; 3],
    pub norm: f64,
}

/// The `N³` lattice points in storage order plus the tables every operator needs.
#[derive(Debug)]
pub struct Lattice {
    box_spec: BoxSpec,
    points: Vec<WaveVector>,
    norm_sq: Vec<f64>,
    retained: Vec<bool>,
    partner: Vec<usize>,
}

/// Wavenumber for storage index `i` on an `n`-point axis.
pub fn wavenumber(i: usize, n: usize) -> i32 {
    if i < n / 2 {
        i as i32
    } else {
        i as i32 - n as i32
    }
}

/// Storage index of wavenumber `k` on an `n`-point axis (taken mod `n`).
pub fn axis_index(k: i32, n: usize) -> usize {
    k.rem_euclid(n as i32) as usize
}

impl Lattice {
    fn build(b: &BoxSpec) -> Self {
        let n = b.n();
        let dxi = b.dxi();
        let cut = b.dealias_cutoff();
        let mut points = Vec::with_capacity(b.len());
        let mut norm_sq = Vec::with_capacity(b.len());
        let mut retained = Vec::with_capacity(b.len());
        let mut partner = Vec::with_capacity(b.len());
        for i1 in 0..n {
            for i2 in 0..n {
                for i3 in 0..n {
                    let k = [wavenumber(i1, n), wavenumber(i2, n), wavenumber(i3, n)];
                    let ksq = k.iter().map(|&c| (c as i64) * (c as i64)).sum::<i64>() as f64;
                    let xi = [dxi * k[0] as f64, dxi * k[1] as f64, dxi * k[2] as f64];
                    points.push(WaveVector { k, xi, norm: dxi * ksq.sqrt() });
                    norm_sq.push(dxi * dxi * ksq);
                    retained.push(k.iter().all(|c| c.abs() <= cut));
                    let p = [(n - i1) % n, (n - i2) % n, (n - i3) % n];
                    partner.push((p[0] * n + p[1]) * n + p[2]);
                }
            }
        }
        Lattice { box_spec: *b, points, norm_sq, retained, partner }
    }

    /// Shared lattice for `b`, built on first use.
    pub fn for_box(b: &BoxSpec) -> Arc<Lattice> {
        type Cache = Mutex<HashMap<(u64, usize, u64), Arc<Lattice>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard.entry(b.cache_key()).or_insert_with(|| Arc::new(Lattice::build(b))).clone()
    }

    pub fn box_spec(&self) -> &BoxSpec {
        &self.box_spec
    }

    pub fn points(&self) -> &[WaveVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `|ξ|²` per point.
    pub fn norm_sq(&self) -> &[f64] {
        &self.norm_sq
    }

    /// Whether the point survives the dealiasing truncation.
    pub fn retained(&self) -> &[bool] {
        &self.retained
    }

    /// Storage index of `−ξ`.
    pub fn partner(&self) -> &[usize] {
        &self.partner
    }

    /// Storage index of the integer wavevector `k` (wrapped mod `N`).
    pub fn index_of(&self, k: [i32; 3]) -> usize {
        let n = self.box_spec.n();
        (axis_index(k[0], n) * n + axis_index(k[1], n)) * n + axis_index(k[2], n)
    }
}

/// The lattice of `box_spec`: `N³` wavevectors `ξ = (2π/L)k`, `k ∈ [−N/2, N/2)³`.
pub fn wavenumber_lattice(box_spec: &BoxSpec) -> Arc<Lattice> {
    Lattice::for_box(box_spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_box_lattice() {
        let lat = wavenumber_lattice(&BoxSpec::new(2.0 * PI, 8).unwrap());
        assert_eq!(lat.len(), 512);
        let e1 = lat.points()[lat.index_of([1, 0, 0])];
        assert_eq!(e1.k, [1, 0, 0]);
        assert!((e1.xi[0] - 1.0).abs() < 1e-15 && e1.norm == 1.0);
        let max = lat.points().iter().map(|p| p.norm).fold(0.0, f64::max);
        assert!((max - 4.0 * 3f64.sqrt()).abs() < 1e-12);
        let ks: Vec<i32> = (0..8).map(|i| wavenumber(i, 8)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
    }

    #[test]
    fn smallest_nonzero_wavenumber() {
        let lat = wavenumber_lattice(&BoxSpec::new(4.0 * PI, 8).unwrap());
        let min = lat.points().iter().map(|p| p.norm).filter(|&r| r > 0.0).fold(f64::INFINITY, f64::min);
        assert!((min - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partners_are_involutive() {
        let lat = wavenumber_lattice(&BoxSpec::new(1.0, 10).unwrap());
        for (i, &p) in lat.partner().iter().enumerate() {
            assert_eq!(lat.partner()[p], i);
            let (a, b) = (lat.points()[i].k, lat.points()[p].k);
            for j in 0..3 {
                assert!(a[j] + b[j] == 0 || a[j] == -5);
            }
        }
    }

    #[test]
    fn retained_band_excludes_nyquist() {
        let lat = wavenumber_lattice(&BoxSpec::new(1.0, 8).unwrap());
        let kept = lat.retained().iter().filter(|&&r| r).count();
        assert_eq!(kept, 125);
        assert!(!lat.retained()[lat.index_of([-4, 0, 0])]);
    }
}
