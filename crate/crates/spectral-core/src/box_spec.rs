//! The periodic box and its dealiasing rule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_dealias() -> f64 {
    2.0 / 3.0
}

/// Side length `L`, modes per axis `N` and the fraction of modes kept around products.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub period_l: f64,
    pub resolution_n: usize,
    #[serde(default = "default_dealias")]
    pub dealias_fraction: f64,
}

impl BoxSpec {
    /// Box with the default 2/3 dealiasing rule.
    pub fn new(period_l: f64, resolution_n: usize) -> Result<Self> {
        let b = BoxSpec { period_l, resolution_n, dealias_fraction: default_dealias() };
        b.validate()?;
        Ok(b)
    }

    pub fn with_dealias(mut self, fraction: f64) -> Result<Self> {
        self.dealias_fraction = fraction;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.period_l.is_finite() && self.period_l > 0.0) {
            return Err(Error::InvalidBox(format!("period L = {} must be positive", self.period_l)));
        }
        if self.resolution_n < 8 || !self.resolution_n.is_multiple_of(2) {
            return Err(Error::InvalidBox(format!("resolution N = {} must be even and at least 8", self.resolution_n)));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return Err(Error::InvalidBox(format!("dealias fraction {} must lie in (0, 1]", self.dealias_fraction)));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.resolution_n
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.resolution_n.pow(3)
    }

    /// Lattice spacing `2π/L`.
    pub fn dxi(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.period_l
    }

    /// Box volume, the Parseval weight.
    pub fn volume(&self) -> f64 {
        self.period_l.powi(3)
    }

    /// Largest integer `K` kept by the product truncation, `|k_j| ≤ K` per axis.
    /// The rule is the strict inequality `|k_j| < fraction·N/2`.
    pub fn dealias_cutoff(&self) -> i32 {
        let lim = self.dealias_fraction * self.resolution_n as f64 / 2.0 - 1e-9;
        (lim.ceil() as i32 - 1).max(0)
    }

    /// Largest `|ξ|` on the lattice, reached at the corner `k = (−N/2, −N/2, −N/2)`.
    pub fn xi_max(&self) -> f64 {
        self.dxi() * (self.resolution_n as f64 / 2.0) * 3f64.sqrt()
    }

    /// Key used by the lattice and FFT caches.
    pub(crate) fn cache_key(&self) -> (u64, usize, u64) {
        (self.period_l.to_bits(), self.resolution_n, self.dealias_fraction.to_bits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_boxes() {
        assert!(BoxSpec::new(1.0, 6).is_err());
        assert!(BoxSpec::new(1.0, 9).is_err());
        assert!(BoxSpec::new(0.0, 8).is_err());
        assert!(BoxSpec::new(1.0, 8).unwrap().with_dealias(0.0).is_err());
    }

    #[test]
    fn two_thirds_cutoffs() {
        let k = |n| BoxSpec::new(1.0, n).unwrap().dealias_cutoff();
        assert_eq!(k(8), 2);
        assert_eq!(k(12), 3);
        assert_eq!(k(32), 10);
        assert_eq!(k(64), 21);
        // fraction 1 keeps everything except the Nyquist plane
        let full = BoxSpec::new(1.0, 8).unwrap().with_dealias(1.0).unwrap();
        assert_eq!(full.dealias_cutoff(), 3);
    }
}
