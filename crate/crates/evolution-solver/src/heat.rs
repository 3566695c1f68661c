//! Heat semigroup and Duhamel quadrature with exact exponential weights.
//!
//! On `[t_m, t_m + h]` the integrand is interpolated linearly, so per mode
//! `I_{m+1} = e^z I_m + h[(ψ₁ − ψ₂)(z) N_m + ψ₂(z) N_{m+1}]` with `z = −h|ξ|²`.

use spectral_core::{BoxSpec, Complex64, Error, Lattice, Result, SpectralScalarField, SpectralVectorField};

use crate::state::FlowState;

const SERIES_CUTOFF: f64 = 1e-4;

/// `ψ₁(z) = (e^z − 1)/z`.
pub fn psi1(z: f64) -> f64 {
    if z.abs() < SERIES_CUTOFF {
        1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0
    } else {
        z.exp_m1() / z
    }
}

/// `ψ₂(z) = (e^z − z − 1)/z²`.
pub fn psi2(z: f64) -> f64 {
    if z.abs() < SERIES_CUTOFF {
        0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

/// Per-mode weights of one quadrature step of length `h`.
#[derive(Clone, Debug)]
pub struct HeatWeights {
    decay: Vec<f64>,
    w_left: Vec<f64>,
    w_right: Vec<f64>,
}

impl HeatWeights {
    pub fn new(b: &BoxSpec, h: f64) -> Self {
        let lat = Lattice::for_box(b);
        let n = lat.len();
        let mut decay = Vec::with_capacity(n);
        let mut w_left = Vec::with_capacity(n);
        let mut w_right = Vec::with_capacity(n);
        for &k2 in lat.norm_sq() {
            let z = -h * k2;
            let (p1, p2) = (psi1(z), psi2(z));
            decay.push(z.exp());
            w_left.push(h * (p1 - p2));
            w_right.push(h * p2);
        }
        HeatWeights { decay, w_left, w_right }
    }

    fn step(&self, prev: &[Complex64], left: &[Complex64], right: &[Complex64]) -> Vec<Complex64> {
        (0..prev.len())
            .map(|i| self.decay[i] * prev[i] + self.w_left[i] * left[i] + self.w_right[i] * right[i])
            .collect()
    }

    fn step_scalar(
        &self,
        prev: &SpectralScalarField,
        left: &SpectralScalarField,
        right: &SpectralScalarField,
    ) -> SpectralScalarField {
        let c = self.step(prev.coeffs(), left.coeffs(), right.coeffs());
        SpectralScalarField::from_coeffs(prev.box_spec(), c).expect("length matches")
    }

    fn step_vector(
        &self,
        prev: &SpectralVectorField,
        left: &SpectralVectorField,
        right: &SpectralVectorField,
    ) -> SpectralVectorField {
        let parts = [0, 1, 2].map(|j| self.step_scalar(prev.component(j), left.component(j), right.component(j)));
        SpectralVectorField::from_components(parts).expect("components share a box")
    }

    /// One quadrature step applied to a velocity/temperature pair.
    pub fn step_state(&self, prev: &FlowState, left: &FlowState, right: &FlowState) -> FlowState {
        FlowState {
            u: self.step_vector(&prev.u, &left.u, &right.u),
            theta: self.step_scalar(&prev.theta, &left.theta, &right.theta),
        }
    }

    /// `e^{hΔ}` alone.
    pub fn decay_state(&self, s: &FlowState) -> FlowState {
        let dec = |f: &SpectralScalarField| f.map_indexed(|i, c| self.decay[i] * c);
        let [a, b, c] = s.u.components();
        FlowState {
            u: SpectralVectorField::from_components([dec(a), dec(b), dec(c)]).expect("components share a box"),
            theta: dec(&s.theta),
        }
    }

    /// `e^{hΔ}prev + h ψ₁ N`: the step for an integrand frozen at `N`.
    pub fn step_frozen(&self, prev: &FlowState, n: &FlowState) -> FlowState {
        let one = |p: &SpectralScalarField, q: &SpectralScalarField| {
            p.map_indexed(|i, c| self.decay[i] * c + (self.w_left[i] + self.w_right[i]) * q.coeffs()[i])
        };
        let parts = [0, 1, 2].map(|j| one(prev.u.component(j), n.u.component(j)));
        FlowState {
            u: SpectralVectorField::from_components(parts).expect("components share a box"),
            theta: one(&prev.theta, &n.theta),
        }
    }
}

fn check_dt(dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt >= 0.0) {
        return Err(Error::Domain(format!("heat propagation needs dt ≥ 0, got {dt}")));
    }
    Ok(())
}

/// `e^{tΔ}φ`.
pub fn heat_scalar(field: &SpectralScalarField, t: f64) -> Result<SpectralScalarField> {
    check_dt(t)?;
    let lat = field.lattice();
    let k2 = lat.norm_sq();
    Ok(field.map_indexed(|i, c| (-t * k2[i]).exp() * c))
}

pub fn heat_vector(field: &SpectralVectorField, t: f64) -> Result<SpectralVectorField> {
    check_dt(t)?;
    spectral_core::apply_multiplier_vector(field, |p| Complex64::new((-t * p.norm * p.norm).exp(), 0.0))
}

/// Multiplier `e^{−dt|ξ|²}` on every component.
pub fn heat_propagate(state: &FlowState, dt: f64) -> Result<FlowState> {
    Ok(FlowState { u: heat_vector(&state.u, dt)?, theta: heat_scalar(&state.theta, dt)? })
}

/// `∫₀ᵗ e^{(t−τ)Δ} N dτ = t ψ₁(−t|ξ|²) N` for a time-independent integrand.
pub fn constant_duhamel_scalar(field: &SpectralScalarField, t: f64) -> Result<SpectralScalarField> {
    check_dt(t)?;
    let lat = field.lattice();
    let k2 = lat.norm_sq();
    Ok(field.map_indexed(|i, c| t * psi1(-t * k2[i]) * c))
}

pub fn constant_duhamel_vector(field: &SpectralVectorField, t: f64) -> Result<SpectralVectorField> {
    check_dt(t)?;
    let [a, b, c] = field.components();
    let parts = [constant_duhamel_scalar(a, t)?, constant_duhamel_scalar(b, t)?, constant_duhamel_scalar(c, t)?];
    SpectralVectorField::from_components(parts)
}

pub fn constant_duhamel(state: &FlowState, t: f64) -> Result<FlowState> {
    Ok(FlowState { u: constant_duhamel_vector(&state.u, t)?, theta: constant_duhamel_scalar(&state.theta, t)? })
}

fn check_samples(len: usize, dt: f64) -> Result<()> {
    if len == 0 {
        return Err(Error::Domain("Duhamel quadrature needs at least one node".into()));
    }
    check_dt(dt)
}

/// `∫₀^{t_m} e^{(t_m−τ)Δ} N(τ) dτ` at every node, from samples `N(t_m)` spaced `dt` apart.
pub fn duhamel_series(samples: &[FlowState], dt: f64) -> Result<Vec<FlowState>> {
    check_samples(samples.len(), dt)?;
    let w = HeatWeights::new(samples[0].box_spec(), dt);
    let mut out = Vec::with_capacity(samples.len());
    out.push(FlowState::zeros(samples[0].box_spec()));
    for m in 1..samples.len() {
        let next = w.step_state(&out[m - 1], &samples[m - 1], &samples[m]);
        out.push(next);
    }
    Ok(out)
}

/// `∫₀ᵗ e^{(t−τ)Δ} N(τ) dτ` for scalar samples spaced `dt` apart, `t = (len − 1)·dt`.
pub fn duhamel_integral(samples: &[SpectralScalarField], dt: f64) -> Result<SpectralScalarField> {
    check_samples(samples.len(), dt)?;
    let w = HeatWeights::new(samples[0].box_spec(), dt);
    let mut acc = SpectralScalarField::zeros(samples[0].box_spec());
    for pair in samples.windows(2) {
        acc = w.step_scalar(&acc, &pair[0], &pair[1]);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_box() -> BoxSpec {
        BoxSpec::new(2.0 * PI, 8).unwrap()
    }

    #[test]
    fn psi_functions_are_continuous_at_the_cutoff() {
        for z in [-SERIES_CUTOFF, SERIES_CUTOFF] {
            let below = z * (1.0 - 1e-9);
            let above = z * (1.0 + 1e-9);
            assert!((psi1(below) - psi1(above)).abs() < 1e-12);
            // the closed form of ψ₂ loses about eps/|z| to cancellation just above the cutoff
            assert!((psi2(below) - psi2(above)).abs() < 1e-10);
        }
        assert_eq!(psi1(0.0), 1.0);
        assert_eq!(psi2(0.0), 0.5);
        assert!((psi1(-1.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((psi2(-2.0) - ((-2.0f64).exp() + 1.0) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn heat_single_mode_decays_by_e() {
        let b = unit_box();
        let f = SpectralScalarField::single_mode(&b, [1, 0, 0], Complex64::new(1.0, 0.0));
        let g = heat_scalar(&f, 1.0).unwrap();
        assert!((g.coeff([1, 0, 0]).re - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(heat_scalar(&f, 0.0).unwrap(), f);
        assert!(heat_scalar(&f, -1.0).is_err());
    }

    #[test]
    fn zero_integrand_integrates_to_zero() {
        let b = unit_box();
        let z = vec![SpectralScalarField::zeros(&b); 5];
        assert!(duhamel_integral(&z, 0.1).unwrap().is_zero());
    }

    #[test]
    fn constant_single_mode_integral() {
        let b = unit_box();
        let n0 = SpectralScalarField::single_mode(&b, [0, 1, 0], Complex64::new(0.3, -0.2));
        for (m, t) in [(4, 0.5), (16, 2.0)] {
            let samples = vec![n0.clone(); m + 1];
            let got = duhamel_integral(&samples, t / m as f64).unwrap();
            let want = n0.scaled(1.0 - (-t).exp());
            assert!((&got - &want).max_abs() < 1e-15);
            let exact = constant_duhamel_scalar(&n0, t).unwrap();
            assert!((&exact - &want).max_abs() < 1e-15);
        }
    }

    #[test]
    fn linear_in_time_single_mode_integral() {
        // N(τ) = τ N₀ at λ = |ξ|²: ∫₀ᵗ e^{−λ(t−τ)} τ dτ = t² ψ₂(−λt).
        let b = unit_box();
        let n0 = SpectralScalarField::single_mode(&b, [1, 1, 0], Complex64::new(1.0, 0.5));
        let lam = 2.0;
        for (m, t) in [(3, 0.3), (10, 1.7), (64, 0.5)] {
            let dt = t / m as f64;
            let samples: Vec<_> = (0..=m).map(|j| n0.scaled(j as f64 * dt)).collect();
            let got = duhamel_integral(&samples, dt).unwrap();
            // closed form from the antiderivative
            let exact = (lam * t - 1.0 + (-lam * t).exp()) / (lam * lam);
            let want = n0.scaled(exact);
            assert!((&got - &want).max_abs() < 1e-10 * n0.max_abs(), "m={m} t={t}");
        }
    }

    #[test]
    fn series_matches_pointwise_integrals() {
        let b = unit_box();
        let a = FlowState::new(
            SpectralVectorField::zeros(&b),
            SpectralScalarField::single_mode(&b, [2, 0, 1], Complex64::new(1.0, 0.0)),
        )
        .unwrap();
        let samples: Vec<_> = (0..6).map(|j| a.scaled((j as f64 * 0.7).sin())).collect();
        let series = duhamel_series(&samples, 0.05).unwrap();
        for m in 0..6 {
            let th: Vec<_> = samples[..=m].iter().map(|s| s.theta.clone()).collect();
            let direct = duhamel_integral(&th, 0.05).unwrap();
            assert!((&series[m].theta - &direct).max_abs() < 1e-16);
        }
    }
}
