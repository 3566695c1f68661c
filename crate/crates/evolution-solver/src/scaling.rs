//! Measured growth of `B` and `L` in `T`, and a heat-kernel estimate on the lattice.
//!
//! Trials are time-constant trajectories `e(t) ≡ (v, ϑ)`. For those the Duhamel
//! integrals are exact, `‖B(e, e)(t)‖_{Ḣ¹}` is nondecreasing in `t`, and the
//! `E_T` sup is attained at `t = T`.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};
use spectral_core::field::ensure_same_box;
use spectral_core::nonlinear::{product_with_physical, PhysicalVector};
use spectral_core::{
    leray_project, nonlinear_terms, sobolev_norm, transform_to_spectral, BoxSpec, Complex64, Error, Result,
    SpectralScalarField, SpectralVectorField,
};

use crate::heat::{constant_duhamel_scalar, constant_duhamel_vector, duhamel_series};
use crate::state::{FlowState, TimeGrid};

/// Log-log fit of the worst-case ratio against `T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub t_values: Vec<f64>,
    /// Max over trials of the ratio, per `T`.
    pub ratios: Vec<f64>,
    /// Least-squares slope of `ln ratio` against `ln T`.
    pub slope: f64,
    pub intercept: f64,
    /// Nominal exponent (`1/4` for `B`, `1/2` for `L`).
    pub nominal_exponent: f64,
    /// Least-squares `C` in `ratio ≈ C·T^{nominal}`.
    pub fitted_constant: f64,
    /// `max_T ratio(T) / (C·T^{nominal})`.
    pub envelope_factor: f64,
    pub trials_used: usize,
}

impl ScalingFit {
    fn new(t_values: &[f64], ratios: Vec<f64>, nominal: f64, trials_used: usize) -> Self {
        let x: Vec<f64> = t_values.iter().map(|t| t.ln()).collect();
        let y: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
        let slope = sxy / sxx;
        let log_c = y.iter().zip(&x).map(|(b, a)| b - nominal * a).sum::<f64>() / n;
        let fitted_constant = log_c.exp();
        let envelope_factor =
            ratios.iter().zip(t_values).map(|(r, t)| r / (fitted_constant * t.powf(nominal))).fold(0.0, f64::max);
        ScalingFit {
            t_values: t_values.to_vec(),
            ratios,
            slope,
            intercept: my - slope * mx,
            nominal_exponent: nominal,
            fitted_constant,
            envelope_factor,
            trials_used,
        }
    }

    /// `ratio(T) ≤ slack·C·T^{nominal}` at every measured `T`.
    pub fn within_envelope(&self, slack: f64) -> bool {
        self.envelope_factor <= slack
    }

    /// Worst-case ratio at a given measured `T`.
    pub fn ratio_at(&self, t: f64) -> Option<f64> {
        self.t_values.iter().position(|&s| s == t).map(|i| self.ratios[i])
    }
}

fn check_t_values(t_values: &[f64]) -> Result<()> {
    if t_values.len() < 3 {
        return Err(Error::Domain(format!("a scaling fit needs at least 3 horizons, got {}", t_values.len())));
    }
    if t_values.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::Domain("horizons must be positive".into()));
    }
    let lo = t_values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = t_values.iter().copied().fold(0.0, f64::max);
    if hi <= lo {
        return Err(Error::Domain("horizons must not all coincide".into()));
    }
    Ok(())
}

fn worst_ratios(per_trial: impl Iterator<Item = Vec<f64>>, k: usize) -> (Vec<f64>, usize) {
    let mut best = vec![0.0f64; k];
    let mut used = 0;
    for r in per_trial {
        used += 1;
        for (b, x) in best.iter_mut().zip(r) {
            *b = b.max(x);
        }
    }
    (best, used)
}

/// `‖B(e, e)‖_{E_T} / ‖e‖²_{E_T}` at each `T` for one time-constant trial.
pub fn bilinear_ratios(trial: &FlowState, t_values: &[f64]) -> Option<Vec<f64>> {
    let e = trial.h1();
    if e == 0.0 {
        return None;
    }
    let nl = nonlinear_terms(&trial.u, &trial.theta).expect("state shares one box");
    let mom = leray_project(&nl.momentum);
    Some(
        t_values
            .iter()
            .map(|&t| {
                let bu = constant_duhamel_vector(&mom, t).expect("t > 0");
                let bt = constant_duhamel_scalar(&nl.heat, t).expect("t > 0");
                (sobolev_norm(&bu, 1.0) + sobolev_norm(&bt, 1.0)) / (e * e)
            })
            .collect(),
    )
}

/// `‖L(e)‖_{E_T} / (‖e‖_{E_T}‖g⃗‖_{Ḣ^{1/2}})` at each `T` for one time-constant trial.
pub fn linear_ratios(trial: &FlowState, gvec: &PhysicalVector, g_half: f64, t_values: &[f64]) -> Option<Vec<f64>> {
    let e = trial.h1();
    if e == 0.0 {
        return None;
    }
    let lu = leray_project(&product_with_physical(&trial.theta, gvec).expect("same box"));
    Some(
        t_values
            .iter()
            .map(|&t| sobolev_norm(&constant_duhamel_vector(&lu, t).expect("t > 0"), 1.0) / (e * g_half))
            .collect(),
    )
}

/// Worst case of `‖B(e, e)‖_{E_T}/‖e‖²_{E_T}` over the trials, fitted against `T`.
/// Zero trials are skipped.
pub fn measure_bilinear_constant(trials: &[FlowState], t_values: &[f64]) -> Result<ScalingFit> {
    check_t_values(t_values)?;
    let (ratios, used) = worst_ratios(trials.iter().filter_map(|s| bilinear_ratios(s, t_values)), t_values.len());
    if used == 0 {
        return Err(Error::UndefinedRatio("every bilinear trial is zero".into()));
    }
    if ratios.contains(&0.0) {
        return Err(Error::UndefinedRatio("B vanishes on every trial".into()));
    }
    Ok(ScalingFit::new(t_values, ratios, 0.25, used))
}

/// Worst case of `‖L(e)‖_{E_T}/(‖e‖_{E_T}‖g⃗‖_{Ḣ^{1/2}})` over the trials, fitted against `T`.
pub fn measure_linear_constant(
    trials: &[FlowState],
    t_values: &[f64],
    gvec: &SpectralVectorField,
) -> Result<ScalingFit> {
    check_t_values(t_values)?;
    if let Some(t) = trials.first() {
        ensure_same_box(&[t.box_spec(), gvec.box_spec()])?;
    }
    let g_half = sobolev_norm(gvec, 0.5);
    if g_half == 0.0 {
        return Err(Error::UndefinedRatio("g⃗ = 0, so L ≡ 0".into()));
    }
    let g = PhysicalVector::new(gvec);
    let (ratios, used) =
        worst_ratios(trials.iter().filter_map(|s| linear_ratios(s, &g, g_half, t_values)), t_values.len());
    if used == 0 {
        return Err(Error::UndefinedRatio("every linear trial is zero".into()));
    }
    if ratios.contains(&0.0) {
        return Err(Error::UndefinedRatio("L vanishes on every trial".into()));
    }
    Ok(ScalingFit::new(t_values, ratios, 0.5, used))
}

fn periodic_gaussian(b: &BoxSpec, center: [f64; 3], width: f64) -> Result<SpectralScalarField> {
    let n = b.n();
    let l = b.period_l;
    let h = l / n as f64;
    let wrap = |d: f64| (d + 0.5 * l).rem_euclid(l) - 0.5 * l;
    let axis: Vec<Vec<f64>> = (0..3)
        .map(|j| (0..n).map(|i| (-wrap(i as f64 * h - center[j]).powi(2) / (2.0 * width * width)).exp()).collect())
        .collect();
    let mut samples = Vec::with_capacity(b.len());
    for a in &axis[0] {
        for c in &axis[1] {
            for d in &axis[2] {
                samples.push(a * c * d);
            }
        }
    }
    let mut f = transform_to_spectral(b, &samples)?;
    f.coeffs_mut()[0] = Complex64::default();
    Ok(f)
}

/// Localized trials: `v = curl(aG_w(x − x₁))`, `ϑ = G_w(x − x₂)` with Gaussian `G_w`,
/// random centers and direction `a`, widths log-stratified over `[w_min, w_max]`.
pub fn packet_trials(b: &BoxSpec, count: usize, widths: (f64, f64), seed: u64) -> Result<Vec<FlowState>> {
    let (lo, hi) = widths;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::Domain(format!("packet widths must satisfy 0 < w_min ≤ w_max, got ({lo}, {hi})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Uniform::new(0.0, 1.0).expect("valid range");
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let s = (j as f64 + unit.sample(&mut rng)) / count as f64;
        let w = lo * (hi / lo).powf(s);
        let x1: [f64; 3] = std::array::from_fn(|_| b.period_l * unit.sample(&mut rng));
        let x2: [f64; 3] = std::array::from_fn(|_| b.period_l * unit.sample(&mut rng));
        let a: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        let psi = periodic_gaussian(b, x1, w)?;
        let lat = psi.lattice();
        let i = Complex64::i();
        let comp = |j: usize| {
            let (p, q) = ((j + 1) % 3, (j + 2) % 3);
            psi.map_indexed(|m, c| {
                let xi = lat.points()[m].xi;
                i * (xi[p] * a[q] - xi[q] * a[p]) * c
            })
        };
        let u = SpectralVectorField::from_components([comp(0), comp(1), comp(2)])?;
        out.push(FlowState::new(u, periodic_gaussian(b, x2, w)?)?);
    }
    Ok(out)
}

/// Largest ratios seen in the two heat-kernel inequalities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HeatLemmaReport {
    /// `‖∫₀ᵗe^{(t−τ)Δ}φ‖_{Ḣ¹} / ∫₀ᵗ‖φ‖_{Ḣ¹}`.
    pub max_ratio_h1: f64,
    /// `‖∫₀ᵗe^{(t−τ)Δ}φ‖_{Ḣ¹} / (∫₀ᵗ‖φ‖²_{L²})^{1/2}`.
    pub max_ratio_l2: f64,
    pub trials: usize,
}

/// Both heat-kernel ratios over every node of every trial; integrals of norms by the trapezoid rule.
/// Each trial is a scalar time series on `grid`.
pub fn heat_lemma_check(trials: &[Vec<SpectralScalarField>], grid: &TimeGrid) -> Result<HeatLemmaReport> {
    let dt = grid.dt();
    let mut rep = HeatLemmaReport::default();
    for phi in trials {
        if phi.len() != grid.steps + 1 {
            return Err(Error::ShapeMismatch(format!("{} samples for {} nodes", phi.len(), grid.steps + 1)));
        }
        rep.trials += 1;
        let b = *phi[0].box_spec();
        let states: Vec<FlowState> =
            phi.iter().map(|p| FlowState { u: SpectralVectorField::zeros(&b), theta: p.clone() }).collect();
        let ints = duhamel_series(&states, dt)?;
        let h1: Vec<f64> = phi.iter().map(|p| sobolev_norm(p, 1.0)).collect();
        let l2sq: Vec<f64> = phi.iter().map(|p| sobolev_norm(p, 0.0).powi(2)).collect();
        let (mut a, mut c) = (0.0, 0.0);
        for m in 1..phi.len() {
            a += 0.5 * dt * (h1[m - 1] + h1[m]);
            c += 0.5 * dt * (l2sq[m - 1] + l2sq[m]);
            let lhs = sobolev_norm(&ints[m].theta, 1.0);
            if a > 0.0 {
                rep.max_ratio_h1 = rep.max_ratio_h1.max(lhs / a);
            }
            if c > 0.0 {
                rep.max_ratio_l2 = rep.max_ratio_l2.max(lhs / c.sqrt());
            }
        }
    }
    Ok(rep)
}

/// Random time series `φ(t) = cos(ω₁t)A + sin(ω₂t)B` with smooth random `A`, `B`.
pub fn oscillating_trials(
    b: &BoxSpec,
    count: usize,
    grid: &TimeGrid,
    seed: u64,
) -> Result<Vec<Vec<SpectralScalarField>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Uniform::new(0.0, 1.0).expect("valid range");
    let lat = spectral_core::Lattice::for_box(b);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let decay = 0.2 + 2.0 * unit.sample(&mut rng);
        let mut random_field = || {
            let mut f = SpectralScalarField::zeros(b);
            let c = f.coeffs_mut();
            for (i, p) in lat.points().iter().enumerate() {
                let j = lat.partner()[i];
                if i >= j || !lat.retained()[i] {
                    continue;
                }
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                let z = Complex64::new(re, im) * (-decay * p.norm).exp();
                c[i] = z;
                c[j] = z.conj();
            }
            f
        };
        let (a, bb) = (random_field(), random_field());
        let w1 = 20.0 * unit.sample(&mut rng);
        let w2 = 20.0 * unit.sample(&mut rng);
        out.push(grid.nodes().iter().map(|&t| &a.scaled((w1 * t).cos()) + &bb.scaled((w2 * t).sin())).collect());
    }
    Ok(out)
}
