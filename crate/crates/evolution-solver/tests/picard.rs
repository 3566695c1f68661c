use evolution_solver::*;
use forcing_factory::{make_gevrey_scalar, make_gevrey_vector, ForceSpec};
use spectral_core::{BoxSpec, Complex64, SpectralScalarField, SpectralVectorField};
use stationary_solver::{solve_stationary, Forcing, StationaryConfig};
use std::f64::consts::PI;

fn small_data(b: &BoxSpec, seed: u64, amp: f64) -> (FlowState, Forcing) {
    let v = make_gevrey_vector(&ForceSpec::exp_decay(1.0, 1.0, amp, seed), b, true).unwrap();
    let th = make_gevrey_scalar(&ForceSpec::exp_decay(1.0, 1.0, amp, seed + 1), b).unwrap();
    let f = make_gevrey_vector(&ForceSpec::exp_decay(1.0, 1.0, amp, seed + 2), b, true).unwrap();
    let g = make_gevrey_scalar(&ForceSpec::exp_decay(1.0, 1.0, amp, seed + 3), b).unwrap();
    let gv = make_gevrey_vector(&ForceSpec::exp_decay(1.0, 0.5, 0.05, seed + 4), b, false).unwrap();
    (FlowState::new(v, th).unwrap(), Forcing::new(f, g, gv).unwrap())
}

#[test]
fn zero_data_gives_zero_in_one_iteration() {
    let b = BoxSpec::new(2.0 * PI, 8).unwrap();
    let grid = TimeGrid::new(0.5, 8).unwrap();
    let z = FlowState::zeros(&b);
    let sol = picard_mild_solve(&z.u, &z.theta, &Forcing::zeros(&b), &grid, &PicardConfig::default()).unwrap();
    assert_eq!(sol.iterations, 1);
    assert!(sol.trajectory.states.iter().all(FlowState::is_zero));
    assert!(sol.in_ball && !sol.beyond_t0);
}

#[test]
fn temperature_free_run_matches_navier_stokes_path_bitwise() {
    let b = BoxSpec::new(2.0 * PI, 12).unwrap();
    let v = make_gevrey_vector(&ForceSpec::exp_decay(0.5, 1.0, 0.3, 5), &b, true).unwrap();
    let f = make_gevrey_vector(&ForceSpec::exp_decay(0.5, 1.0, 0.3, 6), &b, true).unwrap();
    let data = Forcing::new(f.clone(), SpectralScalarField::zeros(&b), SpectralVectorField::zeros(&b)).unwrap();
    let grid = TimeGrid::new(0.25, 8).unwrap();
    let cfg = PicardConfig::default();
    let coupled = picard_mild_solve(&v, &SpectralScalarField::zeros(&b), &data, &grid, &cfg).unwrap();
    let ns = picard_navier_stokes(&v, &f, &grid, &cfg).unwrap();
    assert_eq!(coupled.iterations, ns.iterations);
    for (a, c) in coupled.trajectory.states.iter().zip(&ns.trajectory.states) {
        assert_eq!(a.u, c.u);
        assert!(a.theta.is_zero());
    }
}

#[test]
fn small_data_stays_in_ball_and_divergence_free() {
    let b = BoxSpec::new(2.0 * PI, 16).unwrap();
    let (s, data) = small_data(&b, 11, 0.02);
    let k = compute_t0(&s.u, &s.theta, &data, 1.0).unwrap();
    let grid = TimeGrid::new(k.t0, 32).unwrap();
    let sol = picard_mild_solve(&s.u, &s.theta, &data, &grid, &PicardConfig::default()).unwrap();
    assert!(sol.in_ball, "max iterate {} vs 3δ₀ {}", sol.max_iterate_norm, 3.0 * k.delta0);
    assert!(sol.trajectory.max_divergence_defect() <= 1e-12);
    assert!(sol.trajectory.e_t_norm() <= 3.0 * k.delta0);
}

#[test]
fn horizon_beyond_t0_is_flagged_not_refused() {
    let b = BoxSpec::new(2.0 * PI, 8).unwrap();
    let th = SpectralScalarField::single_mode(&b, [1, 0, 0], Complex64::new(0.0, 0.01));
    let gv = make_gevrey_vector(&ForceSpec::exp_decay(1.0, 0.5, 1.0, 3), &b, false).unwrap();
    let data = Forcing::new(SpectralVectorField::zeros(&b), SpectralScalarField::zeros(&b), gv).unwrap();
    let v = SpectralVectorField::zeros(&b);
    let k = compute_t0(&v, &th, &data, 1.0).unwrap();
    assert!(k.t0 < 0.5);
    let grid = TimeGrid::new(2.0 * k.t0, 8).unwrap();
    let sol = picard_mild_solve(&v, &th, &data, &grid, &PicardConfig::default()).unwrap();
    assert!(sol.beyond_t0);
}

#[test]
fn large_data_reports_contraction_failure() {
    let b = BoxSpec::new(2.0 * PI, 12).unwrap();
    let v = make_gevrey_vector(&ForceSpec::exp_decay(0.2, 1.0, 400.0, 9), &b, true).unwrap();
    let th = SpectralScalarField::zeros(&b);
    let grid = TimeGrid::new(0.5, 8).unwrap();
    let err = picard_mild_solve(&v, &th, &Forcing::zeros(&b), &grid, &PicardConfig::default()).unwrap_err();
    assert!(
        matches!(err, spectral_core::Error::ContractionFailure { .. } | spectral_core::Error::NonConvergence { .. }),
        "{err:?}"
    );
}

#[test]
fn single_mode_data_contracts_within_measured_constants() {
    let b = BoxSpec::new(4.0, 16).unwrap();
    let gv = make_gevrey_vector(&ForceSpec::exp_decay(0.1, 0.5, 0.2, 21), &b, false).unwrap();
    let th = SpectralScalarField::single_mode(&b, [1, 0, 0], Complex64::new(0.0, 0.01));
    let u = SpectralVectorField::from_components([
        SpectralScalarField::zeros(&b),
        SpectralScalarField::single_mode(&b, [0, 0, 1], Complex64::new(0.01, 0.0)),
        SpectralScalarField::zeros(&b),
    ])
    .unwrap();
    let data = Forcing::new(SpectralVectorField::zeros(&b), SpectralScalarField::zeros(&b), gv.clone()).unwrap();
    let k = compute_t0(&u, &th, &data, 1.0).unwrap();
    let t = k.t0;
    let grid = TimeGrid::new(t, 32).unwrap();
    let sol = picard_mild_solve(&u, &th, &data, &grid, &PicardConfig::default()).unwrap();
    let rate = sol.contraction_ratio().expect("several iterations");

    let mut trials = packet_trials(&b, 24, (0.2, 1.2), 3).unwrap();
    trials.push(FlowState::new(u.clone(), th.clone()).unwrap());
    let ts = [t / 8.0, t / 4.0, t / 2.0, t];
    let c_b = measure_bilinear_constant(&trials, &ts).unwrap().ratio_at(t).unwrap();
    let fl = measure_linear_constant(&trials, &ts, &gv).unwrap();
    let c_l = fl.ratio_at(t).unwrap() * spectral_core::sobolev_norm(&gv, 0.5);
    let bound = 9.0 * k.delta0 * c_b + c_l;
    assert!(bound < 1.0, "bound {bound}");
    assert!(rate <= bound, "rate {rate} bound {bound}");
}

#[test]
fn stationary_solution_is_a_fixed_point_of_the_evolution() {
    let b = BoxSpec::new(2.0 * PI, 16).unwrap();
    let (_, data) = small_data(&b, 31, 0.05);
    let st = solve_stationary(&data, &StationaryConfig::default()).unwrap();
    let k = compute_t1(&st.u, &st.theta, &data, 1.0, 1.0, T1Mode::Uniform).unwrap();
    let grid = TimeGrid::new(k.t1.unwrap(), 64).unwrap();
    let rep = stationary_drift(&st, &data, &grid, &PicardConfig::default()).unwrap();
    assert!(rep.max_relative_drift <= 1e-6, "drift {}", rep.max_relative_drift);
}

#[test]
fn zero_state_has_zero_drift() {
    let b = BoxSpec::new(2.0 * PI, 8).unwrap();
    let grid = TimeGrid::new(0.5, 8).unwrap();
    let rep =
        stationary_drift_check(&FlowState::zeros(&b), &Forcing::zeros(&b), &grid, &PicardConfig::default()).unwrap();
    assert_eq!(rep.max_relative_drift, 0.0);
}

#[test]
fn perturbed_stationary_state_drifts_visibly() {
    let b = BoxSpec::new(2.0 * PI, 16).unwrap();
    let (_, data) = small_data(&b, 41, 0.05);
    let st = solve_stationary(&data, &StationaryConfig::default()).unwrap();
    let eps_mode = SpectralScalarField::single_mode(&b, [1, 0, 0], Complex64::new(1.0, 0.0));
    let base = FlowState::new(st.u.clone(), st.theta.clone()).unwrap();
    let eps = 1e-3 * base.h1() / spectral_core::sobolev_norm(&eps_mode, 1.0);
    let pert = FlowState::new(st.u.clone(), &st.theta + &eps_mode.scaled(eps)).unwrap();
    let t = 0.25;
    let grid = TimeGrid::new(t, 32).unwrap();
    let rep = stationary_drift_check(&pert, &data, &grid, &PicardConfig::default()).unwrap();
    // the perturbation decays like e^{−t|ξ|²}, |ξ| = 1, so the state moves by about ε(1 − e^{−t})
    let moved = spectral_core::sobolev_norm(&eps_mode.scaled(eps), 1.0) * (1.0 - (-t).exp());
    assert!(rep.max_relative_drift * pert.h1() >= 0.9 * moved, "{} vs {}", rep.max_relative_drift, moved);
}

#[test]
fn richardson_difference_within_budget_for_small_data() {
    let b = BoxSpec::new(2.0 * PI, 16).unwrap();
    let (s, data) = small_data(&b, 51, 0.02);
    let grid = TimeGrid::new(0.5, 64).unwrap();
    let rep = richardson_check(&s.u, &s.theta, &data, &grid, &PicardConfig::default()).unwrap();
    assert!(rep.within_budget, "{rep:?}");
}

#[test]
fn gevrey_weighted_norm_bounded_by_three_delta1() {
    let b = BoxSpec::new(2.0 * PI, 16).unwrap();
    let r = 1.0;
    let (_, data) = small_data(&b, 61, 0.02);
    let st = solve_stationary(&data, &StationaryConfig::default()).unwrap();
    let k = compute_t1(&st.u, &st.theta, &data, r, 1.0, T1Mode::Uniform).unwrap();
    let grid = TimeGrid::new(k.t1.unwrap(), 64).unwrap();
    let sol = picard_mild_solve(&st.u, &st.theta, &data, &grid, &PicardConfig::default()).unwrap();
    let w = gevrey_weighted_norm(&sol.trajectory, r);
    assert!(w.is_finite());
    assert!(w <= 3.0 * k.delta1.unwrap(), "{w} vs {}", 3.0 * k.delta1.unwrap());
    let rho = k.rho.unwrap();
    assert!(rho > 0.0 && rho < 2.0 * r / 3.0);
}

#[test]
fn calibration_keeps_default_constant_for_small_data() {
    let b = BoxSpec::new(2.0 * PI, 12).unwrap();
    let cases: Vec<_> = (0..4)
        .map(|i| {
            let (initial, data) = small_data(&b, 70 + 10 * i, 0.02);
            CalibrationCase { initial, data }
        })
        .collect();
    let rec = calibrate(&cases, 16, 1.0, 10).unwrap();
    assert_eq!(rec.calibration_c, 1.0);
    assert!(rec.worst_ball_fraction <= 1.0);
}

#[test]
fn etd_from_stationary_state_stays_put() {
    let b = BoxSpec::new(2.0 * PI, 12).unwrap();
    let (_, data) = small_data(&b, 81, 0.05);
    let st = solve_stationary(&data, &StationaryConfig::default()).unwrap();
    let base = FlowState::new(st.u.clone(), st.theta.clone()).unwrap();
    let fin = evolve_etd(&st.u, &st.theta, &data, 0.1, 20, |_, _| {}).unwrap();
    assert!(fin.sub(&base).h1() <= 1e-8 * base.h1());
}
