use evolution_solver::*;
use forcing_factory::{make_gevrey_vector, ForceSpec};
use spectral_core::{BoxSpec, Complex64, SpectralScalarField, SpectralVectorField};
use std::f64::consts::PI;

fn desk_box() -> BoxSpec {
    BoxSpec::new(4.0, 32).unwrap()
}

fn horizons() -> [f64; 4] {
    [1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0]
}

fn gravity(b: &BoxSpec, seed: u64) -> SpectralVectorField {
    make_gevrey_vector(&ForceSpec::exp_decay(0.1, 0.5, 1.0, seed), b, false).unwrap()
}

#[test]
fn bilinear_exponent_on_packet_trials() {
    let b = desk_box();
    let trials = packet_trials(&b, 48, (0.2, 1.2), 100).unwrap();
    let fit = measure_bilinear_constant(&trials, &horizons()).unwrap();
    println!("bilinear slope {:.3}, envelope factor {:.3}", fit.slope, fit.envelope_factor);
    assert!((0.15..=0.35).contains(&fit.slope), "{fit:?}");
}

#[test]
fn bilinear_ratio_below_fitted_quarter_power_envelope() {
    let b = desk_box();
    let trials = packet_trials(&b, 48, (0.2, 1.2), 100).unwrap();
    let fit = measure_bilinear_constant(&trials, &horizons()).unwrap();
    assert!(fit.within_envelope(1.05), "{fit:?}");
}

#[test]
fn linear_exponent_on_packet_trials() {
    let b = desk_box();
    let trials = packet_trials(&b, 48, (0.2, 1.2), 100).unwrap();
    let fit = measure_linear_constant(&trials, &horizons(), &gravity(&b, 900)).unwrap();
    println!("linear slope {:.3}, envelope factor {:.3}", fit.slope, fit.envelope_factor);
    assert!((fit.slope - 0.5).abs() <= 0.1, "{fit:?}");
}

#[test]
fn linear_ratio_below_fitted_half_power_envelope() {
    let b = desk_box();
    let trials = packet_trials(&b, 48, (0.2, 1.2), 100).unwrap();
    let fit = measure_linear_constant(&trials, &horizons(), &gravity(&b, 900)).unwrap();
    assert!(fit.within_envelope(1.05), "{fit:?}");
}

#[test]
fn zero_trials_are_skipped() {
    let b = BoxSpec::new(4.0, 12).unwrap();
    let mut trials = packet_trials(&b, 3, (0.3, 1.0), 1).unwrap();
    let with = measure_bilinear_constant(&trials, &horizons()).unwrap();
    trials.push(FlowState::zeros(&b));
    let again = measure_bilinear_constant(&trials, &horizons()).unwrap();
    assert_eq!(with.trials_used, 3);
    assert_eq!(again.trials_used, 3);
    assert_eq!(with.ratios, again.ratios);
    assert!(measure_bilinear_constant(&[FlowState::zeros(&b)], &horizons()).is_err());
}

#[test]
fn zero_gravity_is_an_undefined_linear_ratio() {
    let b = BoxSpec::new(4.0, 12).unwrap();
    let trials = packet_trials(&b, 3, (0.3, 1.0), 1).unwrap();
    assert!(measure_linear_constant(&trials, &horizons(), &SpectralVectorField::zeros(&b)).is_err());
    let e = MildTrajectory::constant(TimeGrid::new(0.5, 4).unwrap(), &trials[0]);
    let l = linear_term(&e, &SpectralVectorField::zeros(&b)).unwrap();
    assert!(l.states.iter().all(FlowState::is_zero));
}

#[test]
fn fewer_than_three_horizons_rejected() {
    let b = BoxSpec::new(4.0, 12).unwrap();
    let trials = packet_trials(&b, 3, (0.3, 1.0), 1).unwrap();
    assert!(measure_bilinear_constant(&trials, &[0.1, 0.2]).is_err());
}

#[test]
fn grid_quadrature_agrees_with_closed_form_on_constant_trials() {
    let b = BoxSpec::new(4.0, 12).unwrap();
    let trial = &packet_trials(&b, 1, (0.6, 0.6), 7).unwrap()[0];
    let grid = TimeGrid::new(0.5, 8).unwrap();
    let e = MildTrajectory::constant(grid, trial);
    let via_grid = bilinear_term(&e).e_t_norm() / trial.h1().powi(2);
    let fit = measure_bilinear_constant(std::slice::from_ref(trial), &[0.125, 0.25, 0.5]).unwrap();
    assert!((via_grid - fit.ratio_at(0.5).unwrap()).abs() <= 1e-12 * via_grid);
}

#[test]
fn heat_lemma_single_mode_closed_form() {
    let b = BoxSpec::new(2.0 * PI, 8).unwrap();
    let grid = TimeGrid::new(0.8, 16).unwrap();
    let phi = SpectralScalarField::single_mode(&b, [1, 1, 1], Complex64::new(1.0, 0.0));
    let rep = heat_lemma_check(&[vec![phi; 17]], &grid).unwrap();
    // the ratio (1 − e^{−x})/x is decreasing, so its max over nodes sits at the first node
    let x = 3.0 * grid.dt();
    assert!((rep.max_ratio_h1 - (1.0 - (-x).exp()) / x).abs() < 1e-13);
}

#[test]
fn heat_lemma_zero_field() {
    let b = BoxSpec::new(2.0 * PI, 8).unwrap();
    let grid = TimeGrid::new(0.5, 4).unwrap();
    let rep = heat_lemma_check(&[vec![SpectralScalarField::zeros(&b); 5]], &grid).unwrap();
    assert_eq!(rep.max_ratio_h1, 0.0);
    assert_eq!(rep.max_ratio_l2, 0.0);
}

#[test]
fn heat_lemma_constants_on_random_trials() {
    let grid = TimeGrid::new(1.0, 32).unwrap();
    let mut seen = Vec::new();
    for n in [8, 16] {
        let b = BoxSpec::new(2.0 * PI, n).unwrap();
        let trials = oscillating_trials(&b, 100, &grid, 5).unwrap();
        let rep = heat_lemma_check(&trials, &grid).unwrap();
        println!("N={n}: first ratio {:.4}, second ratio {:.4}", rep.max_ratio_h1, rep.max_ratio_l2);
        assert_eq!(rep.trials, 100);
        assert!(rep.max_ratio_h1 <= 1.0 + 1e-12);
        assert!(rep.max_ratio_l2 <= std::f64::consts::FRAC_1_SQRT_2 + 1e-12);
        seen.push(rep);
    }
    assert!((seen[0].max_ratio_h1 - seen[1].max_ratio_h1).abs() <= 0.1 * seen[1].max_ratio_h1);
}
