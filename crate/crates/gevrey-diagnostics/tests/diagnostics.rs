use forcing_factory::{make_gevrey_scalar, make_gevrey_vector, ForceSpec};
use gevrey_diagnostics::*;
use spectral_core::{sobolev_norm, BoxSpec, Complex64, Error, SpectralScalarField, SpectralVectorField};
use std::f64::consts::{E, PI};

fn cosine(b: &BoxSpec) -> SpectralScalarField {
    SpectralScalarField::single_mode(b, [1, 0, 0], Complex64::new(0.5, 0.0))
}

#[test]
fn factory_radii_recovered_within_five_percent() {
    for n in [32, 64] {
        let b = BoxSpec::new(2.0 * PI, n).unwrap();
        for r in [0.5, 1.0, 2.0] {
            let s = make_gevrey_scalar(&ForceSpec::exp_decay(r, 1.0, 1.0, 17), &b).unwrap();
            let v = make_gevrey_vector(&ForceSpec::exp_decay(r, 1.0, 1.0, 18), &b, true).unwrap();
            for est in [radius_estimate(&s).unwrap(), radius_estimate(&v).unwrap()] {
                println!("N={n} r={r}: measured {:.4}, R² {:.5}", est.radius, est.r_squared);
                assert!((est.radius - r).abs() <= 0.05 * r, "N={n} r={r}: {}", est.radius);
                assert!(est.r_squared >= 0.99);
            }
        }
    }
}

#[test]
fn white_band_limited_field_has_no_decay() {
    let b = BoxSpec::new(2.0 * PI, 32).unwrap();
    let mut spec = ForceSpec::band_limited(0.0, 0.0, 1.0, 4, 8.0);
    spec.decay_beta = 0.0;
    let est = radius_estimate(&make_gevrey_scalar(&spec, &b).unwrap()).unwrap();
    assert!(est.radius < 1e-8, "{}", est.radius);
}

#[test]
fn too_few_shells_is_an_error() {
    let b = BoxSpec::new(2.0 * PI, 16).unwrap();
    let err = radius_estimate(&cosine(&b)).unwrap_err();
    assert!(matches!(err, Error::InsufficientDecayRange { usable: 1, needed: 4 }));
}

#[test]
fn annulus_availability_on_a_sixteen_period_box() {
    let b = BoxSpec::new(32.0 * PI, 32).unwrap();
    let z = SpectralScalarField::zeros(&b);
    for k in 0..=3 {
        assert_eq!(annulus_sup(&z, k).unwrap(), 0.0);
    }
    match annulus_sup(&z, 4) {
        Err(Error::EmptyAnnulus { k: 4, required_period }) => assert!((required_period - 64.0 * PI).abs() < 1e-9),
        other => panic!("{other:?}"),
    }
}

#[test]
fn single_mode_lands_in_its_annulus() {
    let b = BoxSpec::new(32.0 * PI, 32).unwrap();
    // |ξ| = 6/16 lies inside C_1 = [1/4, 1/2]
    let f = SpectralScalarField::single_mode(&b, [6, 0, 0], Complex64::new(0.0, 0.7));
    for k in 0..=3 {
        let want = if k == 1 { 0.7 } else { 0.0 };
        assert!((annulus_sup(&f, k).unwrap() - want).abs() < 1e-15);
    }
}

#[test]
fn liouville_indicator_of_zero_and_of_a_dyadic_field() {
    let b = BoxSpec::new(32.0 * PI, 32).unwrap();
    let (z, rows) = liouville_indicator(&SpectralVectorField::zeros(&b), &SpectralScalarField::zeros(&b)).unwrap();
    assert_eq!(z, 0.0);
    assert_eq!(rows.len(), 4);

    // one mode per annulus with sup exactly 2^k in both fields
    let modes = [[12, 0, 0], [6, 0, 0], [0, 3, 0], [1, 1, 0]];
    let mut th = SpectralScalarField::zeros(&b);
    for (k, m) in modes.iter().enumerate() {
        th.set_mode(*m, Complex64::new(2f64.powi(k as i32), 0.0));
    }
    let z = SpectralScalarField::zeros(&b);
    let u = SpectralVectorField::from_components([z.clone(), z, th.clone()]).unwrap();
    let (ind, rows) = liouville_indicator(&u, &th).unwrap();
    assert!((ind - 2.0).abs() < 1e-14, "{rows:?}");
    assert!(rows.iter().all(|r| (r.weighted - 2.0).abs() < 1e-14));
}

#[test]
fn besov_norm_of_zero_and_cosine() {
    let b = BoxSpec::new(2.0 * PI, 8).unwrap();
    let g = besov_time_grid(&b);
    assert_eq!(besov_norm(&SpectralScalarField::zeros(&b), &g).0, 0.0);
    let (v, t) = besov_norm(&cosine(&b), &g);
    let exact = (2.0 * E).powf(-0.5);
    assert!((v - exact).abs() <= 0.01 * exact && v <= exact * (1.0 + 1e-12), "{v} vs {exact}");
    assert!((t - 0.5).abs() < 0.1);
}

#[test]
fn besov_norm_is_homogeneous() {
    let b = BoxSpec::new(2.0 * PI, 16).unwrap();
    let f = make_gevrey_scalar(&ForceSpec::exp_decay(0.5, 0.0, 1.0, 3), &b).unwrap();
    let g = besov_time_grid(&b);
    let base = besov_norm(&f, &g).0;
    for lam in [2.0, 0.25, -8.0] {
        assert_eq!(besov_norm(&f.scaled(lam), &g).0, lam.abs() * base);
    }
    let lam = 1.37;
    assert!((besov_norm(&f.scaled(lam), &g).0 - lam * base).abs() <= 1e-14 * lam * base);
}

#[test]
fn improved_sobolev_ratio_of_cosine() {
    let b = BoxSpec::new(2.0 * PI, 8).unwrap();
    let vol = b.volume();
    let l4 = (vol * 3.0 / 8.0).powf(0.25);
    let h1 = (vol / 2.0).sqrt();
    let besov = (2.0 * E).powf(-0.5);
    let exact = l4 / (besov * h1).sqrt();
    let got = improved_sobolev_ratio(&cosine(&b)).unwrap();
    assert!((got - exact).abs() <= 0.005 * exact, "{got} vs {exact}");
    assert!(improved_sobolev_ratio(&SpectralScalarField::zeros(&b)).is_err());
}

#[test]
fn improved_sobolev_ratio_is_scale_invariant() {
    let b = BoxSpec::new(2.0 * PI, 16).unwrap();
    let f = make_gevrey_scalar(&ForceSpec::exp_decay(0.5, 0.0, 1.0, 9), &b).unwrap();
    let base = improved_sobolev_ratio(&f).unwrap();
    for lam in [4.0, 0.5, -2.0] {
        assert_eq!(improved_sobolev_ratio(&f.scaled(lam)).unwrap(), base);
    }
}

#[test]
fn improved_sobolev_constant_stable_across_resolutions() {
    let mut maxima = Vec::new();
    for n in [32, 64] {
        let b = BoxSpec::new(2.0 * PI, n).unwrap();
        let worst = (0..100)
            .map(|seed| {
                let r = 0.5 + 0.02 * seed as f64;
                let f = make_gevrey_scalar(&ForceSpec::exp_decay(r, 0.0, 1.0, seed), &b).unwrap();
                improved_sobolev_ratio(&f).unwrap()
            })
            .fold(0.0, f64::max);
        println!("N={n}: max improved Sobolev ratio {worst:.4}");
        maxima.push(worst);
    }
    assert!((maxima[0] - maxima[1]).abs() <= 0.1 * maxima[1]);
}

#[test]
fn fourier_l1_dominates_sup_norm() {
    let b = BoxSpec::new(2.0 * PI, 16).unwrap();
    assert_eq!(fourier_l1_and_linf(&SpectralScalarField::zeros(&b), 1.0).unwrap(), (0.0, 0.0));
    let (l1, linf) = fourier_l1_and_linf(&cosine(&b), 1.0).unwrap();
    assert!((l1 - 1.0).abs() < 1e-15 && (linf - 1.0).abs() < 1e-14);
    let f = make_gevrey_vector(&ForceSpec::exp_decay(1.0, 1.0, 1.0, 5), &b, true).unwrap();
    let (l1, linf) = fourier_l1_and_linf(&f, 0.5).unwrap();
    assert!(linf < l1 && l1.is_finite());
}

#[test]
fn wsp_reduces_to_known_norms() {
    let b = BoxSpec::new(2.0 * PI, 16).unwrap();
    let f = make_gevrey_vector(&ForceSpec::exp_decay(0.7, 1.0, 1.0, 6), &b, true).unwrap();
    assert_eq!(wsp_norm(&f, 0.0, 3.0).unwrap(), spectral_core::lp_norm(&f, 3.0));
    let a = wsp_norm(&f, 1.0, 2.0).unwrap();
    let h = sobolev_norm(&f, 1.0);
    assert!((a - h).abs() <= 1e-10 * h);
    assert!(wsp_norm(&f, 1.0, 0.5).is_err());
}

#[test]
fn report_serializes() {
    let b = BoxSpec::new(4.0 * PI, 16).unwrap();
    let u = make_gevrey_vector(&ForceSpec::exp_decay(0.8, 1.0, 0.1, 1), &b, true).unwrap();
    let th = make_gevrey_scalar(&ForceSpec::exp_decay(0.8, 1.0, 0.1, 2), &b).unwrap();
    let rep = gevrey_report(&u, &th, Some(0.1)).unwrap();
    assert_eq!(rep.annulus_sups.len(), 1);
    assert!(rep.measured_radius > 0.0);
    let s = serde_json::to_string(&rep).unwrap();
    let back: GevreyReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back.annulus_sups, rep.annulus_sups);
}
