use forcing_factory::{
    control_gevrey_constant, control_gevrey_ratio, make_gevrey_scalar, make_gevrey_vector, unit_time_grid, ForceSpec,
};
use proptest::prelude::*;
use spectral_core::{gevrey_norm, sobolev_norm, BoxSpec};

fn desk() -> BoxSpec {
    BoxSpec::new(32.0 * std::f64::consts::PI, 32).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn calibrated_and_hermitian(r in 0.1f64..3.0, s in -1.0f64..1.0, amp in 1e-6f64..10.0, seed in any::<u64>()) {
        let f = make_gevrey_scalar(&ForceSpec::exp_decay(r, s, amp, seed), &desk()).unwrap();
        prop_assert!((sobolev_norm(&f, s) - amp).abs() <= 1e-10 * amp);
        prop_assert_eq!(f.hermitian_defect(), 0.0);
        prop_assert_eq!(f.mean().norm(), 0.0);
        prop_assert!(gevrey_norm(&f, s, 0.9 * r).is_finite());
    }

    #[test]
    fn solenoidal_vectors(r in 0.1f64..3.0, amp in 1e-6f64..10.0, seed in any::<u64>()) {
        let f = make_gevrey_vector(&ForceSpec::exp_decay(r, -1.0, amp, seed), &desk(), true).unwrap();
        prop_assert!(f.divergence_defect() <= 1e-12);
        prop_assert!((sobolev_norm(&f, -1.0) - amp).abs() <= 1e-10 * amp);
    }

    #[test]
    fn control_bound_for_factory_forces(ri in 0usize..4, seed in any::<u64>()) {
        let r = [0.75, 1.0, 1.5, 3.0][ri];
        let f = make_gevrey_vector(&ForceSpec::exp_decay(r, -1.0, 1e-2, seed), &desk(), true).unwrap();
        let ratio = control_gevrey_ratio(&f, r, &unit_time_grid(64)).unwrap();
        prop_assert!(ratio <= control_gevrey_constant(r).unwrap() * (1.0 + 1e-6));
    }
}

#[test]
fn vector_gevrey_norms_across_resolutions() {
    // s = 1/2, r = 1: the radius-1 norm settles, the radius-1.5 norm keeps growing with N
    let spec = ForceSpec::exp_decay(1.0, 0.5, 1.0, 21);
    let pi = std::f64::consts::PI;
    let coarse = make_gevrey_vector(&spec, &BoxSpec::new(2.0 * pi, 16).unwrap(), false).unwrap();
    let fine = make_gevrey_vector(&spec, &BoxSpec::new(2.0 * pi, 32).unwrap(), false).unwrap();
    let at = |r: f64| (gevrey_norm(&coarse, 0.5, r), gevrey_norm(&fine, 0.5, r));
    let (a, b) = at(1.0);
    assert!(a.is_finite() && b.is_finite() && b / a < 1.5);
    let (a, b) = at(1.5);
    assert!(b / a > 10.0);
}
