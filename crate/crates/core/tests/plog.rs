mod common;

use std::f64::consts::PI;

use common::{c, continuity_points, random_nu, rng, upper_grid};
use hs_core::measure::{NuFunction, StieltjesMeasure};
use hs_core::plog::{detect_exceptional, membership_test, v_from_nu, GridSpec, Membership, PLogFunction};
use hs_core::quad::QuadOptions;
use proptest::prelude::*;
use rand::Rng;

fn random_plog(seed: u64) -> PLogFunction {
    let beta = rng(seed ^ 0x51).gen_range(-1.0..1.0);
    PLogFunction::from_nu(beta, random_nu(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn argument_stays_in_zero_to_pi(seed in any::<u64>()) {
        let f = random_plog(seed);
        for z in upper_grid(20) {
            let w = f.log_part().eval_f(z).unwrap();
            prop_assert!(w.im >= -1e-12 && w.im <= PI + 1e-12, "Im f = {} at {z}", w.im);
        }
    }

    #[test]
    fn phi_is_exp_of_f(seed in any::<u64>()) {
        let f = random_plog(seed);
        for z in upper_grid(6) {
            let phi = f.eval_phi(z).unwrap();
            let expected = f.log_part().eval_f(z).unwrap().exp();
            prop_assert!((phi - expected).norm() <= 4.0 * f64::EPSILON * expected.norm());
        }
    }

    #[test]
    fn boundary_values_match_product_forms(seed in any::<u64>()) {
        let f = random_plog(seed);
        let q = QuadOptions::default();
        for x in continuity_points(f.nu(), 12, 1e-2) {
            let w = f.boundary_phi_with(x, &q).unwrap();
            let (re, im) = f.boundary_parts(x, &q).unwrap();
            prop_assert!((w.re - re).abs() <= 1e-10 * re.abs().max(1.0), "{w} vs ({re}, {im}) at {x}");
            prop_assert!((w.im - im).abs() <= 1e-10 * im.abs().max(1.0), "{w} vs ({re}, {im}) at {x}");
        }
    }

    #[test]
    fn boundary_density_is_non_negative(seed in any::<u64>()) {
        let f = random_plog(seed);
        for x in continuity_points(f.nu(), 30, 1e-3) {
            prop_assert!(v_from_nu(f.nu(), f.log_part().beta(), x).unwrap() >= 0.0);
        }
    }

    #[test]
    fn exceptional_iff_one_point_support(seed in any::<u64>(), k in 0usize..3, mass in 0.05f64..1.0) {
        let atoms: Vec<(f64, f64)> = (0..k).map(|j| (j as f64 - 0.5, mass / k.max(1) as f64)).collect();
        let nu = NuFunction::new(0.0, StieltjesMeasure::from_atoms(&atoms).unwrap()).unwrap();
        prop_assert_eq!(detect_exceptional(&nu).is_none(), nu.measure().support_count_at_least_two());
        let nu = random_nu(seed);
        prop_assert!(detect_exceptional(&nu).is_none());
        prop_assert!(nu.measure().support_count_at_least_two());
    }
}

#[test]
fn membership_criteria_agree_on_members() {
    for seed in 0..5 {
        let f = random_plog(seed);
        let grid = GridSpec::default_for(&f.nu().measure().breakpoints());
        let r = membership_test(|z| f.eval_phi(z), &grid);
        assert_eq!(r.overall, Membership::Member, "seed {seed}: {:?}", r.failed());
        assert!(r.criteria.iter().all(|c| c.passed));
    }
}

#[test]
fn exceptional_phi_has_closed_form() {
    let nu = NuFunction::new(0.2, StieltjesMeasure::from_atoms(&[(1.5, 0.6)]).unwrap()).unwrap();
    let ex = detect_exceptional(&nu).unwrap();
    let f = PLogFunction::from_nu(0.0, nu).unwrap();
    for z in [c(0.0, 1.0), c(-2.0, 0.3), c(3.0, 2.0)] {
        assert!((f.eval_phi(z).unwrap() - ex.eval_phi(z)).norm() < 1e-12);
    }
}
