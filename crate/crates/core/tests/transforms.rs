mod common;

use std::f64::consts::PI;

use common::{c, rng, two_atoms};
use hs_core::measure::StieltjesMeasure;
use hs_core::quad::QuadOptions;
use hs_core::transforms::{cauchy_halfplane, det_condition, hilbert_pv, holder_bound_check, BoundaryDensity, PVQuadSpec};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cauchy_transform_is_pick(a in -3.0f64..3.0, len in 0.1f64..4.0, h in 0.01f64..5.0, x in -6.0f64..6.0, y in 1e-3f64..10.0) {
        let v = BoundaryDensity::indicator(a, a + len, h).unwrap();
        let w = cauchy_halfplane(&v, c(x, y)).unwrap();
        prop_assert!(w.im > 0.0, "Im {} at {x}+{y}i", w.im);
    }

    #[test]
    fn hilbert_of_even_box_is_odd(center in -2.0f64..2.0, half in 0.2f64..2.0, d in 0.0f64..4.0) {
        let v = BoundaryDensity::indicator(center - half, center + half, 1.0).unwrap();
        prop_assume!((d - half).abs() > 1e-2);
        let q = PVQuadSpec::default();
        let right = hilbert_pv(&v, center + d, &q).unwrap();
        let left = hilbert_pv(&v, center - d, &q).unwrap();
        prop_assert!((right + left).abs() <= 1e-8 * right.abs().max(1.0), "{right} vs {left}");
    }

    #[test]
    fn determinant_vanishes_on_the_diagonal(x in -0.9f64..0.9) {
        let v = BoundaryDensity::from_nu(&two_atoms(), 0.0).unwrap();
        prop_assert_eq!(det_condition(&v, x, x, &PVQuadSpec::default()).unwrap(), 0.0);
    }

    #[test]
    fn holder_bound_holds(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..6);
        let m = r.gen_range(2..6);
        let total = r.gen_range(0.05..0.95);
        let raw: Vec<f64> = (0..n).map(|_| r.gen_range(0.1..1.0)).collect();
        let sum: f64 = raw.iter().sum();
        let rho: Vec<(f64, f64)> = raw.iter().enumerate().map(|(k, w)| (k as f64, total * w / sum)).collect();
        let omega: Vec<(f64, f64)> = (0..m).map(|k| (k as f64, r.gen_range(0.1..2.0))).collect();
        let table: Vec<f64> = (0..n * m).map(|_| r.gen_range(0.1..3.0)).collect();
        let psi = |x: f64, t: f64| table[x as usize * n + t as usize];
        let rho = StieltjesMeasure::from_atoms(&rho).unwrap();
        let omega = StieltjesMeasure::from_atoms(&omega).unwrap();
        let check = holder_bound_check(psi, &rho, &omega).unwrap();
        prop_assert!(check.holds && check.lhs <= check.d_psi * (1.0 + 1e-10), "{check:?}");
    }
}

#[test]
fn cauchy_tends_to_hilbert_plus_density() {
    let v = BoundaryDensity::from_nu(&two_atoms(), 0.0).unwrap();
    let q = QuadOptions::with_tol(1e-13, 1e-11);
    for x in [-0.5, 0.0, 0.3, 0.7] {
        let limit = c(hilbert_pv(&v, x, &PVQuadSpec::default()).unwrap(), v.eval(x));
        let errs: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&y| (hs_core::transforms::cauchy_halfplane_with(&v, c(x, y), &q).unwrap() - limit).norm())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?} at {x}");
        assert!(errs[2] <= 10.0 * 1e-3 * errs[0] / 1e-1 + 1e-9, "{errs:?} at {x}");
    }
    assert!((v.eval(0.0) - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v.eval(2.0), 0.0);
    let _ = PI;
}
