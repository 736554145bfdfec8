mod common;

use common::{c, continuity_points, random_nu, rng, upper_grid};
use hs_core::measure::{DensityPiece, StieltjesMeasure};
use hs_core::pick::{PickCanonical, PrimitivePick};
use hs_core::quad::QuadOptions;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn random_pick(seed: u64) -> PickCanonical {
    let mut r = rng(seed);
    let mut atoms: Vec<(f64, f64)> = (0..r.gen_range(1..4)).map(|_| (r.gen_range(-3.0..3.0), r.gen_range(0.1..2.0))).collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    atoms.dedup_by(|a, b| a.0 == b.0);
    let mut sigma = StieltjesMeasure::from_atoms(&atoms).unwrap();
    if r.gen_bool(0.5) {
        let lo = r.gen_range(-2.0..1.0);
        let piece = DensityPiece::polynomial(lo, lo + 1.5, vec![r.gen_range(0.1..1.0), r.gen_range(0.0..0.5)]).unwrap();
        sigma = StieltjesMeasure::new(sigma.atoms().to_vec(), vec![piece]).unwrap();
    }
    PickCanonical::new(r.gen_range(0.0..2.0), r.gen_range(-1.0..1.0), sigma).unwrap()
}

fn random_primitive(seed: u64) -> PrimitivePick {
    let mut r = rng(seed ^ 0x9e37);
    PrimitivePick::new(r.gen_range(0.0..1.0), r.gen_range(-1.0..1.0), random_nu(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn reflection_is_exact(seed in any::<u64>(), x in -4.0f64..4.0, y in 0.01f64..5.0) {
        let p = random_pick(seed);
        let z = c(x, y);
        prop_assert_eq!(p.eval(z.conj()).unwrap(), p.eval(z).unwrap().conj());
    }

    #[test]
    fn pick_functions_map_into_the_upper_half_plane(seed in any::<u64>()) {
        let p = random_pick(seed);
        for z in upper_grid(20) {
            let w = p.eval(z).unwrap();
            prop_assert!(w.im >= -1e-12, "Im {} at {z}", w.im);
        }
    }

    #[test]
    fn closed_and_integral_forms_agree(seed in any::<u64>()) {
        let f = random_primitive(seed);
        let q = QuadOptions::with_tol(1e-13, 1e-11);
        for z in upper_grid(5) {
            let a = f.eval_with(z, &q).unwrap();
            let b = f.eval_integral_form(z, &q).unwrap();
            prop_assert!((a - b).norm() <= 1e-8, "{a} vs {b} at {z}");
        }
    }

    #[test]
    fn derivative_matches_finite_difference(seed in any::<u64>()) {
        let f = random_primitive(seed);
        let q = QuadOptions::with_tol(1e-14, 1e-13);
        for z in upper_grid(4) {
            let h = 1e-3 * z.im.min(1.0);
            let step = |k: f64| f.eval_with(z + Complex64::new(k * h, 0.0), &q).unwrap();
            let fd = (step(-2.0) - 8.0 * step(-1.0) + 8.0 * step(1.0) - step(2.0)) / (12.0 * h);
            let d = f.derivative_with(z, &q).unwrap();
            prop_assert!((fd - d).norm() <= 1e-6 * d.norm().max(1.0), "{fd} vs {d} at {z}");
        }
    }

    #[test]
    fn harmonic_parts_are_monotone(seed in any::<u64>()) {
        let f = random_primitive(seed);
        let xs: Vec<f64> = (0..12).map(|k| -3.3 + 0.6 * k as f64).collect();
        let ys = [0.05, 0.2, 0.8, 3.0];
        for &y in &ys {
            let v: Vec<f64> = xs.iter().map(|&x| f.harmonic_parts(x, y).unwrap().1).collect();
            prop_assert!(v.windows(2).all(|w| w[0] < w[1]), "V not increasing at y={y}: {v:?}");
        }
        for &x in &xs {
            let u: Vec<f64> = ys.iter().map(|&y| f.harmonic_parts(x, y).unwrap().0).collect();
            prop_assert!(u.windows(2).all(|w| w[1] < w[0]), "U not decreasing at x={x}: {u:?}");
        }
    }

    #[test]
    fn imaginary_part_tends_to_boundary_values(seed in any::<u64>()) {
        let f = random_primitive(seed);
        for x in continuity_points(f.nu(), 10, 0.1) {
            let gaps: Vec<f64> = [1e-1, 1e-2, 1e-3]
                .iter()
                .map(|&y| (f.harmonic_parts(x, y).unwrap().1 - f.boundary_v(x)).abs())
                .collect();
            prop_assert!(gaps[2] < gaps[1] && gaps[1] < gaps[0], "{gaps:?} at {x}");
            // Linear decay: the gap over y stays bounded by its value at y = 0.1, up to slack.
            prop_assert!(gaps[2] / 1e-3 <= 2.0 * gaps[0] / 1e-1 + 1.0, "{gaps:?} at {x}");
        }
    }
}
