mod common;

use common::{random_nu, random_unit_mu};
use hs_core::measure::{nu_from_mu_unit, StieltjesMeasure};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cdf_is_non_decreasing(seed in any::<u64>()) {
        let nu = random_nu(seed);
        let xs: Vec<f64> = (0..=400).map(|k| -5.0 + 0.025 * k as f64).collect();
        for w in xs.windows(2) {
            prop_assert!(nu.cdf(w[0]) <= nu.cdf(w[1]), "cdf({}) > cdf({})", w[0], w[1]);
        }
    }

    #[test]
    fn cdf_takes_midpoints_at_atoms(seed in any::<u64>()) {
        let nu = random_nu(seed);
        for a in nu.measure().atoms() {
            let x = a.location;
            let mut prev = f64::INFINITY;
            for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
                let defect = (nu.cdf(x - eps) + nu.cdf(x + eps) - 2.0 * nu.cdf(x)).abs();
                prop_assert!(defect <= prev + 1e-15);
                prev = defect;
            }
            prop_assert!(prev < 1e-6, "defect {prev} at {x}");
        }
    }

    #[test]
    fn sup_atom_at_most_total_mass(seed in any::<u64>()) {
        let m = random_nu(seed).measure().clone();
        prop_assert!(m.sup_atom() <= m.total_mass());
        let mu = random_unit_mu(seed);
        prop_assert!(mu.sup_atom() <= mu.total_mass());
    }

    #[test]
    fn moved_measure_drops_mass_at_zero(seed in any::<u64>(), at_zero in 0.01f64..0.9) {
        let mu = random_unit_mu(seed);
        let mut atoms = vec![(0.0, at_zero)];
        atoms.extend(mu.atoms().iter().map(|a| (a.location, a.mass * (1.0 - at_zero))));
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        atoms.last_mut().unwrap().1 += 1.0 - total;
        let mu = StieltjesMeasure::from_atoms(&atoms).unwrap();
        let positive: f64 = mu.atoms().iter().filter(|a| a.location > 0.0).map(|a| a.mass).sum();
        let nu = nu_from_mu_unit(&mu).unwrap();
        prop_assert!((nu.measure().total_mass() - positive).abs() <= 1e-15);
        prop_assert!(nu.measure().support_hull().is_none_or(|(lo, _)| lo >= 1.0));
    }
}

#[test]
fn empty_and_single_atom_measures() {
    let zero = StieltjesMeasure::zero();
    assert_eq!(zero.total_mass(), 0.0);
    assert_eq!(zero.sup_atom(), 0.0);
    let one = StieltjesMeasure::from_atoms(&[(0.5, 0.7)]).unwrap();
    assert_eq!(one.sup_atom(), one.total_mass());
    assert!(!one.support_count_at_least_two());
}
