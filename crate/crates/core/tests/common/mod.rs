#![allow(dead_code)]

use hs_core::measure::{Atom, DensityPiece, NuFunction, StieltjesMeasure};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Non-decreasing `nu` with values in `[0, 1)`: a baseline, two to four atoms
/// in `[-3, 3]` kept at least 0.25 apart, and sometimes a constant-density
/// piece. The support always has at least two points.
pub fn random_nu(seed: u64) -> NuFunction {
    let mut r = rng(seed);
    let baseline = r.gen_range(0.0..0.2);
    let k = r.gen_range(2..=4);
    let mut locs: Vec<f64> = Vec::new();
    while locs.len() < k {
        let x = r.gen_range(-3.0..3.0);
        if locs.iter().all(|l: &f64| (l - x).abs() >= 0.25) {
            locs.push(x);
        }
    }
    locs.sort_by(f64::total_cmp);
    let mut weights: Vec<f64> = (0..k).map(|_| r.gen_range(0.1..1.0)).collect();
    let piece = if r.gen_bool(0.5) {
        let lo = r.gen_range(-2.0..1.0);
        let len = r.gen_range(0.5..2.0);
        Some((lo, lo + len, r.gen_range(0.1..1.0)))
    } else {
        None
    };
    let raw: f64 = weights.iter().sum::<f64>() + piece.map_or(0.0, |(lo, hi, d)| (hi - lo) * d);
    let budget = r.gen_range(0.5..0.95) - baseline;
    let s = budget / raw;
    weights.iter_mut().for_each(|w| *w *= s);
    let atoms: Vec<Atom> = locs
        .iter()
        .zip(&weights)
        .map(|(&location, &mass)| Atom { location, mass })
        .collect();
    let pieces: Vec<DensityPiece> = piece
        .map(|(lo, hi, d)| DensityPiece::polynomial(lo, hi, vec![d * s]).unwrap())
        .into_iter()
        .collect();
    NuFunction::new(baseline, StieltjesMeasure::new(atoms, pieces).unwrap()).unwrap()
}

/// Atoms of mass 1/2 at -1 and 1.
pub fn two_atoms() -> NuFunction {
    NuFunction::new(0.0, StieltjesMeasure::from_atoms(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap()).unwrap()
}

/// Probability measure on `(0, 1]` with one to four atoms at least 0.02 apart.
pub fn random_unit_mu(seed: u64) -> StieltjesMeasure {
    let mut r = rng(seed);
    let k = r.gen_range(1..=4);
    let mut locs: Vec<f64> = Vec::new();
    while locs.len() < k {
        let x = r.gen_range(0.05..=1.0);
        if locs.iter().all(|l: &f64| (l - x).abs() >= 0.02) {
            locs.push(x);
        }
    }
    locs.sort_by(f64::total_cmp);
    let mut atoms: Vec<(f64, f64)> = locs.into_iter().map(|x| (x, r.gen_range(0.1..1.0))).collect();
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    atoms.iter_mut().for_each(|a| a.1 /= total);
    let last = atoms.len() - 1;
    atoms[last].1 = 1.0 - atoms[..last].iter().map(|a| a.1).sum::<f64>();
    StieltjesMeasure::from_atoms(&atoms).unwrap()
}

/// `n x n` points in the upper half-plane: `x` uniform in `[-4, 4]`, `y`
/// log-spaced in `[0.05, 5]`.
pub fn upper_grid(n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let x = -4.0 + 8.0 * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let y = 0.05 * 100f64.powf(j as f64 / (n - 1) as f64);
            out.push(c(x, y));
        }
    }
    out
}

/// Points at distance at least `gap` from every breakpoint of `nu`.
pub fn continuity_points(nu: &NuFunction, n: usize, gap: f64) -> Vec<f64> {
    let bps = nu.measure().breakpoints();
    let mut xs = Vec::new();
    let mut k = 0;
    while xs.len() < n {
        let x = -3.7 + 0.173 * k as f64;
        k += 1;
        if bps.iter().all(|b| (x - b).abs() >= gap) {
            xs.push(x);
        }
    }
    xs
}
