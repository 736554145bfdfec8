//! Finite measures on the real line and the non-decreasing functions they
//! generate.
//!
//! A [`StieltjesMeasure`] is a finite sum of point masses plus density pieces.
//! Densities are cubic polynomials on bounded intervals, the image of such a
//! polynomial under `t = 1/s` (used when a measure on `[0, 1]` is moved to
//! `[1, +inf)`), or an exponentially decaying tail on `[a, +inf)`.

pub mod json;

use std::fmt;
use std::sync::Arc;

use statrs::function::gamma::{gamma, gamma_lr, gamma_ur};

use crate::error::{Error, Result};
use crate::quad::{self, Estimate, Point, QuadOptions, QuadValue};

/// Two measures are considered equal when atoms and coefficients agree to this.
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Cubic (or lower degree) polynomial `c0 + c1 s + c2 s^2 + c3 s^3`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > 4 {
            return Err(Error::InvalidMeasure(format!(
                "density polynomials take 1 to 4 coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite density coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    /// `int_0^s p`.
    pub fn integral_to(&self, s: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (k, c)| acc * s + c / (k as f64 + 1.0))
            * s
    }

    /// Smallest value on `[0, len]`, attained at an endpoint or a critical point.
    pub fn min_on(&self, len: f64) -> f64 {
        let mut candidates = vec![0.0, len];
        let c = &self.coeffs;
        let d1 = c.get(1).copied().unwrap_or(0.0);
        let d2 = 2.0 * c.get(2).copied().unwrap_or(0.0);
        let d3 = 3.0 * c.get(3).copied().unwrap_or(0.0);
        if d3 != 0.0 {
            let disc = d2 * d2 - 4.0 * d3 * d1;
            if disc >= 0.0 {
                let r = disc.sqrt();
                candidates.push((-d2 + r) / (2.0 * d3));
                candidates.push((-d2 - r) / (2.0 * d3));
            }
        } else if d2 != 0.0 {
            candidates.push(-d1 / d2);
        }
        candidates
            .into_iter()
            .filter(|s| (0.0..=len).contains(s))
            .map(|s| self.eval(s))
            .fold(f64::INFINITY, f64::min)
    }

    fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

/// Convex potential `psi` of an exponential tail density `exp(-psi(t))`.
#[derive(Clone)]
pub struct ConvexPotential {
    psi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    label: String,
}

impl ConvexPotential {
    /// Wraps a potential. `convex` is the caller's certificate; non-convex
    /// potentials are refused because the tail machinery relies on it.
    pub fn new(label: impl Into<String>, convex: bool, psi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        if !convex {
            return Err(Error::InvalidMeasure("tail potential must be certified convex".into()));
        }
        Ok(Self {
            psi: Arc::new(psi),
            label: label.into(),
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.psi)(t)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for ConvexPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConvexPotential({})", self.label)
    }
}

/// Density law of one piece.
#[derive(Debug, Clone)]
pub enum DensityLaw {
    /// `p(t - lo)` on `[lo, hi]`.
    Polynomial(Poly),
    /// `p(1/t - s_lo) / t^2` on `[1/s_hi, 1/s_lo]`; this is the image of the
    /// density `p(s - s_lo)` on `[s_lo, s_hi]` under `t = 1/s`. `s_lo = 0`
    /// gives an unbounded piece.
    Pullback { poly: Poly, s_lo: f64, s_hi: f64 },
    /// `weight * exp(-rate * (t - lo)^power)` on `[lo, +inf)`, `power >= 1`.
    ExpConvex { weight: f64, rate: f64, power: f64 },
    /// `exp(-psi(t))` on `[lo, +inf)` with `psi` convex.
    Potential(ConvexPotential),
}

#[derive(Debug, Clone)]
pub struct DensityPiece {
    lo: f64,
    hi: f64,
    law: DensityLaw,
    mass: f64,
}

impl DensityPiece {
    /// Polynomial density on `[lo, hi]`; coefficients are in the local variable `t - lo`.
    pub fn polynomial(lo: f64, hi: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidMeasure(format!("bad density interval [{lo}, {hi}]")));
        }
        let poly = Poly::new(coeffs)?;
        let len = hi - lo;
        if poly.min_on(len) < -STRUCTURAL_TOL * poly.max_abs_coeff().max(1.0) {
            return Err(Error::InvalidMeasure(format!("density negative somewhere on [{lo}, {hi}]")));
        }
        let mass = poly.integral_to(len);
        Ok(Self {
            lo,
            hi,
            law: DensityLaw::Polynomial(poly),
            mass,
        })
    }

    /// Image under `t = 1/s` of the density `p(s - s_lo)` on `[s_lo, s_hi] ⊂ [0, 1]`.
    pub fn pullback(s_lo: f64, s_hi: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(s_lo >= 0.0 && s_lo < s_hi && s_hi.is_finite()) {
            return Err(Error::InvalidMeasure(format!("bad pullback interval [{s_lo}, {s_hi}]")));
        }
        let poly = Poly::new(coeffs)?;
        let len = s_hi - s_lo;
        if poly.min_on(len) < -STRUCTURAL_TOL * poly.max_abs_coeff().max(1.0) {
            return Err(Error::InvalidMeasure(format!("density negative somewhere on [{s_lo}, {s_hi}]")));
        }
        let mass = poly.integral_to(len);
        let hi = if s_lo == 0.0 { f64::INFINITY } else { 1.0 / s_lo };
        Ok(Self {
            lo: 1.0 / s_hi,
            hi,
            law: DensityLaw::Pullback { poly, s_lo, s_hi },
            mass,
        })
    }

    /// `weight * exp(-rate * (t - from)^power)` on `[from, +inf)`.
    pub fn exp_convex(from: f64, weight: f64, rate: f64, power: f64) -> Result<Self> {
        if !from.is_finite() || !(weight > 0.0 && weight.is_finite()) || !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidMeasure(format!(
                "exp_convex tail needs finite start and positive weight and rate, got from={from} weight={weight} rate={rate}"
            )));
        }
        if !(power >= 1.0 && power.is_finite()) {
            return Err(Error::InvalidMeasure(format!("exp_convex tail needs power >= 1, got {power}")));
        }
        let mass = weight * gamma(1.0 + 1.0 / power) / rate.powf(1.0 / power);
        Ok(Self {
            lo: from,
            hi: f64::INFINITY,
            law: DensityLaw::ExpConvex { weight, rate, power },
            mass,
        })
    }

    /// `exp(-psi(t))` on `[from, +inf)` for a certified convex `psi`.
    pub fn potential(from: f64, psi: ConvexPotential) -> Result<Self> {
        if !from.is_finite() {
            return Err(Error::InvalidMeasure("tail start must be finite".into()));
        }
        let opts = QuadOptions::with_tol(1e-14, 1e-12);
        let mass = quad::semi_infinite(|p: Point| (-psi.eval(p.value())).exp(), from, &opts)
            .map_err(|e| Error::InvalidMeasure(format!("tail density is not integrable: {e}")))?
            .value;
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(Error::InvalidMeasure(format!("tail mass {mass} is not finite")));
        }
        Ok(Self {
            lo: from,
            hi: f64::INFINITY,
            law: DensityLaw::Potential(psi),
            mass,
        })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn law(&self) -> &DensityLaw {
        &self.law
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn density(&self, t: f64) -> f64 {
        if !(t >= self.lo && t <= self.hi) {
            return 0.0;
        }
        match &self.law {
            DensityLaw::Polynomial(p) => p.eval(t - self.lo),
            DensityLaw::Pullback { poly, s_lo, .. } => poly.eval(1.0 / t - s_lo) / (t * t),
            DensityLaw::ExpConvex { weight, rate, power } => weight * (-rate * (t - self.lo).powf(*power)).exp(),
            DensityLaw::Potential(psi) => (-psi.eval(t)).exp(),
        }
    }

    /// Mass of `[lo, x]` (the density has no atoms, so endpoints do not matter).
    pub fn mass_below(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        if x >= self.hi {
            return self.mass;
        }
        match &self.law {
            DensityLaw::Polynomial(p) => p.integral_to(x - self.lo),
            DensityLaw::Pullback { poly, s_lo, s_hi } => {
                let s = 1.0 / x;
                poly.integral_to(s_hi - s_lo) - poly.integral_to(s - s_lo)
            }
            DensityLaw::ExpConvex { weight, rate, power } => {
                let u = x - self.lo;
                let k = 1.0 / power;
                weight * gamma(k) * gamma_lr(k, rate * u.powf(*power)) / (power * rate.powf(k))
            }
            DensityLaw::Potential(psi) => {
                let opts = QuadOptions::with_tol(1e-14, 1e-12);
                quad::tanh_sinh(|p: Point| (-psi.eval(p.value())).exp(), self.lo, x, &opts)
                    .map(|e| e.value)
                    .unwrap_or(f64::NAN)
            }
        }
    }

    /// Mass of `[x, hi]`, computed without subtracting from the total so that
    /// it keeps relative accuracy far out in unbounded tails.
    pub fn mass_above(&self, x: f64) -> f64 {
        if x <= self.lo {
            return self.mass;
        }
        if x >= self.hi {
            return 0.0;
        }
        match &self.law {
            DensityLaw::Polynomial(_) => self.mass - self.mass_below(x),
            DensityLaw::Pullback { poly, s_lo, .. } => poly.integral_to(1.0 / x - s_lo),
            DensityLaw::ExpConvex { weight, rate, power } => {
                let u = x - self.lo;
                let k = 1.0 / power;
                weight * gamma(k) * gamma_ur(k, rate * u.powf(*power)) / (power * rate.powf(k))
            }
            DensityLaw::Potential(psi) => {
                let opts = QuadOptions::with_tol(1e-300, 1e-12);
                quad::semi_infinite(|p: Point| (-psi.eval(p.value())).exp(), x, &opts)
                    .map(|e| e.value)
                    .unwrap_or(f64::NAN)
            }
        }
    }

    /// `int g(t) density(t) dt` over the piece, cut at every `cuts` point
    /// inside the piece. With `singular = true` the pieces are integrated by
    /// tanh-sinh and `g` sees each cut as an exact anchor.
    fn integrate<T, F>(&self, g: &F, cuts: &[f64], singular: bool, opts: &QuadOptions) -> Result<Estimate<T>>
    where
        T: QuadValue,
        F: Fn(Point) -> T,
    {
        let inner: Vec<f64> = cuts.iter().copied().filter(|c| *c > self.lo && *c < self.hi).collect();
        match &self.law {
            DensityLaw::Polynomial(poly) => {
                let mut pts = vec![self.lo];
                pts.extend(&inner);
                pts.push(self.hi);
                let lo = self.lo;
                if singular {
                    quad::tanh_sinh_pieces(|p: Point| g(p) * poly.eval(p.distance_to(lo)), &pts, opts)
                } else {
                    quad::gauss_kronrod_pieces(|t: f64| g(Point::at(t)) * poly.eval(t - lo), &pts, opts)
                }
            }
            DensityLaw::Pullback { poly, s_lo, s_hi } => {
                // integrate in s = 1/t over [s_lo, s_hi]
                let mut s_cuts: Vec<(f64, f64)> = inner.iter().map(|x| (1.0 / x, *x)).collect();
                s_cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
                let mut pts = vec![*s_lo];
                pts.extend(s_cuts.iter().map(|c| c.0));
                pts.push(*s_hi);
                let s0 = *s_lo;
                if singular {
                    let h = |p: Point| -> T {
                        let s = p.value();
                        if s <= 0.0 {
                            return T::default();
                        }
                        let weight = poly.eval(s - s0);
                        let tp = match s_cuts.iter().find(|c| c.0 == p.anchor) {
                            // t - x = 1/s - 1/s_x = -(s - s_x) / (s s_x)
                            Some(&(sx, x)) => Point { anchor: x, offset: -p.offset / (s * sx) },
                            None => Point::at(1.0 / s),
                        };
                        g(tp) * weight
                    };
                    quad::tanh_sinh_pieces(h, &pts, opts)
                } else {
                    let h = |s: f64| -> T {
                        if s <= 0.0 {
                            return T::default();
                        }
                        g(Point::at(1.0 / s)) * poly.eval(s - s0)
                    };
                    quad::gauss_kronrod_pieces(h, &pts, opts)
                }
            }
            DensityLaw::ExpConvex { .. } | DensityLaw::Potential(_) => {
                let mut pts = vec![self.lo];
                pts.extend(&inner);
                let last = *pts.last().unwrap();
                let dens = |p: Point| self.tail_density(p);
                let finite = if singular {
                    quad::tanh_sinh_pieces(|p: Point| g(p) * dens(p), &pts, opts)?
                } else {
                    quad::gauss_kronrod_pieces(|t: f64| g(Point::at(t)) * dens(Point::at(t)), &pts, opts)?
                };
                let tail = quad::semi_infinite(|p: Point| g(p) * dens(p), last, opts)?;
                Ok(Estimate {
                    value: finite.value + tail.value,
                    error: finite.error + tail.error,
                })
            }
        }
    }

    fn tail_density(&self, p: Point) -> f64 {
        match &self.law {
            DensityLaw::ExpConvex { weight, rate, power } => {
                let u = p.distance_to(self.lo).max(0.0);
                weight * (-rate * u.powf(*power)).exp()
            }
            DensityLaw::Potential(psi) => (-psi.eval(p.value())).exp(),
            _ => self.density(p.value()),
        }
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let close = |a: f64, b: f64| a == b || (a - b).abs() <= STRUCTURAL_TOL;
        let polys = |a: &Poly, b: &Poly| {
            let n = a.coeffs.len().max(b.coeffs.len());
            (0..n).all(|k| close(*a.coeffs.get(k).unwrap_or(&0.0), *b.coeffs.get(k).unwrap_or(&0.0)))
        };
        if !close(self.lo, other.lo) || !close(self.hi, other.hi) {
            return false;
        }
        match (&self.law, &other.law) {
            (DensityLaw::Polynomial(a), DensityLaw::Polynomial(b)) => polys(a, b),
            (
                DensityLaw::Pullback { poly: a, s_lo: la, s_hi: ha },
                DensityLaw::Pullback { poly: b, s_lo: lb, s_hi: hb },
            ) => polys(a, b) && close(*la, *lb) && close(*ha, *hb),
            (
                DensityLaw::ExpConvex { weight: w1, rate: r1, power: k1 },
                DensityLaw::ExpConvex { weight: w2, rate: r2, power: k2 },
            ) => close(*w1, *w2) && close(*r1, *r2) && close(*k1, *k2),
            (DensityLaw::Potential(a), DensityLaw::Potential(b)) => Arc::ptr_eq(&a.psi, &b.psi),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// How the continuous part should be split when integrating against a measure.
#[derive(Debug, Clone, Copy)]
pub enum Cuts<'a> {
    /// Smooth integrand; Gauss–Kronrod, optionally cut at the given points
    /// (used to resolve peaks such as `1/(t - z)` with `z` near the axis).
    Smooth(&'a [f64]),
    /// Integrand singular at the given point; tanh-sinh anchored there.
    /// The point must not carry an atom.
    SingularAt(f64),
}

/// Finite positive measure: atoms plus density pieces.
#[derive(Debug, Clone, Default)]
pub struct StieltjesMeasure {
    atoms: Vec<Atom>,
    pieces: Vec<DensityPiece>,
}

impl StieltjesMeasure {
    pub fn new(atoms: Vec<Atom>, mut pieces: Vec<DensityPiece>) -> Result<Self> {
        for a in &atoms {
            if !a.location.is_finite() || !(a.mass > 0.0 && a.mass.is_finite()) {
                return Err(Error::InvalidMeasure(format!(
                    "atom ({}, {}) needs a finite location and positive finite mass",
                    a.location, a.mass
                )));
            }
        }
        if atoms.windows(2).any(|w| w[0].location >= w[1].location) {
            return Err(Error::InvalidMeasure("atom locations must be strictly increasing".into()));
        }
        pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        if pieces.windows(2).any(|w| w[0].hi > w[1].lo) {
            return Err(Error::InvalidMeasure("density pieces overlap".into()));
        }
        Ok(Self { atoms, pieces })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            atoms.iter().map(|&(location, mass)| Atom { location, mass }).collect(),
            Vec::new(),
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[DensityPiece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.pieces.iter().all(|p| p.mass == 0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>() + self.pieces.iter().map(|p| p.mass).sum::<f64>()
    }

    pub fn sup_atom(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).fold(0.0, f64::max)
    }

    pub fn atom_at(&self, x: f64) -> Option<f64> {
        self.atoms.iter().find(|a| a.location == x).map(|a| a.mass)
    }

    pub fn support_count_at_least_two(&self) -> bool {
        let dense = self.pieces.iter().any(|p| p.mass > 0.0);
        dense || self.atoms.len() >= 2
    }

    /// `m((-inf, x)) + m({x})/2`.
    pub fn midpoint_mass_below(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for a in &self.atoms {
            if a.location < x {
                acc += a.mass;
            } else if a.location == x {
                acc += 0.5 * a.mass;
            }
        }
        acc + self.pieces.iter().map(|p| p.mass_below(x)).sum::<f64>()
    }

    /// Smallest and largest support point (the upper end may be `+inf`).
    pub fn support_hull(&self) -> Option<(f64, f64)> {
        let lo = self
            .atoms
            .iter()
            .map(|a| a.location)
            .chain(self.pieces.iter().filter(|p| p.mass > 0.0).map(|p| p.lo))
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .atoms
            .iter()
            .map(|a| a.location)
            .chain(self.pieces.iter().filter(|p| p.mass > 0.0).map(|p| p.hi))
            .fold(f64::NEG_INFINITY, f64::max);
        (lo <= hi).then_some((lo, hi))
    }

    /// Atom locations and finite piece endpoints, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.atoms.iter().map(|a| a.location).collect();
        for p in &self.pieces {
            pts.push(p.lo);
            if p.hi.is_finite() {
                pts.push(p.hi);
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// `int f dm`. Atoms are summed exactly; densities go through quadrature.
    pub fn integrate<T, F>(&self, f: F, cuts: Cuts<'_>, opts: &QuadOptions) -> Result<Estimate<T>>
    where
        T: QuadValue,
        F: Fn(Point) -> T,
    {
        let mut acc = Estimate { value: T::default(), error: 0.0 };
        for a in &self.atoms {
            let v = f(Point::at(a.location));
            if !v.is_finite_value() {
                return Err(Error::NonFinite { at: a.location });
            }
            acc.value = acc.value + v * a.mass;
        }
        let n = self.pieces.len().max(1) as f64;
        let local = QuadOptions {
            tol: quad::Tolerance::new(opts.tol.abs / n, opts.tol.rel),
            ..*opts
        };
        for p in &self.pieces {
            let e = match cuts {
                Cuts::Smooth(c) => p.integrate(&f, c, false, &local)?,
                Cuts::SingularAt(x) => p.integrate(&f, &[x], true, &local)?,
            };
            acc.value = acc.value + e.value;
            acc.error += e.error;
        }
        Ok(acc)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.atoms.len() == other.atoms.len()
            && self.pieces.len() == other.pieces.len()
            && self.atoms.iter().zip(&other.atoms).all(|(a, b)| {
                (a.location - b.location).abs() <= STRUCTURAL_TOL && (a.mass - b.mass).abs() <= STRUCTURAL_TOL
            })
            && self.pieces.iter().zip(&other.pieces).all(|(a, b)| a.approx_eq(b))
    }
}

/// Non-decreasing function `nu(x) = baseline + m((-inf, x)) + m({x})/2`.
#[derive(Debug, Clone, Default)]
pub struct NuFunction {
    baseline: f64,
    measure: StieltjesMeasure,
}

impl NuFunction {
    pub fn new(baseline: f64, measure: StieltjesMeasure) -> Result<Self> {
        if !(baseline >= 0.0 && baseline.is_finite()) {
            return Err(Error::InvalidMeasure(format!("baseline must be finite and non-negative, got {baseline}")));
        }
        Ok(Self { baseline, measure })
    }

    /// Unit step at `a` with the given height.
    pub fn step(a: f64, height: f64) -> Result<Self> {
        Self::new(0.0, StieltjesMeasure::from_atoms(&[(a, height)])?)
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(value, StieltjesMeasure::zero())
    }

    pub fn baseline(&self) -> f64 {
        self.baseline
    }

    pub fn measure(&self) -> &StieltjesMeasure {
        &self.measure
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.baseline + self.measure.midpoint_mass_below(x)
    }

    /// `nu` at `p.anchor + p.offset`; when the offset is lost to rounding on
    /// top of an atom, the side of the atom is taken from the offset's sign.
    pub fn cdf_point(&self, p: Point) -> f64 {
        let x = p.value();
        let base = self.cdf(x);
        match self.measure.atom_at(x) {
            Some(m) => {
                let d = p.distance_to(x);
                if d > 0.0 {
                    base + 0.5 * m
                } else if d < 0.0 {
                    base - 0.5 * m
                } else {
                    base
                }
            }
            None => base,
        }
    }

    /// `nu(+inf)`.
    pub fn upper_limit(&self) -> f64 {
        self.baseline + self.measure.total_mass()
    }

    /// Checks `0 <= nu <= 1`, the range required by the logarithmic classes.
    pub fn check_unit_range(&self) -> Result<()> {
        let top = self.upper_limit();
        if top > 1.0 + STRUCTURAL_TOL {
            return Err(Error::InvalidMeasure(format!("nu must stay below 1 but reaches {top}")));
        }
        Ok(())
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        (self.baseline - other.baseline).abs() <= STRUCTURAL_TOL && self.measure.approx_eq(&other.measure)
    }
}

pub fn total_mass(m: &StieltjesMeasure) -> f64 {
    m.total_mass()
}

pub fn sup_atom(m: &StieltjesMeasure) -> f64 {
    m.sup_atom()
}

pub fn cdf(n: &NuFunction, x: f64) -> f64 {
    n.cdf(x)
}

pub fn support_count_at_least_two(m: &StieltjesMeasure) -> bool {
    m.support_count_at_least_two()
}

/// Tail integrals controlling which functions are primitives of Pick functions.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TailReport {
    /// `int_1^inf nu(t) / t^2 dt`
    pub integral_nu_over_t2: f64,
    /// `int_[1, inf) dnu(t) / t`
    pub integral_dnu_over_t: f64,
    /// `nu(T) / T` at the largest probed `T`.
    pub nu_over_t_limit_estimate: f64,
    pub limit_radius: f64,
}

const TAIL_PROBE_RADIUS: f64 = 1e12;

pub fn tail_conditions(n: &NuFunction) -> Result<TailReport> {
    let opts = QuadOptions::with_tol(1e-13, 1e-11);
    let m = n.measure();

    // nu is piecewise smooth between breakpoints; integrate it against 1/t^2 directly.
    let mut pts: Vec<f64> = m.breakpoints().into_iter().filter(|&b| b > 1.0).collect();
    pts.insert(0, 1.0);
    let nu_t = |p: Point| n.cdf(p.value()) / (p.value() * p.value());
    let finite = quad::tanh_sinh_pieces(nu_t, &pts, &opts)?;
    let tail = quad::semi_infinite(nu_t, *pts.last().unwrap(), &opts)?;
    let integral_nu_over_t2 = finite.value + tail.value;

    let mut dnu = m.atoms().iter().filter(|a| a.location >= 1.0).map(|a| a.mass / a.location).sum::<f64>();
    let only_tail = StieltjesMeasure::new(Vec::new(), m.pieces().to_vec())?;
    let inv = only_tail.integrate(
        |p: Point| if p.value() >= 1.0 { 1.0 / p.value() } else { 0.0 },
        Cuts::Smooth(&[1.0]),
        &opts,
    )?;
    dnu += inv.value;

    let nu_over_t_limit_estimate = n.cdf(TAIL_PROBE_RADIUS) / TAIL_PROBE_RADIUS;
    let report = TailReport {
        integral_nu_over_t2,
        integral_dnu_over_t: dnu,
        nu_over_t_limit_estimate,
        limit_radius: TAIL_PROBE_RADIUS,
    };
    if ![report.integral_nu_over_t2, report.integral_dnu_over_t, report.nu_over_t_limit_estimate]
        .iter()
        .all(|v| v.is_finite())
    {
        return Err(Error::InvalidMeasure("tail integrals diverge".into()));
    }
    Ok(report)
}

/// Moves a probability measure on `[0, 1]` to `nu(t) = 1 - mu(1/t)` on `[1, inf)`.
/// An atom of `mu` at `s > 0` becomes an atom at `1/s`; an atom at `0` is dropped.
pub fn nu_from_mu_unit(mu: &StieltjesMeasure) -> Result<NuFunction> {
    for a in mu.atoms() {
        if !(0.0..=1.0).contains(&a.location) {
            return Err(Error::InvalidMeasure(format!("atom at {} lies outside [0, 1]", a.location)));
        }
    }
    let mut pieces = Vec::new();
    for p in mu.pieces() {
        match p.law() {
            DensityLaw::Polynomial(poly) if p.lo() >= 0.0 && p.hi() <= 1.0 => {
                if p.mass() > 0.0 {
                    pieces.push(DensityPiece::pullback(p.lo(), p.hi(), poly.coeffs().to_vec())?);
                }
            }
            _ => {
                return Err(Error::InvalidMeasure(format!(
                    "density piece on [{}, {}] is not a polynomial inside [0, 1]",
                    p.lo(),
                    p.hi()
                )))
            }
        }
    }
    let total = mu.total_mass();
    if (total - 1.0).abs() > STRUCTURAL_TOL {
        return Err(Error::InvalidMeasure(format!("mu must have total mass 1, got {total}")));
    }
    let mut atoms: Vec<Atom> = mu
        .atoms()
        .iter()
        .filter(|a| a.location > 0.0)
        .map(|a| Atom {
            location: 1.0 / a.location,
            mass: a.mass,
        })
        .collect();
    atoms.reverse();
    NuFunction::new(0.0, StieltjesMeasure::new(atoms, pieces)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_atoms() -> StieltjesMeasure {
        StieltjesMeasure::from_atoms(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap()
    }

    #[test]
    fn mass_and_sup() {
        assert_eq!(StieltjesMeasure::from_atoms(&[(1.0, 1.0)]).unwrap().total_mass(), 1.0);
        assert_eq!(two_atoms().total_mass(), 1.0);
        assert_eq!(two_atoms().sup_atom(), 0.5);
        let box_ = StieltjesMeasure::new(vec![], vec![DensityPiece::polynomial(0.0, 2.0, vec![0.3]).unwrap()]).unwrap();
        assert!((box_.total_mass() - 0.6).abs() < 1e-15);
        assert_eq!(box_.sup_atom(), 0.0);
        assert!(box_.support_count_at_least_two());
        assert!(!StieltjesMeasure::from_atoms(&[(0.0, 1.0)]).unwrap().support_count_at_least_two());
        assert!(two_atoms().support_count_at_least_two());
    }

    #[test]
    fn midpoint_cdf() {
        let h = NuFunction::step(0.0, 1.0).unwrap();
        assert_eq!(h.cdf(-1.0), 0.0);
        assert_eq!(h.cdf(0.0), 0.5);
        assert_eq!(h.cdf(1.0), 1.0);
        assert_eq!(NuFunction::constant(0.25).unwrap().cdf(7.0), 0.25);
        assert_eq!(NuFunction::new(0.0, two_atoms()).unwrap().cdf(0.0), 0.5);
    }

    #[test]
    fn rejects_invalid_measures() {
        assert!(StieltjesMeasure::from_atoms(&[(1.0, 0.5), (0.0, 0.5)]).is_err());
        assert!(StieltjesMeasure::from_atoms(&[(1.0, 0.0)]).is_err());
        assert!(DensityPiece::polynomial(0.0, 1.0, vec![1.0, -2.0]).is_err());
        assert!(DensityPiece::polynomial(0.0, 1.0, vec![0.0, 0.0, 1.0, 0.0, 1.0]).is_err());
        // dips below zero only at an interior critical point
        assert!(DensityPiece::polynomial(0.0, 2.0, vec![0.2, -1.0, 1.0]).is_err());
        let a = DensityPiece::polynomial(0.0, 2.0, vec![1.0]).unwrap();
        let b = DensityPiece::polynomial(1.0, 3.0, vec![1.0]).unwrap();
        assert!(StieltjesMeasure::new(vec![], vec![a, b]).is_err());
    }

    #[test]
    fn tail_examples() {
        let h = tail_conditions(&NuFunction::step(0.0, 1.0).unwrap()).unwrap();
        assert!((h.integral_nu_over_t2 - 1.0).abs() < 1e-10);
        assert_eq!(h.integral_dnu_over_t, 0.0);
        let t = tail_conditions(&NuFunction::step(2.0, 1.0).unwrap()).unwrap();
        assert!((t.integral_dnu_over_t - 0.5).abs() < 1e-15);
        // nu = 0 on [1, 2), 1 after: int_2^inf 1/t^2 = 1/2
        assert!((t.integral_nu_over_t2 - 0.5).abs() < 1e-10);
    }

    #[test]
    fn mu_to_nu_examples() {
        let d1 = nu_from_mu_unit(&StieltjesMeasure::from_atoms(&[(1.0, 1.0)]).unwrap()).unwrap();
        assert!(d1.approx_eq(&NuFunction::step(1.0, 1.0).unwrap()));
        let d0 = nu_from_mu_unit(&StieltjesMeasure::from_atoms(&[(0.0, 1.0)]).unwrap()).unwrap();
        assert!(d0.measure().is_zero() && d0.baseline() == 0.0);
        let half = nu_from_mu_unit(&StieltjesMeasure::from_atoms(&[(0.0, 0.5), (0.5, 0.5)]).unwrap()).unwrap();
        assert!(half.approx_eq(&NuFunction::step(2.0, 0.5).unwrap()));
        assert!(nu_from_mu_unit(&StieltjesMeasure::from_atoms(&[(1.0, 0.9)]).unwrap()).is_err());
        assert!(nu_from_mu_unit(&StieltjesMeasure::from_atoms(&[(2.0, 1.0)]).unwrap()).is_err());
    }

    #[test]
    fn uniform_mu_gives_inverse_square_density() {
        let mu = StieltjesMeasure::new(vec![], vec![DensityPiece::polynomial(0.0, 1.0, vec![1.0]).unwrap()]).unwrap();
        let nu = nu_from_mu_unit(&mu).unwrap();
        // nu(t) = 1 - 1/t for t >= 1
        for t in [1.5, 2.0, 10.0, 1e6] {
            assert!((nu.cdf(t) - (1.0 - 1.0 / t)).abs() < 1e-14);
        }
        assert!((nu.measure().pieces()[0].density(4.0) - 1.0 / 16.0).abs() < 1e-15);
        assert!((nu.measure().total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exp_tail_mass_and_cdf() {
        let p = DensityPiece::exp_convex(1.0, (-1.0f64).exp(), 1.0, 1.0).unwrap();
        assert!((p.mass() - (-1.0f64).exp()).abs() < 1e-14);
        // int_1^3 e^{-t} dt
        assert!((p.mass_below(3.0) - ((-1.0f64).exp() - (-3.0f64).exp())).abs() < 1e-14);
        assert!((p.mass_above(40.0) / (-40.0f64).exp() - 1.0).abs() < 1e-12);
        let g = DensityPiece::exp_convex(0.0, 1.0, 1.0, 2.0).unwrap();
        assert!((g.mass() - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
        let psi = ConvexPotential::new("t", true, |t| t).unwrap();
        let q = DensityPiece::potential(1.0, psi).unwrap();
        assert!((q.mass() - (-1.0f64).exp()).abs() < 1e-13);
        assert!(ConvexPotential::new("x", false, |t| t).is_err());
    }

    #[test]
    fn integrate_against_pieces() {
        let o = QuadOptions::with_tol(1e-14, 1e-13);
        let mu = StieltjesMeasure::new(vec![], vec![DensityPiece::polynomial(0.0, 1.0, vec![1.0]).unwrap()]).unwrap();
        let nu = nu_from_mu_unit(&mu).unwrap();
        // int_1^inf t^{-1} t^{-2} dt = 1/2
        let e = nu.measure().integrate(|p: Point| 1.0 / p.value(), Cuts::Smooth(&[]), &o).unwrap();
        assert!((e.value - 0.5).abs() < 1e-12);
        // singular at an interior point: int_1^inf ln|t - 2| / t^2 dt; compare the two routes
        let s = nu
            .measure()
            .integrate(|p: Point| p.distance_to(2.0).abs().ln(), Cuts::SingularAt(2.0), &o)
            .unwrap();
        let exact = {
            // antiderivative of ln|t-2|/t^2: -ln|t-2|/t + (1/2) ln|(t-2)/t|
            let f = |t: f64| -((t - 2.0f64).abs().ln()) / t + 0.5 * ((t - 2.0) / t).abs().ln();
            0.0 - f(1.0)
        };
        assert!((s.value - exact).abs() < 1e-11, "{} vs {}", s.value, exact);
    }
}
