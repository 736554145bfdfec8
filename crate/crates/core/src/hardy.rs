//! `p`-th power integrals of `|phi|` along horizontal lines, the integrability
//! window `(1/nu(R), 1/sup atom)` and the divergence diagnostics used to tell
//! exponents inside the window from those outside it.
//!
//! Every line integral is computed the same way: a core interval around the
//! support of the measure, then shells `[c - 2R, c - R]` and `[c + R, c + 2R]`
//! while the radius doubles, with the two remaining tails estimated by a
//! mapped quadrature at every step. The integral has converged once two
//! consecutive full-line estimates agree; it is declared divergent once the
//! truncated integral keeps growing by more than the tolerance for
//! [`GROWTH_RUN`] doublings in a row.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::NuFunction;
use crate::plog::{detect_exceptional, PLogFunction};
use crate::quad::{gauss_kronrod, semi_infinite, tanh_sinh_pieces, Point, QuadOptions};

/// Default largest truncation radius.
pub const DEFAULT_MAX_RADIUS: f64 = 1_048_576.0;

/// Number of consecutive doublings with growth above tolerance after which a
/// truncated integral is reported divergent.
pub const GROWTH_RUN: usize = 6;

/// An increment counts toward a growth run only if it is at least this
/// fraction of the previous one. Convergent power tails shrink by a fixed
/// factor per doubling; divergent ones do not shrink.
const GROWTH_RATIO: f64 = 0.9;

/// Number of quarterings of `y` looked at by [`near_axis_trend`].
pub const NEAR_AXIS_LEVELS: usize = 6;

/// Exponents `p` for which `|phi|^p` is integrable on horizontal lines with
/// bounded integrals: `lower < p < upper`. `upper` is `+inf` when the measure
/// has no atoms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PWindow {
    pub lower: f64,
    pub upper: f64,
}

impl PWindow {
    pub fn contains(&self, p: f64) -> bool {
        p > self.lower && p < self.upper
    }

    /// Signed distance from `p` to the nearest edge; positive inside.
    pub fn margin(&self, p: f64) -> f64 {
        (p - self.lower).min(self.upper - p)
    }

    pub fn is_empty(&self) -> bool {
        self.lower >= self.upper
    }
}

pub fn p_window(n: &NuFunction) -> Result<PWindow> {
    let m = n.measure();
    let mass = m.total_mass();
    if mass <= 0.0 {
        return Err(Error::InvalidMeasure(
            "zero measure: the function is constant and has no integrability window".into(),
        ));
    }
    if mass > 1.0 + 1e-12 {
        return Err(Error::InvalidMeasure(format!("total mass {mass} exceeds 1")));
    }
    let sup = m.sup_atom();
    let upper = if sup > 0.0 { 1.0 / sup } else { f64::INFINITY };
    Ok(PWindow { lower: 1.0 / mass, upper })
}

/// Settings for the radius-doubling line integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct LineOptions {
    pub quad: QuadOptions,
    /// Abscissae where the integrand may peak (atoms, piece endpoints).
    pub hints: Vec<f64>,
    pub max_radius: f64,
}

impl Default for LineOptions {
    fn default() -> Self {
        Self {
            quad: QuadOptions::default(),
            hints: Vec::new(),
            max_radius: max_radius_from_env().unwrap_or(DEFAULT_MAX_RADIUS),
        }
    }
}

impl LineOptions {
    pub fn with_hints(mut self, hints: &[f64]) -> Self {
        self.hints.extend(hints.iter().copied().filter(|h| h.is_finite()));
        self.hints.sort_by(f64::total_cmp);
        self.hints.dedup();
        self
    }

    fn validate(&self) -> Result<()> {
        self.quad.tol.validate()?;
        if !(self.max_radius > 0.0) {
            return Err(Error::InvalidArgument(format!("max radius must be positive, got {}", self.max_radius)));
        }
        Ok(())
    }

    /// Centre and starting radius of the core interval.
    fn core_interval(&self) -> (f64, f64) {
        match (self.hints.first(), self.hints.last()) {
            (Some(&lo), Some(&hi)) => (0.5 * (lo + hi), 2.0 * (0.5 * (hi - lo) + 1.0)),
            _ => (0.0, 2.0),
        }
    }
}

/// Reads `HS_MAX_RADIUS`; unparsable or non-positive values are ignored.
pub fn max_radius_from_env() -> Option<f64> {
    std::env::var("HS_MAX_RADIUS")
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|r| *r > 0.0)
}

/// Outcome of a radius-doubling integral over the real line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineNorm {
    pub p: f64,
    pub y: f64,
    /// Full-line estimate when converged, otherwise the last truncated integral.
    pub value: f64,
    pub converged: bool,
    /// Sustained growth of the truncated integral was observed.
    pub diverging: bool,
    pub radius: f64,
    /// `(radius, truncated integral)` after each doubling.
    pub history: Vec<(f64, f64)>,
    pub note: Option<String>,
}

impl LineNorm {
    fn failed(p: f64, y: f64, radius: f64, history: Vec<(f64, f64)>, err: &Error) -> Self {
        let value = history.last().map_or(f64::NAN, |h| h.1);
        Self {
            p,
            y,
            value,
            converged: false,
            diverging: false,
            radius,
            history,
            note: Some(err.to_string()),
        }
    }
}

fn doubling<G>(g: &G, core: Result<f64>, p: f64, y: f64, opts: &LineOptions) -> LineNorm
where
    G: Fn(Point) -> f64 + Sync,
{
    let (c, mut r) = opts.core_interval();
    let cap = opts.max_radius.max(4.0 * r);
    let mut core = match core {
        Ok(v) => v,
        Err(e) => return LineNorm::failed(p, y, r, Vec::new(), &e),
    };
    let mut history = vec![(r, core)];
    let tol = opts.quad.tol;
    let tail = |r: f64| -> Option<f64> {
        let right = semi_infinite(|q: Point| g(Point { anchor: c + r, offset: q.offset }), 0.0, &opts.quad).ok()?;
        let left = semi_infinite(|q: Point| g(Point { anchor: c - r, offset: -q.offset }), 0.0, &opts.quad).ok()?;
        let v = right.value + left.value;
        v.is_finite().then_some(v)
    };
    let mut prev_est: Option<f64> = None;
    let mut prev_inc: Option<f64> = None;
    let mut run = 0;
    loop {
        let est = tail(r).map(|t| core + t);
        if let (Some(e), Some(pe)) = (est, prev_est) {
            if (e - pe).abs() <= tol.target(e) {
                return LineNorm { p, y, value: e, converged: true, diverging: false, radius: r, history, note: None };
            }
        }
        prev_est = est;
        if 2.0 * r > cap {
            return LineNorm {
                p,
                y,
                value: core,
                converged: false,
                diverging: false,
                radius: r,
                history,
                note: Some(format!("radius cap {cap} reached")),
            };
        }
        let shell = |a: f64, b: f64| gauss_kronrod(|x: f64| g(Point::at(x)), a, b, &opts.quad).map(|e| e.value);
        let inc = match (shell(c - 2.0 * r, c - r), shell(c + r, c + 2.0 * r)) {
            (Ok(a), Ok(b)) => a + b,
            (Err(e), _) | (_, Err(e)) => return LineNorm::failed(p, y, r, history, &e),
        };
        core += inc;
        r *= 2.0;
        history.push((r, core));
        let growing = inc > tol.target(core) && prev_inc.is_none_or(|pi| inc >= GROWTH_RATIO * pi);
        run = if growing { run + 1 } else { 0 };
        prev_inc = Some(inc);
        if run >= GROWTH_RUN {
            return LineNorm {
                p,
                y,
                value: core,
                converged: false,
                diverging: true,
                radius: r,
                history,
                note: Some(format!("truncated integral grew over {GROWTH_RUN} consecutive doublings")),
            };
        }
    }
}

/// Core interval for a line above the axis. Around every hint the abscissa
/// is written `x = hint + y sinh(u)`, which spreads a peak of width `y` over
/// a unit range of `u`.
fn line_core<G>(g: &G, y: f64, opts: &LineOptions) -> Result<f64>
where
    G: Fn(Point) -> f64,
{
    let (c, r) = opts.core_interval();
    let (lo, hi) = (c - r, c + r);
    let hints: Vec<f64> = opts.hints.iter().copied().filter(|h| *h > lo && *h < hi).collect();
    let mut total = 0.0;
    let mut left = lo;
    for (i, &h) in hints.iter().enumerate() {
        let prev = if i == 0 { lo } else { hints[i - 1] };
        let next = hints.get(i + 1).copied().unwrap_or(hi);
        let w = (0.5 * (h - prev)).min(0.5 * (next - h)).min(1.0);
        if h - w > left {
            total += gauss_kronrod(|x: f64| g(Point::at(x)), left, h - w, &opts.quad)?.value;
        }
        let umax = (w / y).asinh();
        let local = |u: f64| {
            let off = y * u.sinh();
            g(Point { anchor: h, offset: off }) * y * u.cosh()
        };
        total += gauss_kronrod(local, -umax, 0.0, &opts.quad)?.value;
        total += gauss_kronrod(local, 0.0, umax, &opts.quad)?.value;
        left = h + w;
    }
    if hi > left {
        total += gauss_kronrod(|x: f64| g(Point::at(x)), left, hi, &opts.quad)?.value;
    }
    Ok(total)
}

fn check_exponent(p: f64, y: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite()) || !(y > 0.0 && y.is_finite()) {
        return Err(Error::InvalidArgument(format!("need p > 0 and y > 0, got p={p}, y={y}")));
    }
    Ok(())
}

/// `int |phi(x + iy)|^p dx` over the real line.
///
/// Failing to converge is a regular outcome, reported through the flags of
/// the result. Only invalid arguments are errors.
pub fn line_p_norm<F>(phi: F, p: f64, y: f64, opts: &LineOptions) -> Result<LineNorm>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    check_exponent(p, y)?;
    opts.validate()?;
    let g = |q: Point| match phi(Complex64::new(q.value(), y)) {
        Ok(w) => w.norm().powf(p),
        Err(_) => f64::NAN,
    };
    let core = line_core(&g, y, opts);
    Ok(doubling(&g, core, p, y, opts))
}

/// `int |phi(x + iy)|^(-p) dx / (1 + x^2)`. For `p > 1/nu(R)` this diverges on
/// every line, which is what the growth flag of the result reports.
pub fn reciprocal_weight_integral<F>(phi: F, p: f64, y: f64, opts: &LineOptions) -> Result<LineNorm>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    check_exponent(p, y)?;
    opts.validate()?;
    let g = |q: Point| {
        let x = q.value();
        match phi(Complex64::new(x, y)) {
            Ok(w) => w.norm().powf(-p) / (1.0 + x * x),
            Err(_) => f64::NAN,
        }
    };
    let core = line_core(&g, y, opts);
    Ok(doubling(&g, core, p, y, opts))
}

/// `int |phi(x)|^p dx` over the boundary, with `|phi(x)| = exp(U(x))` taken
/// from the boundary log-modulus. Atoms are tanh-sinh endpoints.
pub fn boundary_p_norm(f: &PLogFunction, p: f64, opts: &LineOptions) -> Result<LineNorm> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("need p > 0, got {p}")));
    }
    let opts = opts.clone().with_hints(&f.nu().measure().breakpoints());
    opts.validate()?;
    let prim = f.log_part().as_primitive();
    let g = |q: Point| match prim.boundary_u_point(q, &opts.quad) {
        Ok(u) => (p * u).exp(),
        Err(_) => f64::NAN,
    };
    let (c, r) = opts.core_interval();
    let mut pts = vec![c - r];
    pts.extend(opts.hints.iter().copied().filter(|h| *h > c - r && *h < c + r));
    pts.push(c + r);
    let core = tanh_sinh_pieces(g, &pts, &opts.quad).map(|e| e.value);
    Ok(doubling(&g, core, p, 0.0, &opts))
}

/// Line integrals at `y, y/4, y/16, ...` and whether they keep growing as
/// the line approaches the axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearAxisTrend {
    pub p: f64,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
    pub lines_converged: bool,
    /// The values increase and their increments do not shrink.
    pub diverging: bool,
}

pub fn near_axis_trend<F>(phi: F, p: f64, y: f64, opts: &LineOptions) -> Result<NearAxisTrend>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    check_exponent(p, y)?;
    let ys: Vec<f64> = (0..=NEAR_AXIS_LEVELS).map(|k| y * 0.25f64.powi(k as i32)).collect();
    let lines: Vec<LineNorm> = ys
        .par_iter()
        .map(|&yk| line_p_norm(&phi, p, yk, opts))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = lines.iter().map(|l| l.value).collect();
    let lines_converged = lines.iter().all(|l| l.converged);
    let incs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let tail = &incs[incs.len() - 3..];
    let growing = tail.iter().all(|d| *d > opts.quad.tol.target(values[values.len() - 1]))
        && tail.windows(2).all(|w| w[1] >= w[0]);
    Ok(NearAxisTrend {
        p,
        ys,
        values,
        lines_converged,
        diverging: !lines_converged || growing,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub y: f64,
    pub p: f64,
    pub value: f64,
    /// The line integral converged and the exponent showed no near-axis blow-up.
    pub converged: bool,
    pub line_converged: bool,
    pub radius: f64,
}

/// Per-exponent diagnostics of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentReport {
    pub p: f64,
    pub in_window: bool,
    pub near_axis: NearAxisTrend,
    /// `int |phi|^(-p) dx/(1 + x^2)` on the lowest line of the sweep.
    pub reciprocal_weight: LineNorm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormSweep {
    pub window: PWindow,
    /// Sorted by `y`, then by `p`.
    pub entries: Vec<SweepEntry>,
    pub exponents: Vec<ExponentReport>,
}

impl NormSweep {
    /// Converged values for `p` in order of increasing `y`.
    pub fn series(&self, p: f64) -> Vec<(f64, f64)> {
        self.entries
            .iter()
            .filter(|e| e.p == p && e.converged)
            .map(|e| (e.y, e.value))
            .collect()
    }

    /// Whether all entries for `p` converged and strictly decrease in `y` by
    /// at least `rel` relative to the larger value.
    pub fn strictly_decreasing(&self, p: f64, rel: f64) -> bool {
        let all = self.entries.iter().filter(|e| e.p == p).count();
        let s = self.series(p);
        s.len() == all && s.len() >= 2 && s.windows(2).all(|w| w[0].1 - w[1].1 > rel * w[0].1)
    }

    pub fn exponent(&self, p: f64) -> Option<&ExponentReport> {
        self.exponents.iter().find(|e| e.p == p)
    }
}

/// Line integrals of `|phi|^p` for every `(p, y)` pair, plus near-axis and
/// reciprocal-weight diagnostics per exponent.
pub fn window_sweep(f: &PLogFunction, ps: &[f64], ys: &[f64], opts: &LineOptions) -> Result<NormSweep> {
    if let Some(ex) = detect_exceptional(f.nu()) {
        return Err(Error::Exceptional(format!(
            "measure has fewer than two growing points (theta={}, atom={:?}); use the closed form c/(a - z)^theta",
            ex.theta, ex.a
        )));
    }
    let window = p_window(f.nu())?;
    if ps.is_empty() || ys.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one p and one y".into()));
    }
    let opts = opts.clone().with_hints(&f.nu().measure().breakpoints());
    let phi = |z: Complex64| f.eval_phi_with(z, &opts.quad);
    let y_min = ys.iter().copied().fold(f64::INFINITY, f64::min);

    let mut ps_sorted = ps.to_vec();
    ps_sorted.sort_by(f64::total_cmp);
    ps_sorted.dedup();
    let exponents: Vec<ExponentReport> = ps_sorted
        .par_iter()
        .map(|&p| {
            Ok(ExponentReport {
                p,
                in_window: window.contains(p),
                near_axis: near_axis_trend(phi, p, y_min, &opts)?,
                reciprocal_weight: reciprocal_weight_integral(phi, p, y_min, &opts)?,
            })
        })
        .collect::<Result<_>>()?;

    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for &y in ys {
        for &p in &ps_sorted {
            pairs.push((y, p));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pairs.dedup();
    let mut entries: Vec<SweepEntry> = pairs
        .par_iter()
        .map(|&(y, p)| {
            let line = line_p_norm(phi, p, y, &opts)?;
            let blowup = exponents.iter().find(|e| e.p == p).is_some_and(|e| e.near_axis.diverging);
            Ok(SweepEntry {
                y,
                p,
                value: line.value,
                converged: line.converged && !blowup,
                line_converged: line.converged,
                radius: line.radius,
            })
        })
        .collect::<Result<_>>()?;
    entries.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.p.total_cmp(&b.p)));
    Ok(NormSweep { window, entries, exponents })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{DensityPiece, StieltjesMeasure};
    use std::f64::consts::PI;

    fn two_atoms() -> PLogFunction {
        let m = StieltjesMeasure::from_atoms(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        PLogFunction::from_nu(0.0, NuFunction::new(0.0, m).unwrap()).unwrap()
    }

    #[test]
    fn window_examples() {
        let w = p_window(two_atoms().nu()).unwrap();
        assert_eq!((w.lower, w.upper), (1.0, 2.0));
        let d = StieltjesMeasure::new(Vec::new(), vec![DensityPiece::polynomial(1.0, 3.0, vec![0.5]).unwrap()]).unwrap();
        let w = p_window(&NuFunction::new(0.0, d).unwrap()).unwrap();
        assert_eq!(w.lower, 1.0);
        assert!(w.upper.is_infinite());
        let w = p_window(&NuFunction::step(0.0, 1.0).unwrap()).unwrap();
        assert!(w.is_empty());
        assert!(p_window(&NuFunction::constant(0.3).unwrap()).is_err());
    }

    #[test]
    fn reciprocal_line_norms() {
        let phi = |z: Complex64| Ok(-1.0 / z);
        let opts = LineOptions::default();
        let n = line_p_norm(phi, 2.0, 1.0, &opts).unwrap();
        assert!(n.converged, "{n:?}");
        assert!((n.value - PI).abs() < 1e-7, "{}", n.value);
        let n = line_p_norm(phi, 2.0, 2.0, &opts).unwrap();
        assert!((n.value - PI / 2.0).abs() < 1e-7);
    }

    #[test]
    fn constant_does_not_converge() {
        let n = line_p_norm(|_| Ok(Complex64::new(1.0, 0.0)), 1.0, 1.0, &LineOptions::default()).unwrap();
        assert!(!n.converged && n.diverging);
    }

    #[test]
    fn two_atom_line_matches_closed_form() {
        // |phi|^2 = 2/|z^2 - 1|
        let f = two_atoms();
        let opts = LineOptions::default().with_hints(&[-1.0, 1.0]);
        let y: f64 = 0.5;
        let n = line_p_norm(|z| f.eval_phi(z), 2.0, y, &opts).unwrap();
        let direct = line_p_norm(|z: Complex64| Ok(Complex64::new((2.0 / (z * z - 1.0).norm()).sqrt(), 0.0)), 2.0, y, &opts)
            .unwrap();
        assert!(n.converged);
        assert!((n.value - direct.value).abs() < 1e-8 * direct.value);
    }

    #[test]
    fn boundary_dominates_lines() {
        let f = two_atoms();
        let opts = LineOptions::default();
        let b = boundary_p_norm(&f, 1.5, &opts).unwrap();
        assert!(b.converged, "{b:?}");
        let opts = opts.with_hints(&[-1.0, 1.0]);
        let l = line_p_norm(|z| f.eval_phi(z), 1.5, 0.1, &opts).unwrap();
        assert!(l.value < b.value);
    }

    #[test]
    fn exceptional_sweep_rejected() {
        let f = PLogFunction::from_nu(0.0, NuFunction::step(0.0, 0.5).unwrap()).unwrap();
        assert!(matches!(window_sweep(&f, &[1.5], &[1.0], &LineOptions::default()), Err(Error::Exceptional(_))));
    }
}
