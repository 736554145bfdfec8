//! Transforms of non-negative boundary densities on the real line: the
//! principal-value Hilbert transform, the Cauchy transform into the upper
//! half-plane, the Poisson integral of a non-decreasing function, the
//! two-point determinant built from a density and its Hilbert transform, and
//! a numerical form of the generalized Hölder inequality.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Cuts, NuFunction, StieltjesMeasure};
use crate::plog::{sin_pi, v_from_nu_point, PhaseFunction};
use crate::quad::{self, Estimate, Point, QuadOptions, QuadValue, Tolerance};

/// Behaviour of a density at `+inf` (and at `-inf` when its support is unbounded below).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayClass {
    /// `v = 0` above `upper`.
    CompactSupport { upper: f64 },
    /// `v = O(exp(-rate |t|))`.
    Exponential { rate: f64 },
    /// `v = O(|t|^-exponent)`.
    Power { exponent: f64 },
    /// Mass concentrated at a point; not a function in any `L_p`.
    Concentrated,
}

type DensityFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

/// Non-negative function on the real line, zero below `support_lower`.
///
/// The callable receives a [`Point`] so that densities with integrable
/// singularities at their breakpoints can be evaluated arbitrarily close to them.
#[derive(Clone)]
pub struct BoundaryDensity {
    v: DensityFn,
    support_lower: f64,
    decay: DecayClass,
    breakpoints: Vec<f64>,
    label: String,
}

impl fmt::Debug for BoundaryDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryDensity")
            .field("label", &self.label)
            .field("support_lower", &self.support_lower)
            .field("decay", &self.decay)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl BoundaryDensity {
    /// `breakpoints` lists points where `v` is not smooth (jumps, integrable
    /// singularities); quadrature never straddles them.
    pub fn new(
        label: impl Into<String>,
        support_lower: f64,
        decay: DecayClass,
        breakpoints: Vec<f64>,
        v: impl Fn(Point) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if support_lower.is_nan() || support_lower == f64::INFINITY {
            return Err(Error::InvalidArgument("support lower bound must be finite or -inf".into()));
        }
        match decay {
            DecayClass::CompactSupport { upper } if !(upper.is_finite() && upper >= support_lower) => {
                return Err(Error::InvalidArgument(format!("compact support upper end {upper} is invalid")))
            }
            DecayClass::Exponential { rate } if !(rate > 0.0 && rate.is_finite()) => {
                return Err(Error::InvalidArgument(format!("exponential decay rate {rate} is invalid")))
            }
            DecayClass::Power { exponent } if !exponent.is_finite() => {
                return Err(Error::InvalidArgument(format!("power decay exponent {exponent} is invalid")))
            }
            _ => {}
        }
        if matches!(decay, DecayClass::CompactSupport { .. }) && !support_lower.is_finite() {
            return Err(Error::InvalidArgument("compact support needs a finite lower end".into()));
        }
        let mut bps: Vec<f64> = breakpoints.into_iter().filter(|b| b.is_finite() && *b > support_lower).collect();
        if support_lower.is_finite() {
            bps.push(support_lower);
        }
        if let DecayClass::CompactSupport { upper } = decay {
            bps.retain(|b| *b < upper);
            bps.push(upper);
        }
        bps.sort_by(f64::total_cmp);
        bps.dedup();
        Ok(Self {
            v: Arc::new(v),
            support_lower,
            decay,
            breakpoints: bps,
            label: label.into(),
        })
    }

    /// Indicator of `[a, b]` scaled by `height`.
    pub fn indicator(a: f64, b: f64, height: f64) -> Result<Self> {
        if !(a < b) || !(height >= 0.0) {
            return Err(Error::InvalidArgument(format!("bad indicator [{a}, {b}] x {height}")));
        }
        Self::new(
            format!("{height}*indicator[{a},{b}]"),
            a,
            DecayClass::CompactSupport { upper: b },
            vec![],
            move |p: Point| {
                let t = p.value();
                if p.distance_to(a) >= 0.0 && p.distance_to(b) <= 0.0 && t >= a && t <= b {
                    height
                } else {
                    0.0
                }
            },
        )
    }

    /// The zero density.
    pub fn zero() -> Self {
        Self::new("0", 0.0, DecayClass::CompactSupport { upper: 0.0 }, vec![], |_| 0.0).expect("zero density")
    }

    /// Boundary imaginary part of `exp(beta + int log(sqrt(1+t^2)/(t - z)) dnu)`.
    pub fn from_nu(nu: &NuFunction, beta: f64) -> Result<Self> {
        let m = nu.measure();
        if !m.support_count_at_least_two() {
            return Err(Error::Exceptional(
                "fewer than two growing points; boundary density formula inapplicable".into(),
            ));
        }
        let (lo, hi) = m.support_hull().expect("non-empty support");
        let support_lower = if nu.baseline() > 0.0 { f64::NEG_INFINITY } else { lo };
        let top = nu.upper_limit();
        let decay = if (top - 1.0).abs() <= 1e-15 && hi.is_finite() {
            DecayClass::CompactSupport { upper: hi }
        } else {
            // |phi(x)| ~ |x|^-mass at both ends
            DecayClass::Power { exponent: m.total_mass() }
        };
        let n = nu.clone();
        let opts = QuadOptions::with_tol(1e-14, 1e-12);
        Self::new(format!("boundary density of nu (beta={beta})"), support_lower, decay, m.breakpoints(), move |p| {
            v_from_nu_point(&n, beta, p, &opts).unwrap_or(f64::NAN)
        })
    }

    /// Boundary imaginary part of a piecewise-constant-phase function.
    pub fn from_phase(phase: &PhaseFunction) -> Result<Self> {
        let bps = phase.breaks().to_vec();
        let vals = phase.values();
        let (first, last) = (vals[0], vals[vals.len() - 1]);
        let zero_left = first == 0.0 || first == 1.0;
        let zero_right = last == 0.0 || last == 1.0;
        let lo = bps.first().copied().unwrap_or(0.0);
        let hi = bps.last().copied().unwrap_or(0.0);
        let support_lower = if zero_left { lo } else { f64::NEG_INFINITY };
        let decay = if zero_left && zero_right {
            DecayClass::CompactSupport { upper: hi }
        } else {
            DecayClass::Power { exponent: last - first }
        };
        let ph = phase.clone();
        Self::new("boundary density of a phase function", support_lower, decay, bps, move |p| {
            match ph.boundary_polar_point(p) {
                Ok((modulus, rho)) => sin_pi(rho) * modulus,
                Err(_) => f64::NAN,
            }
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn support_lower(&self) -> f64 {
        self.support_lower
    }

    pub fn decay(&self) -> DecayClass {
        self.decay
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_point(Point::at(x))
    }

    pub fn eval_point(&self, p: Point) -> f64 {
        if p.distance_to(self.support_lower) < 0.0 {
            return 0.0;
        }
        if let DecayClass::CompactSupport { upper } = self.decay {
            if p.distance_to(upper) > 0.0 {
                return 0.0;
            }
        }
        (self.v)(p)
    }

    fn upper_end(&self) -> f64 {
        match self.decay {
            DecayClass::CompactSupport { upper } => upper,
            _ => f64::INFINITY,
        }
    }

    /// `int g(t) v(t) dt` over the support, cut at breakpoints and `cuts`.
    pub fn integrate<T, F>(&self, g: F, cuts: &[f64], opts: &QuadOptions) -> Result<Estimate<T>>
    where
        T: QuadValue,
        F: Fn(Point) -> T,
    {
        self.integrate_range(g, f64::NEG_INFINITY, f64::INFINITY, cuts, opts)
    }

    /// `int_lo^hi g(t) v(t) dt`.
    pub fn integrate_range<T, F>(&self, g: F, lo: f64, hi: f64, cuts: &[f64], opts: &QuadOptions) -> Result<Estimate<T>>
    where
        T: QuadValue,
        F: Fn(Point) -> T,
    {
        let lo = lo.max(self.support_lower);
        let hi = hi.min(self.upper_end());
        if !(lo < hi) {
            return Ok(Estimate { value: T::default(), error: 0.0 });
        }
        let mut pts: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(cuts)
            .copied()
            .filter(|b| b.is_finite() && *b > lo && *b < hi)
            .collect();
        if lo.is_finite() {
            pts.push(lo);
        }
        if hi.is_finite() {
            pts.push(hi);
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let integrand = |p: Point| g(p) * self.eval_point(p);
        let segments = pts.len() + 2;
        let local = QuadOptions {
            tol: Tolerance::new(opts.tol.abs / segments as f64, opts.tol.rel),
            ..*opts
        };
        let mut acc = Estimate { value: T::default(), error: 0.0 };
        let mut add = |e: Estimate<T>| {
            acc.value = acc.value + e.value;
            acc.error += e.error;
        };
        if pts.is_empty() {
            // unbounded on both sides and no breakpoints: split at 0
            pts.push(0.0);
        }
        if !lo.is_finite() {
            let a = pts[0];
            add(quad::semi_infinite(|p: Point| integrand(Point { anchor: p.anchor, offset: -p.offset }), a, &local)?);
        }
        add(quad::tanh_sinh_pieces(integrand, &pts, &local)?);
        if !hi.is_finite() {
            add(quad::semi_infinite(integrand, *pts.last().unwrap(), &local)?);
        }
        Ok(acc)
    }
}

/// Schedule for principal-value integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PVQuadSpec {
    /// Initial excision half-width.
    pub eps0: f64,
    /// Maximum number of halvings of the excision half-width.
    pub halvings: u32,
    pub tol: Tolerance,
}

impl Default for PVQuadSpec {
    fn default() -> Self {
        Self {
            eps0: 1e-2,
            halvings: 12,
            tol: Tolerance::default(),
        }
    }
}

impl PVQuadSpec {
    pub fn validate(&self) -> Result<()> {
        self.tol.validate()?;
        if !(self.eps0 > 0.0 && self.eps0.is_finite()) || self.halvings == 0 || self.halvings > 60 {
            return Err(Error::InvalidArgument("PV schedule needs eps0 > 0 and 1..=60 halvings".into()));
        }
        Ok(())
    }

    fn quad_options(&self) -> QuadOptions {
        QuadOptions {
            tol: Tolerance::new(self.tol.abs * 1e-2, self.tol.rel * 1e-2),
            ..QuadOptions::default()
        }
    }
}

/// `(1/pi) P.V. int v(t)/(t - x) dt`.
///
/// Near `x` the integral is rewritten as `(1/pi) int_eps^h (v(x+t) - v(x-t))/t dt`
/// over a window `h` free of breakpoints; the excision half-width `eps` is
/// halved from `eps0`, and the sequence of truncated values is extrapolated to
/// `eps = 0` (its expansion contains odd powers of `eps` only). The rest of
/// the line is integrated directly.
pub fn hilbert_pv(v: &BoundaryDensity, x: f64, q: &PVQuadSpec) -> Result<f64> {
    q.validate()?;
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("x must be finite, got {x}")));
    }
    if v.breakpoints().contains(&x) {
        return Err(Error::InvalidArgument(format!("{x} is a breakpoint of the density; the transform is singular there")));
    }
    let opts = q.quad_options();
    let nearest = v.breakpoints().iter().map(|b| (b - x).abs()).fold(f64::INFINITY, f64::min);
    let h = (0.5 * nearest).min(1.0 + x.abs());

    let far = v.integrate_range(|p: Point| 1.0 / p.distance_to(x), f64::NEG_INFINITY, x - h, &[], &opts)?.value
        + v.integrate_range(|p: Point| 1.0 / p.distance_to(x), x + h, f64::INFINITY, &[], &opts)?.value;

    let odd = |t: f64| (v.eval(x + t) - v.eval(x - t)) / t;
    let eps0 = q.eps0.min(0.5 * h);
    let mut truncated = quad::gauss_kronrod(odd, eps0, h, &opts)?.value;
    let mut eps = eps0;
    // Neville table in the variable eps^2 after removing the linear term
    let mut history: Vec<(f64, f64)> = vec![(eps, truncated)];
    let mut last = f64::NAN;
    let mut previous = f64::NAN;
    let target = |val: f64| q.tol.target(val);
    for _ in 0..q.halvings {
        let next = 0.5 * eps;
        truncated += quad::gauss_kronrod(odd, next, eps, &opts)?.value;
        eps = next;
        history.push((eps, truncated));
        let estimate = extrapolate_odd(&history);
        if estimate.is_finite() && (estimate - last).abs() <= target(estimate) && history.len() >= 3 {
            return Ok((far + estimate) / PI);
        }
        previous = last;
        last = estimate;
    }
    Err(Error::PrincipalValue {
        last: (far + last) / PI,
        previous: (far + previous) / PI,
    })
}

/// Richardson extrapolation to `eps = 0` of values whose error is
/// `a1 eps + a3 eps^3 + a5 eps^5 + ...`, assuming `eps` halves at each step.
fn extrapolate_odd(history: &[(f64, f64)]) -> f64 {
    let n = history.len();
    let depth = n.min(5);
    let mut table: Vec<f64> = history[n - depth..].iter().map(|h| h.1).collect();
    let mut power = 1;
    for level in 1..depth {
        let factor = 2f64.powi(power);
        for k in (level..depth).rev() {
            table[k] = (factor * table[k] - table[k - 1]) / (factor - 1.0);
        }
        power += 2;
    }
    table[depth - 1]
}

/// `(1/pi) int v(t)/(t - z) dt` for `Im z > 0`.
pub fn cauchy_halfplane(v: &BoundaryDensity, z: Complex64) -> Result<Complex64> {
    cauchy_halfplane_with(v, z, &QuadOptions::default())
}

pub fn cauchy_halfplane_with(v: &BoundaryDensity, z: Complex64, opts: &QuadOptions) -> Result<Complex64> {
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidArgument(format!("expected Im z > 0, got {z}")));
    }
    let e = v.integrate(|p: Point| 1.0 / (Complex64::new(p.value(), 0.0) - z), &[z.re], opts)?;
    Ok(e.value / PI)
}

/// `alpha y + pi nu(-inf) + int (pi/2 - arctan((t - x)/y)) dnu(t)`: the Poisson
/// integral of `nu` plus `alpha y`, in the form integrated against `dnu`.
pub fn poisson_v(n: &NuFunction, alpha: f64, x: f64, y: f64) -> Result<f64> {
    poisson_v_with(n, alpha, x, y, &QuadOptions::default())
}

pub fn poisson_v_with(n: &NuFunction, alpha: f64, x: f64, y: f64, opts: &QuadOptions) -> Result<f64> {
    check_poisson_args(alpha, x, y)?;
    let e = n
        .measure()
        .integrate(|p: Point| y.atan2(p.value() - x), Cuts::Smooth(&[x]), opts)?;
    Ok(alpha * y + PI * n.baseline() + e.value)
}

/// `alpha y + int y/(y^2 + (x - t)^2) nu(t) dt`, integrated against `nu` itself.
pub fn poisson_v_kernel_form(n: &NuFunction, alpha: f64, x: f64, y: f64, opts: &QuadOptions) -> Result<f64> {
    check_poisson_args(alpha, x, y)?;
    let m = n.measure();
    // int_a^b y/(y^2 + (x-t)^2) dt = arctan((b-x)/y) - arctan((a-x)/y)
    let ang = |t: f64| ((t - x) / y).atan();
    let bps = m.breakpoints();
    let Some(&first) = bps.first() else {
        return Ok(alpha * y + PI * n.baseline());
    };
    let mut total = alpha * y + n.baseline() * (ang(first) + FRAC_PI_2);
    let mut pts = bps.clone();
    if x > first && x < *bps.last().unwrap() && !pts.contains(&x) {
        pts.push(x);
        pts.sort_by(f64::total_cmp);
    }
    let local = QuadOptions {
        tol: Tolerance::new(opts.tol.abs / pts.len() as f64, opts.tol.rel),
        ..*opts
    };
    let kernel_nu = |t: f64| y / (y * y + (x - t) * (x - t)) * n.cdf(t);
    for w in pts.windows(2) {
        total += quad::gauss_kronrod(kernel_nu, w[0], w[1], &local)?.value;
    }
    let last = *pts.last().unwrap();
    total += n.upper_limit() * (FRAC_PI_2 - ang(last));
    let unbounded: Vec<_> = m.pieces().iter().filter(|p| !p.hi().is_finite()).collect();
    if !unbounded.is_empty() {
        let rem = quad::semi_infinite(
            |p: Point| {
                let t = p.value();
                y / (y * y + (x - t) * (x - t)) * unbounded.iter().map(|q| q.mass_above(t)).sum::<f64>()
            },
            last,
            &local,
        )?;
        total -= rem.value;
    }
    Ok(total)
}

fn check_poisson_args(alpha: f64, x: f64, y: f64) -> Result<()> {
    if !(y > 0.0 && y.is_finite()) || !x.is_finite() || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("need finite x, alpha and y > 0, got x={x} y={y} alpha={alpha}")));
    }
    Ok(())
}

/// `pi (h(x1) v(x2) - h(x2) v(x1))` with `h` the Hilbert transform of `v`.
pub fn det_condition(v: &BoundaryDensity, x1: f64, x2: f64, q: &PVQuadSpec) -> Result<f64> {
    if x1 == x2 {
        return Ok(0.0);
    }
    if x1 > x2 {
        return Err(Error::InvalidArgument(format!("expected x1 < x2, got {x1} and {x2}")));
    }
    let (v1, v2) = (v.eval(x1), v.eval(x2));
    let h1 = hilbert_pv(v, x1, q)?;
    let h2 = hilbert_pv(v, x2, q)?;
    Ok(PI * (h1 * v2 - h2 * v1))
}

/// Result of [`holder_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderCheck {
    /// `int_Q exp(int_Omega ln psi(x, t) drho(t)) domega(x)`
    pub lhs: f64,
    /// `sup_t int_Q psi(x, t)^rho(Omega) domega(x)` over the sampled `t`; a
    /// lower bound of the true supremum.
    pub d_psi: f64,
    pub holds: bool,
    pub samples: usize,
}

const HOLDER_SAMPLES: usize = 64;

/// Numerical check of `lhs <= d_psi (1 + 1e-10)`.
pub fn holder_bound_check<F>(psi: F, rho: &StieltjesMeasure, omega: &StieltjesMeasure) -> Result<HolderCheck>
where
    F: Fn(f64, f64) -> f64,
{
    let r = rho.total_mass();
    let w = omega.total_mass();
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Precondition {
            what: "rho(Omega) must lie in (0, 1)".into(),
            measured: r,
        });
    }
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::Precondition {
            what: "omega(Q) must be positive and finite".into(),
            measured: w,
        });
    }
    let t_samples = sample_support(rho);
    let x_samples = sample_support(omega);
    for &x in &x_samples {
        let low = t_samples.iter().map(|&t| psi(x, t)).fold(f64::INFINITY, f64::min);
        if !(low > 0.0 && low.is_finite()) {
            return Err(Error::Precondition {
                what: format!("psi must be positive and finite at x = {x}"),
                measured: low,
            });
        }
    }
    let opts = QuadOptions::with_tol(1e-14, 1e-12);
    let lhs = omega
        .integrate(
            |xp: Point| {
                let x = xp.value();
                rho.integrate(|tp: Point| psi(x, tp.value()).ln(), Cuts::Smooth(&[]), &opts)
                    .map(|e| e.value.exp())
                    .unwrap_or(f64::NAN)
            },
            Cuts::Smooth(&[]),
            &opts,
        )?
        .value;
    let mut d_psi = f64::NEG_INFINITY;
    for &t in &t_samples {
        let col = omega.integrate(|xp: Point| psi(xp.value(), t).powf(r), Cuts::Smooth(&[]), &opts)?.value;
        d_psi = d_psi.max(col);
    }
    if !lhs.is_finite() || !d_psi.is_finite() {
        return Err(Error::NonFinite { at: f64::NAN });
    }
    Ok(HolderCheck {
        lhs,
        d_psi,
        holds: lhs <= d_psi * (1.0 + 1e-10),
        samples: t_samples.len(),
    })
}

/// Atoms plus an evenly spaced sample of the support hull.
fn sample_support(m: &StieltjesMeasure) -> Vec<f64> {
    let mut pts: Vec<f64> = m.atoms().iter().map(|a| a.location).collect();
    let dense: Vec<_> = m.pieces().iter().filter(|p| p.mass() > 0.0).collect();
    if !dense.is_empty() {
        let lo = dense.iter().map(|p| p.lo()).fold(f64::INFINITY, f64::min);
        let hi = dense.iter().map(|p| p.hi()).fold(f64::NEG_INFINITY, f64::max);
        let hi = if hi.is_finite() { hi } else { lo + 64.0 };
        for k in 0..HOLDER_SAMPLES {
            pts.push(lo + (hi - lo) * (k as f64 + 0.5) / HOLDER_SAMPLES as f64);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
