//! Universally starlike functions `Psi(z) = z phi(z)` on `C \ [1, inf)`.
//!
//! Candidates are built from a probability measure on `[0, 1]`, from a
//! boundary density vanishing below 1, or from a convex potential, and can
//! also wrap polylogarithms or arbitrary callables. [`certify_universal`]
//! runs the normalization, holomorphy, exceptional-family and membership
//! checks; [`starlike_image_check`] looks at the images of circles directly.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::kernel::{half_log1p_sq, pick_kernel};
use crate::measure::{nu_from_mu_unit, Cuts, NuFunction, StieltjesMeasure, STRUCTURAL_TOL};
use crate::plog::{detect_exceptional, membership_test, GridSpec, Membership, MembershipReport, PLogFunction};
use crate::quad::{gauss_kronrod, gauss_kronrod_pieces, semi_infinite, tanh_sinh_pieces, Point, QuadOptions};
use crate::transforms::{cauchy_halfplane_with, det_condition, BoundaryDensity, DecayClass, PVQuadSpec};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Quadrature settings used when evaluating candidates. Tighter than the
/// crate default so that `phi(0) = 1` can be checked to `1e-10`.
pub fn candidate_quad() -> QuadOptions {
    QuadOptions::with_tol(1e-14, 1e-12)
}

/// Tolerance on `|phi(0) - 1|`.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Smallest admissible turning of `arg Psi` along a circle.
pub const TURNING_FLOOR: f64 = -1e-9;

const MAX_CIRCLE_SAMPLES: usize = 1 << 16;

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re >= 1.0
}

fn check_domain(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite argument {z}")));
    }
    if on_cut(z) {
        return Err(Error::InvalidArgument(format!("{z} lies on the cut [1, inf)")));
    }
    Ok(())
}

/// Distance from `z` to the ray `[1, inf)`.
pub fn distance_to_cut(z: Complex64) -> f64 {
    if z.re >= 1.0 {
        z.im.abs()
    } else {
        (z - ONE).norm()
    }
}

// ---------------------------------------------------------------------------
// polylogarithms

/// `Li_alpha(z)` for `alpha >= 0` and `z` off `[1, inf)`: the power series
/// for `|z| <= 1/2`, the integral `z/Gamma(alpha) int_0^inf t^(alpha-1)/(e^t - z) dt`
/// elsewhere, and `z/(1 - z)` for `alpha = 0`.
pub fn polylog(alpha: f64, z: Complex64) -> Result<Complex64> {
    check_polylog_args(alpha, z)?;
    if alpha == 0.0 {
        return Ok(z / (ONE - z));
    }
    if z.norm() <= 0.5 {
        polylog_series(alpha, z)
    } else {
        polylog_integral(alpha, z)
    }
}

fn check_polylog_args(alpha: f64, z: Complex64) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("polylog order must be finite and >= 0, got {alpha}")));
    }
    check_domain(z)
}

/// `sum_{k >= 1} z^k / k^alpha` for `|z| < 1`.
pub fn polylog_series(alpha: f64, z: Complex64) -> Result<Complex64> {
    Ok(z * series_over_z(alpha, z)?)
}

/// `sum_{k >= 1} z^(k-1) / k^alpha`.
fn series_over_z(alpha: f64, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::InvalidArgument(format!("series needs |z| < 1, got {z}")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = ONE;
    for k in 1..=20_000u32 {
        let term = power / (k as f64).powf(alpha);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            return Ok(sum);
        }
        power *= z;
    }
    Err(Error::Quadrature { estimate: sum.norm(), residual: power.norm() })
}

/// Integral form of `Li_alpha(z)`, `alpha > 0`.
pub fn polylog_integral(alpha: f64, z: Complex64) -> Result<Complex64> {
    check_polylog_args(alpha, z)?;
    if alpha == 0.0 {
        return Err(Error::InvalidArgument("integral form needs alpha > 0".into()));
    }
    let one_minus_z = ONE - z;
    // e^t - z written as expm1(t) + (1 - z) to keep the near-cut case accurate
    let f = |p: Point| {
        let t = p.value();
        if t <= 1.0 {
            Complex64::new(t.powf(alpha - 1.0), 0.0) / (Complex64::new(t.exp_m1(), 0.0) + one_minus_z)
        } else {
            // t^(alpha-1) e^-t / (1 - z e^-t), finite for any t
            let decay = (-t).exp();
            let w = ((alpha - 1.0) * t.ln() - t).exp();
            if w == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::new(w, 0.0) / (ONE - z * decay)
        }
    };
    let peak = z.norm().ln().max(0.0);
    let mut pts = vec![0.0];
    if peak > 0.0 {
        pts.push(peak);
    }
    let end = 2.0 * peak + 1.0;
    pts.push(end);
    let q = QuadOptions::with_tol(1e-15, 1e-13);
    let body = tanh_sinh_pieces(f, &pts, &q)?.value;
    let tail = semi_infinite(f, end, &q)?.value;
    Ok(z * (body + tail) / gamma(alpha))
}

/// `Li_alpha(z)/z`, continuous at 0.
pub fn polylog_over_z(alpha: f64, z: Complex64) -> Result<Complex64> {
    check_polylog_args(alpha, z)?;
    if alpha == 0.0 {
        return Ok(ONE / (ONE - z));
    }
    if z.norm() <= 0.5 {
        series_over_z(alpha, z)
    } else {
        Ok(polylog_integral(alpha, z)? / z)
    }
}

// ---------------------------------------------------------------------------
// candidates

type Callable = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

/// How `phi = Psi/z` is evaluated.
#[derive(Clone)]
pub enum CandidateForm {
    /// `exp(int log(1/(1 - tz)) dmu(t))`; `nu` and `log_pick` are the same
    /// function written through the measure `nu` on `[1, inf)`.
    Mu { mu: StieltjesMeasure, nu: NuFunction, log_pick: Option<PLogFunction> },
    /// `a^theta/(a - z)^theta`.
    Exceptional { theta: f64, a: f64 },
    /// `(1/pi) int v(t)/(t - z) dt` with `v = 0` below 1.
    Cauchy { v: BoundaryDensity },
    /// `Li_alpha(z)/z`.
    Polylog { alpha: f64 },
    Callable { f: Callable },
}

impl CandidateForm {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Mu { .. } => "mu",
            Self::Exceptional { .. } => "exceptional",
            Self::Cauchy { .. } => "cauchy",
            Self::Polylog { .. } => "polylog",
            Self::Callable { .. } => "callable",
        }
    }
}

/// `Psi(z) = z phi(z)` together with a way of evaluating `phi`.
#[derive(Clone)]
pub struct UniversalCandidate {
    label: String,
    form: CandidateForm,
    quad: QuadOptions,
}

impl fmt::Debug for UniversalCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UniversalCandidate")
            .field("label", &self.label)
            .field("form", &self.form.name())
            .finish()
    }
}

fn validate_unit_mu(mu: &StieltjesMeasure) -> Result<()> {
    if let Some((lo, hi)) = mu.support_hull() {
        if lo < 0.0 || hi > 1.0 {
            return Err(Error::InvalidMeasure(format!("support [{lo}, {hi}] is not inside [0, 1]")));
        }
    }
    let total = mu.total_mass();
    if (total - 1.0).abs() > STRUCTURAL_TOL {
        return Err(Error::InvalidMeasure(format!("mu must have total mass 1, got {total}")));
    }
    Ok(())
}

/// `int log(1/(1 - tz)) dmu(t)`.
fn mu_log_integral(mu: &StieltjesMeasure, z: Complex64, q: &QuadOptions) -> Result<Complex64> {
    Ok(mu.integrate(|p: Point| -(ONE - z * p.value()).ln(), Cuts::Smooth(&[]), q)?.value)
}

/// `int (t - z)^(-k) v(t) dt`.
fn cauchy_power(v: &BoundaryDensity, z: Complex64, k: i32, q: &QuadOptions) -> Result<Complex64> {
    if z.im == 0.0 && z.re >= v.support_lower() {
        return Err(Error::InvalidArgument(format!("{z} lies on the support of the density")));
    }
    if k == 1 && z.im > 0.0 {
        return Ok(cauchy_halfplane_with(v, z, q)? * PI);
    }
    Ok(v.integrate(|p: Point| (Complex64::new(p.value(), 0.0) - z).powi(-k), &[z.re], q)?.value)
}

fn exceptional_phi(theta: f64, a: f64, z: Complex64) -> Complex64 {
    if theta == 0.0 {
        return ONE;
    }
    ((Complex64::new(a, 0.0) / (Complex64::new(a, 0.0) - z)).ln() * theta).exp()
}

impl UniversalCandidate {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn form(&self) -> &CandidateForm {
        &self.form
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn quad(&self) -> &QuadOptions {
        &self.quad
    }

    /// Quadrature settings used for `phi` and its derivatives.
    pub fn with_quad(mut self, quad: QuadOptions) -> Self {
        self.quad = quad;
        self
    }

    /// `a^theta/(a - z)^theta` with `theta` in `[0, 1]` and `a >= 1`.
    pub fn exceptional(theta: f64, a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) || !(a >= 1.0 && a.is_finite()) {
            return Err(Error::InvalidArgument(format!("need theta in [0, 1] and a >= 1, got theta={theta}, a={a}")));
        }
        Ok(Self {
            label: format!("{a}^{theta}/({a} - z)^{theta}"),
            form: CandidateForm::Exceptional { theta, a },
            quad: candidate_quad(),
        })
    }

    /// `phi = Li_alpha(z)/z`, so that `Psi = Li_alpha`.
    pub fn polylog(alpha: f64) -> Result<Self> {
        check_polylog_args(alpha, Complex64::new(0.0, 0.0))?;
        Ok(Self {
            label: format!("Li_{alpha}"),
            form: CandidateForm::Polylog { alpha },
            quad: candidate_quad(),
        })
    }

    pub fn callable(
        label: impl Into<String>,
        phi: impl Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            form: CandidateForm::Callable { f: Arc::new(phi) },
            quad: candidate_quad(),
        }
    }

    /// The measure `nu` of the logarithm, when it is known exactly.
    pub fn nu(&self) -> Option<&NuFunction> {
        match &self.form {
            CandidateForm::Mu { nu, .. } => Some(nu),
            _ => None,
        }
    }

    /// `phi(z)` for `z` off `[1, inf)`.
    pub fn phi(&self, z: Complex64) -> Result<Complex64> {
        check_domain(z)?;
        match &self.form {
            CandidateForm::Mu { mu, .. } => Ok(mu_log_integral(mu, z, &self.quad)?.exp()),
            CandidateForm::Exceptional { theta, a } => Ok(exceptional_phi(*theta, *a, z)),
            CandidateForm::Cauchy { v } => Ok(cauchy_power(v, z, 1, &self.quad)? / PI),
            CandidateForm::Polylog { alpha } => polylog_over_z(*alpha, z),
            CandidateForm::Callable { f } => f(z),
        }
    }

    /// `phi(z)` through the measure `nu` on `[1, inf)`, for `Im z > 0`.
    pub fn phi_nu_form(&self, z: Complex64) -> Option<Result<Complex64>> {
        match &self.form {
            CandidateForm::Mu { log_pick: Some(p), .. } => Some(p.eval_phi_with(z, &self.quad)),
            _ => None,
        }
    }

    pub fn psi(&self, z: Complex64) -> Result<Complex64> {
        Ok(z * self.phi(z)?)
    }

    /// `Psi'(z)/Psi(z)` for `z != 0`.
    pub fn log_derivative(&self, z: Complex64) -> Result<Complex64> {
        check_domain(z)?;
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidArgument("Psi'/Psi has a pole at 0".into()));
        }
        let inner = match &self.form {
            CandidateForm::Mu { mu, .. } => {
                mu.integrate(|p: Point| p.value() / (ONE - z * p.value()), Cuts::Smooth(&[]), &self.quad)?
                    .value
            }
            CandidateForm::Exceptional { theta, a } => *theta / (Complex64::new(*a, 0.0) - z),
            CandidateForm::Cauchy { v } => cauchy_power(v, z, 2, &self.quad)? / cauchy_power(v, z, 1, &self.quad)?,
            _ => self.phi_derivative_fd(z)? / self.phi(z)?,
        };
        Ok(ONE / z + inner)
    }

    /// Five-point central difference of `phi` with a step scaled to the
    /// distance from the cut.
    fn phi_derivative_fd(&self, z: Complex64) -> Result<Complex64> {
        let h = 1e-3 * distance_to_cut(z).min(1.0);
        let f = |k: f64| self.phi(z + k * h);
        Ok((f(-2.0)? - f(2.0)? + (f(1.0)? - f(-1.0)?) * 8.0) / (12.0 * h))
    }

    /// `Psi'(0) = phi(0)`.
    pub fn psi_derivative_at_zero(&self) -> Result<Complex64> {
        self.phi(Complex64::new(0.0, 0.0))
    }

    /// Abscissae where `phi` has boundary features; always contains 1.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = match &self.form {
            CandidateForm::Mu { nu, .. } => nu.measure().breakpoints(),
            CandidateForm::Exceptional { a, .. } => vec![*a],
            CandidateForm::Cauchy { v } => v.breakpoints().to_vec(),
            _ => Vec::new(),
        };
        pts.push(1.0);
        pts.retain(|p| p.is_finite());
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

/// `phi(z) = exp(int log(1/(1 - tz)) dmu(t))` for a probability measure `mu`
/// on `[0, 1]`.
pub fn build_from_mu(mu: &StieltjesMeasure) -> Result<UniversalCandidate> {
    validate_unit_mu(mu)?;
    let nu = nu_from_mu_unit(mu)?;
    let q = candidate_quad();
    let beta = -mu.integrate(|p: Point| half_log1p_sq(p.value()), Cuts::Smooth(&[]), &q)?.value;
    let log_pick = PLogFunction::from_nu(beta, nu.clone()).ok();
    Ok(UniversalCandidate {
        label: "exp(int log(1/(1 - tz)) dmu(t))".into(),
        form: CandidateForm::Mu { mu: mu.clone(), nu, log_pick },
        quad: q,
    })
}

/// Both sides of the conversion of `int log(1/(1 - tz)) dmu` into a Pick
/// integral over `[1, inf)` with density `1 - mu([0, 1/t))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub z: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

pub fn l_mu_identity_check(mu: &StieltjesMeasure, z: Complex64, opts: &QuadOptions) -> Result<IdentityCheck> {
    if !(z.im > 0.0 && z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("expected Im z > 0, got {z}")));
    }
    validate_unit_mu(mu)?;
    let lhs = mu_log_integral(mu, z, opts)?;
    let shift = mu.integrate(|p: Point| half_log1p_sq(p.value()), Cuts::Smooth(&[]), opts)?.value;
    let weight = |t: f64| 1.0 - mu.midpoint_mass_below(1.0 / t);
    let mut cuts: Vec<f64> = mu
        .breakpoints()
        .into_iter()
        .filter(|s| *s > 0.0)
        .map(|s| 1.0 / s)
        .filter(|t| *t > 1.0 && t.is_finite())
        .collect();
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let last = *cuts.last().unwrap_or(&1.0);
    let body = gauss_kronrod_pieces(|t: f64| pick_kernel(t, z) * weight(t), &cuts, opts)?.value;
    let tail = semi_infinite(|p: Point| pick_kernel(p.value(), z) * weight(p.value()), last, opts)?.value;
    let rhs = body + tail - shift;
    Ok(IdentityCheck { z, lhs, rhs, residual: (lhs - rhs).norm() })
}

pub const DET_SAMPLE_SEED: u64 = 0x5eed_0005;
const DET_PAIRS: usize = 50;
pub const DET_FLOOR: f64 = -1e-8;

/// `Psi(z) = (z/pi) int_1^inf v(t)/(t - z) dt` for a density `v` vanishing
/// below 1 with `int v(t)/t dt = pi` and satisfying the determinant condition.
pub fn build_from_v(v: BoundaryDensity) -> Result<UniversalCandidate> {
    build_from_v_seeded(v, DET_SAMPLE_SEED)
}

/// [`build_from_v`] with the seed of the determinant sample.
pub fn build_from_v_seeded(v: BoundaryDensity, seed: u64) -> Result<UniversalCandidate> {
    match v.decay() {
        DecayClass::Concentrated => {
            return Err(Error::Precondition {
                what: "density is concentrated at a point and lies in no L_p".into(),
                measured: f64::NAN,
            })
        }
        DecayClass::Power { exponent } if exponent <= 0.0 => {
            return Err(Error::Precondition {
                what: "density does not decay and lies in no L_p with p > 1".into(),
                measured: exponent,
            })
        }
        _ => {}
    }
    if v.support_lower() < 1.0 {
        return Err(Error::Precondition {
            what: "density must vanish below 1".into(),
            measured: v.support_lower(),
        });
    }
    let q = candidate_quad();
    let weight = v.integrate(|p: Point| 1.0 / p.value(), &[], &q)?.value;
    if (weight - PI).abs() > 1e-8 {
        return Err(Error::Precondition {
            what: "int v(t)/t dt must equal pi".into(),
            measured: weight,
        });
    }
    let worst = determinant_sample(&v, seed)?;
    if worst < DET_FLOOR {
        return Err(Error::Precondition {
            what: "determinant condition violated on the sample".into(),
            measured: worst,
        });
    }
    Ok(UniversalCandidate {
        label: format!("cauchy transform of {}", v.label()),
        form: CandidateForm::Cauchy { v },
        quad: q,
    })
}

/// Smallest determinant over a fixed pseudo-random sample of pairs in the support.
fn determinant_sample(v: &BoundaryDensity, seed: u64) -> Result<f64> {
    let lo = v.support_lower();
    let hi = match v.decay() {
        DecayClass::CompactSupport { upper } => upper,
        DecayClass::Exponential { rate } => lo + (20.0 / rate).min(50.0),
        _ => lo + 50.0,
    };
    let bps = v.breakpoints().to_vec();
    let clear = |x: f64| bps.iter().all(|b| (x - b).abs() > 1e-3 * (hi - lo));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(DET_PAIRS);
    while pairs.len() < DET_PAIRS {
        let a = rng.gen_range(lo..hi);
        let b = rng.gen_range(lo..hi);
        if a != b && clear(a) && clear(b) {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    for &(a, b) in &pairs {
        for x in [a, b] {
            let value = v.eval(x);
            if value < 0.0 {
                return Err(Error::Precondition {
                    what: format!("density is negative at {x}"),
                    measured: value,
                });
            }
        }
    }
    let spec = PVQuadSpec::default();
    let dets: Vec<f64> = pairs
        .par_iter()
        .map(|&(a, b)| det_condition(v, a, b, &spec))
        .collect::<Result<_>>()?;
    Ok(dets.into_iter().fold(f64::INFINITY, f64::min))
}

/// A convex-potential candidate together with its normalizing constant.
#[derive(Debug, Clone)]
pub struct ConvexBuild {
    pub candidate: UniversalCandidate,
    /// `int_a^inf exp(-psi(t))/t dt`.
    pub b: f64,
    /// Worst normalized second difference seen by the convexity check.
    pub convexity_defect: f64,
    /// `int_a^inf exp(-gamma psi(t)) dt`.
    pub gamma_integral: f64,
}

/// Integral over `[a, inf)` on shells `[a + R, a + 2R]`, stopping after two
/// consecutive shells below tolerance.
fn tail_doubling<F: Fn(f64) -> f64>(f: F, a: f64, q: &QuadOptions, what: &str) -> Result<(f64, f64)> {
    let diverged = |measured: f64| Error::Precondition {
        what: format!("{what} did not settle under radius doubling"),
        measured,
    };
    let mut total = gauss_kronrod(&f, a, a + 1.0, q).map_err(|_| diverged(f64::NAN))?.value;
    let mut r = 1.0;
    let mut small = 0;
    for _ in 0..60 {
        let inc = gauss_kronrod(&f, a + r, a + 2.0 * r, q).map_err(|_| diverged(total))?.value;
        total += inc;
        r *= 2.0;
        if inc.abs() <= q.tol.target(total) {
            small += 1;
            if small >= 2 {
                return Ok((total, r));
            }
        } else {
            small = 0;
        }
    }
    Err(diverged(total))
}

/// Worst value of `-(psi(t+h) - 2 psi(t) + psi(t-h)) / max(1, |psi(t)|)` on a
/// geometric grid above `a`; negative means no violation.
pub fn convexity_defect<F: Fn(f64) -> f64>(psi: F, a: f64) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for j in 0..=120 {
        let d = 0.01 * 1.1f64.powi(j);
        let t = a + d;
        let h = 0.5 * d.min(1.0);
        let mid = psi(t);
        if !mid.is_finite() || mid > 745.0 {
            break;
        }
        let second = psi(t + h) - 2.0 * mid + psi(t - h);
        worst = worst.max(-second / mid.abs().max(1.0));
    }
    worst
}

/// `Psi(z) = (z/b) int_a^inf exp(-psi(t))/(t - z) dt` with
/// `b = int_a^inf exp(-psi(t))/t dt`, for convex `psi` with `exp(-gamma psi)`
/// integrable.
pub fn build_from_convex(
    a: f64,
    psi: impl Fn(f64) -> f64 + Send + Sync + 'static,
    gamma_check: f64,
) -> Result<ConvexBuild> {
    if !(a >= 1.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!("need a >= 1, got {a}")));
    }
    if !(gamma_check > 1.0 && gamma_check.is_finite()) {
        return Err(Error::InvalidArgument(format!("need gamma > 1, got {gamma_check}")));
    }
    let defect = convexity_defect(&psi, a);
    if defect > 1e-9 {
        return Err(Error::Precondition {
            what: "potential failed the convexity spot-check".into(),
            measured: -defect,
        });
    }
    let q = candidate_quad();
    let (gamma_integral, radius) = tail_doubling(|t| (-gamma_check * psi(t)).exp(), a, &q, "int exp(-gamma psi)")?;
    let (b, _) = tail_doubling(|t| (-psi(t)).exp() / t, a, &q, "int exp(-psi)/t")?;
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::Precondition {
            what: "normalizing integral must be positive and finite".into(),
            measured: b,
        });
    }
    let far = a + radius;
    let rate = ((psi(far) - psi(0.5 * (a + far))) / (0.5 * (far - a))).max(1e-3);
    let scale = PI / b;
    let v = BoundaryDensity::new(
        "convex potential density",
        a,
        DecayClass::Exponential { rate },
        vec![],
        move |p: Point| {
            if p.distance_to(a) < 0.0 {
                0.0
            } else {
                scale * (-psi(p.value())).exp()
            }
        },
    )?;
    Ok(ConvexBuild {
        candidate: UniversalCandidate {
            label: format!("convex potential from a = {a}"),
            form: CandidateForm::Cauchy { v },
            quad: q,
        },
        b,
        convexity_defect: defect,
        gamma_integral,
    })
}

// ---------------------------------------------------------------------------
// certification

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Member,
    /// One of `a^theta/(a - z)^theta`, `theta` in `[0, 1]`, `a >= 1`.
    Exceptional,
    Rejected,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Step {
    Normalization,
    Holomorphy,
    Whitelist,
    Membership,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HolomorphyMethod {
    /// The representing measure or density is known to vanish below 1.
    Support,
    /// `Im phi(x + iy)` extrapolated to `y = 0` on a grid of `x < 1`.
    Limit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolomorphyEvidence {
    pub method: HolomorphyMethod,
    pub passed: bool,
    /// Largest extrapolated `|Im phi|` relative to `max(1, |phi|)`.
    pub worst: f64,
    pub at: Option<f64>,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WhitelistMatch {
    pub theta: f64,
    pub a: f64,
    /// `|phi(i) - a^theta/(a - i)^theta|`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub label: String,
    pub form: String,
    pub verdict: Verdict,
    pub failed_step: Option<Step>,
    pub normalization_error: f64,
    pub holomorphy: Option<HolomorphyEvidence>,
    pub whitelist: Option<WhitelistMatch>,
    pub membership: Option<MembershipReport>,
    pub note: Option<String>,
}

/// Tolerance on the extrapolated boundary imaginary part below 1.
pub const HOLOMORPHY_TOL: f64 = 1e-6;

/// Abscissae of the holomorphy proxy: a uniform grid on `[-5, 1 - 1e-3]`
/// plus the integers and a few points approaching 1.
pub fn holomorphy_grid() -> Vec<f64> {
    let end = 1.0 - 1e-3;
    let mut xs: Vec<f64> = (0..=120).map(|k| -5.0 + (end + 5.0) * k as f64 / 120.0).collect();
    xs.extend((-5..=0).map(f64::from));
    xs.extend([0.5, 0.9, 0.99]);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// `Im phi(x + iy)` at `y, y/2, y/4` with `y = 1e-2 min(1, 1 - x)`, extrapolated
/// to `y = 0` by two Richardson steps in odd powers of `y`.
pub fn boundary_imaginary_limit(c: &UniversalCandidate, x: f64) -> Result<(f64, f64)> {
    let y = 1e-2 * (1.0 - x).min(1.0);
    let vals: Vec<Complex64> = [1.0, 0.5, 0.25]
        .iter()
        .map(|s| c.phi(Complex64::new(x, s * y)))
        .collect::<Result<_>>()?;
    let e1a = 2.0 * vals[1].im - vals[0].im;
    let e1b = 2.0 * vals[2].im - vals[1].im;
    let limit = (8.0 * e1b - e1a) / 7.0;
    Ok((limit, vals[2].norm()))
}

fn holomorphy_evidence(c: &UniversalCandidate) -> Result<HolomorphyEvidence> {
    let support = match c.form() {
        CandidateForm::Mu { nu, .. } => Some(
            nu.baseline() == 0.0 && nu.measure().support_hull().is_none_or(|(lo, _)| lo >= 1.0),
        ),
        CandidateForm::Exceptional { a, theta } => Some(*theta == 0.0 || *a >= 1.0),
        CandidateForm::Cauchy { v } => Some(v.support_lower() >= 1.0),
        _ => None,
    };
    if let Some(passed) = support {
        return Ok(HolomorphyEvidence {
            method: HolomorphyMethod::Support,
            passed,
            worst: 0.0,
            at: None,
            points: 0,
        });
    }
    let xs = holomorphy_grid();
    let defects: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&x| {
            let (limit, scale) = boundary_imaginary_limit(c, x)?;
            Ok((x, limit.abs() / scale.max(1.0)))
        })
        .collect::<Result<_>>()?;
    let (at, worst) = defects
        .iter()
        .copied()
        .fold((f64::NAN, 0.0), |acc, d| if d.1 > acc.1 || d.1.is_nan() { d } else { acc });
    Ok(HolomorphyEvidence {
        method: HolomorphyMethod::Limit,
        passed: worst <= HOLOMORPHY_TOL,
        worst,
        at: at.is_finite().then_some(at),
        points: xs.len(),
    })
}

/// Parameters `(theta, a)` when the candidate is a member of the one-point family.
fn exceptional_parameters(c: &UniversalCandidate) -> Option<(f64, f64)> {
    match c.form() {
        CandidateForm::Exceptional { theta, a } => Some((*theta, *a)),
        CandidateForm::Polylog { alpha } if *alpha == 0.0 => Some((1.0, 1.0)),
        CandidateForm::Mu { nu, .. } => {
            let ex = detect_exceptional(nu)?;
            (ex.theta1 == 0.0).then(|| (ex.theta, ex.a.unwrap_or(1.0)))
        }
        _ => None,
    }
}

pub fn certify_universal(c: &UniversalCandidate) -> CertificationReport {
    certify_with(c, None)
}

/// Certification with an explicit membership grid; the default grid is built
/// from the candidate's breakpoints.
pub fn certify_with(c: &UniversalCandidate, grid: Option<&GridSpec>) -> CertificationReport {
    let mut report = CertificationReport {
        label: c.label().to_string(),
        form: c.form().name().to_string(),
        verdict: Verdict::Inconclusive,
        failed_step: None,
        normalization_error: f64::NAN,
        holomorphy: None,
        whitelist: None,
        membership: None,
        note: None,
    };
    let reject = |mut r: CertificationReport, step: Step, note: String| {
        r.verdict = Verdict::Rejected;
        r.failed_step = Some(step);
        r.note = Some(note);
        r
    };
    let inconclusive = |mut r: CertificationReport, e: Error| {
        r.verdict = Verdict::Inconclusive;
        r.note = Some(e.to_string());
        r
    };

    match c.phi(Complex64::new(0.0, 0.0)) {
        Ok(v) => report.normalization_error = (v - ONE).norm(),
        Err(e) => return inconclusive(report, e),
    }
    if !(report.normalization_error <= NORMALIZATION_TOL) {
        let msg = format!("|phi(0) - 1| = {:e}", report.normalization_error);
        return reject(report, Step::Normalization, msg);
    }

    match holomorphy_evidence(c) {
        Ok(h) => {
            let passed = h.passed;
            let msg = format!("boundary imaginary part below 1 does not vanish (worst {:e} at {:?})", h.worst, h.at);
            report.holomorphy = Some(h);
            if !passed {
                return reject(report, Step::Holomorphy, msg);
            }
        }
        Err(e) => return inconclusive(report, e),
    }

    if let Some((theta, a)) = exceptional_parameters(c) {
        let z = Complex64::new(0.0, 1.0);
        let residual = match c.phi(z) {
            Ok(v) => (v - exceptional_phi(theta, a, z)).norm(),
            Err(e) => return inconclusive(report, e),
        };
        report.whitelist = Some(WhitelistMatch { theta, a, residual });
        if (0.0..=1.0).contains(&theta) && (theta == 0.0 || a >= 1.0) && residual <= 1e-8 {
            report.verdict = Verdict::Exceptional;
            return report;
        }
        let msg = format!("one-point family with theta={theta}, a={a} is outside the admissible set");
        return reject(report, Step::Whitelist, msg);
    }

    let grid = grid.cloned().unwrap_or_else(|| GridSpec::default_for(&c.breakpoints()));
    let m = membership_test(|z| c.phi(z), &grid);
    let overall = m.overall;
    let failed = m.failed();
    report.membership = Some(m);
    match overall {
        Membership::Member => report.verdict = Verdict::Member,
        Membership::NonMember => {
            let msg = if failed.is_empty() {
                "not a non-constant Pick function".to_string()
            } else {
                format!("criteria {failed:?} failed")
            };
            return reject(report, Step::Membership, msg);
        }
        Membership::Inconclusive => report.verdict = Verdict::Inconclusive,
    }
    report
}

// ---------------------------------------------------------------------------
// geometric check

/// A disk, or an open half-plane `{z : Re((z - point) conj(normal)) > 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CircularDomain {
    Disk { center: Complex64, radius: f64 },
    HalfPlane { point: Complex64, normal: Complex64 },
}

/// Gap kept between a half-plane's boundary line and its approximating disks.
pub const HALF_PLANE_INSET: f64 = 1e-2;

impl CircularDomain {
    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        let d = Self::Disk { center, radius };
        d.validate()?;
        Ok(d)
    }

    pub fn half_plane(point: Complex64, normal: Complex64) -> Result<Self> {
        let d = Self::HalfPlane { point, normal };
        d.validate()?;
        Ok(d)
    }

    /// Disks `|z| < 0.3, 0.6, 0.9` and the disk centred at `-0.5` whose
    /// rightmost point is `1 - 1e-2`.
    pub fn battery() -> Vec<Self> {
        let mut v: Vec<Self> = [0.3, 0.6, 0.9]
            .iter()
            .map(|&r| Self::Disk { center: Complex64::new(0.0, 0.0), radius: r })
            .collect();
        v.push(Self::Disk { center: Complex64::new(-0.5, 0.0), radius: 1.49 });
        v
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Disk { center, radius } => {
                if !(radius > 0.0 && radius.is_finite() && center.re.is_finite() && center.im.is_finite()) {
                    return Err(Error::InvalidArgument(format!("bad disk centre {center}, radius {radius}")));
                }
                if !(center.norm() < radius) {
                    return Err(Error::InvalidArgument("disk does not contain 0".into()));
                }
                if !(distance_to_cut(center) > radius) {
                    return Err(Error::InvalidArgument("disk meets the cut [1, inf)".into()));
                }
            }
            Self::HalfPlane { point, normal } => {
                if !((normal.norm() - 1.0).abs() < 1e-12 && point.re.is_finite() && point.im.is_finite()) {
                    return Err(Error::InvalidArgument("half-plane normal must be a unit vector".into()));
                }
                let side = |z: Complex64| ((z - point) * normal.conj()).re;
                if !(side(Complex64::new(0.0, 0.0)) > 0.0) {
                    return Err(Error::InvalidArgument("half-plane does not contain 0".into()));
                }
                if normal.re > 0.0 || side(ONE) > 0.0 {
                    return Err(Error::InvalidArgument("half-plane meets the cut [1, inf)".into()));
                }
            }
        }
        Ok(())
    }

    /// The disk itself, or three disks of radius `10^2, 10^3, 10^4` inside
    /// the half-plane and tangent to a line parallel to its boundary.
    pub fn disks(&self) -> Vec<(Complex64, f64)> {
        match *self {
            Self::Disk { center, radius } => vec![(center, radius)],
            Self::HalfPlane { point, normal } => {
                let depth = (-point * normal.conj()).re;
                let inset = HALF_PLANE_INSET.min(0.5 * depth);
                let foot = -normal * depth;
                [1e2, 1e3, 1e4].iter().map(|&r| (foot + normal * (r + inset), r)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskEvidence {
    pub center: Complex64,
    pub radius: f64,
    pub samples: usize,
    pub min_turning: f64,
    /// Angle on the circle where the minimum occurs.
    pub min_at: f64,
    pub winding: i64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarlikeEvidence {
    pub domain: CircularDomain,
    pub disks: Vec<DiskEvidence>,
    pub min_turning: f64,
    pub winding: i64,
    pub passed: bool,
    pub inconclusive: Option<String>,
}

fn circle_values(c: &UniversalCandidate, center: Complex64, r: f64, thetas: &[f64]) -> Result<Vec<Complex64>> {
    thetas
        .par_iter()
        .map(|&t| {
            let w = c.psi(center + Complex64::from_polar(r, t))?;
            if w.norm() < 1e-12 {
                return Err(Error::InvalidArgument(format!("Psi vanishes on the circle at angle {t}")));
            }
            Ok(w)
        })
        .collect()
}

/// Winding number of the closed polygon through `values` (taken at the
/// angles `thetas`) about 0. Steps whose argument change exceeds `pi/8` are
/// bisected until the image is resolved.
fn winding(c: &UniversalCandidate, center: Complex64, r: f64, thetas: &[f64], values: &[Complex64]) -> Result<i64> {
    fn arc(
        c: &UniversalCandidate,
        center: Complex64,
        r: f64,
        (ta, wa): (f64, Complex64),
        (tb, wb): (f64, Complex64),
        depth: u32,
    ) -> Result<f64> {
        let d = (wb / wa).arg();
        if d.abs() <= PI / 8.0 || depth >= 48 {
            return Ok(d);
        }
        let tm = 0.5 * (ta + tb);
        let wm = c.psi(center + Complex64::from_polar(r, tm))?;
        if wm.norm() < 1e-12 {
            return Err(Error::InvalidArgument(format!("Psi vanishes on the circle at angle {tm}")));
        }
        Ok(arc(c, center, r, (ta, wa), (tm, wm), depth + 1)? + arc(c, center, r, (tm, wm), (tb, wb), depth + 1)?)
    }
    let n = values.len();
    let steps: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let tb = if k + 1 == n { thetas[0] + 2.0 * PI } else { thetas[k + 1] };
            arc(c, center, r, (thetas[k], values[k]), (tb, values[(k + 1) % n]), 0)
        })
        .collect::<Result<_>>()?;
    Ok((steps.iter().sum::<f64>() / (2.0 * PI)).round() as i64)
}

fn check_disk(c: &UniversalCandidate, center: Complex64, r: f64, samples: usize) -> Result<DiskEvidence> {
    let angles = |n: usize| (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect::<Vec<_>>();
    let mut n = samples;
    let mut thetas = angles(n);
    let mut values = circle_values(c, center, r, &thetas)?;
    let mut w = winding(c, center, r, &thetas, &values)?;
    loop {
        if 2 * n > MAX_CIRCLE_SAMPLES {
            return Err(Error::InvalidArgument(format!("winding number did not stabilize by {n} samples")));
        }
        let odd: Vec<f64> = (0..n).map(|k| 2.0 * PI * (2 * k + 1) as f64 / (2 * n) as f64).collect();
        let odd_values = circle_values(c, center, r, &odd)?;
        values = values.iter().zip(&odd_values).flat_map(|(a, b)| [*a, *b]).collect();
        n *= 2;
        thetas = angles(n);
        let w2 = winding(c, center, r, &thetas, &values)?;
        if w2 == w {
            break;
        }
        w = w2;
    }
    let turning: Vec<f64> = thetas
        .par_iter()
        .map(|&t| {
            let e = Complex64::from_polar(r, t);
            let tangent = Complex64::new(0.0, 1.0) * e;
            Ok((tangent * c.log_derivative(center + e)?).im)
        })
        .collect::<Result<_>>()?;
    let (k, min_turning) = turning
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, t)| if t < acc.1 { (i, t) } else { acc });
    Ok(DiskEvidence {
        center,
        radius: r,
        samples: n,
        min_turning,
        min_at: thetas[k],
        winding: w,
        passed: min_turning >= TURNING_FLOOR && w == 1,
    })
}

/// Turning of `arg Psi` along the boundary of `d` (or of its approximating
/// disks) and the winding number of the image about 0.
pub fn starlike_image_check(c: &UniversalCandidate, d: &CircularDomain, samples: usize) -> Result<StarlikeEvidence> {
    d.validate()?;
    if samples < 256 {
        return Err(Error::InvalidArgument(format!("need at least 256 samples, got {samples}")));
    }
    let mut disks = Vec::new();
    for (center, r) in d.disks() {
        match check_disk(c, center, r, samples) {
            Ok(e) => disks.push(e),
            Err(e) => {
                return Ok(StarlikeEvidence {
                    domain: *d,
                    disks,
                    min_turning: f64::NAN,
                    winding: 0,
                    passed: false,
                    inconclusive: Some(e.to_string()),
                })
            }
        }
    }
    let min_turning = disks.iter().map(|e| e.min_turning).fold(f64::INFINITY, f64::min);
    let winding = disks.iter().map(|e| e.winding).find(|w| *w != 1).unwrap_or(1);
    Ok(StarlikeEvidence {
        domain: *d,
        passed: disks.iter().all(|e| e.passed),
        disks,
        min_turning,
        winding,
        inconclusive: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::DensityPiece;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn polylog_examples() {
        assert!((polylog(0.0, c(0.0, 1.0)).unwrap() - c(-0.5, 0.5)).norm() < 1e-15);
        assert!((polylog(1.0, c(0.5, 0.0)).unwrap().re - 2f64.ln()).abs() < 1e-14);
        let li2 = PI * PI / 12.0 - 2f64.ln().powi(2) / 2.0;
        assert!((polylog(2.0, c(0.5, 0.0)).unwrap().re - li2).abs() < 1e-14);
        assert!(polylog(1.0, c(2.0, 0.0)).is_err());
    }

    #[test]
    fn polylog_methods_agree_on_annulus() {
        for alpha in [0.5, 1.0, 2.0, 3.5] {
            for k in 0..12 {
                let z = Complex64::from_polar(0.3 + 0.2 * (k % 3) as f64 / 2.0, 0.5 * k as f64);
                let s = polylog_series(alpha, z).unwrap();
                let i = polylog_integral(alpha, z).unwrap();
                assert!((s - i).norm() < 1e-10, "alpha={alpha} z={z} {s} {i}");
            }
        }
    }

    #[test]
    fn polylog_one_is_minus_log() {
        for z in [c(-3.0, 0.5), c(0.99, 0.0), c(2.0, 0.1), c(0.9, -0.4)] {
            let direct = -(ONE - z).ln();
            assert!((polylog(1.0, z).unwrap() - direct).norm() < 1e-11 * direct.norm().max(1.0), "{z}");
        }
    }

    #[test]
    fn identity_examples() {
        let q = QuadOptions::default();
        let delta1 = StieltjesMeasure::from_atoms(&[(1.0, 1.0)]).unwrap();
        let r = l_mu_identity_check(&delta1, c(0.0, 1.0), &q).unwrap();
        let expected = c(-0.5 * 2f64.ln(), PI / 4.0);
        assert!((r.lhs - expected).norm() < 1e-12 && r.residual < 1e-8, "{r:?}");
        let delta0 = StieltjesMeasure::from_atoms(&[(0.0, 1.0)]).unwrap();
        let r = l_mu_identity_check(&delta0, c(0.0, 1.0), &q).unwrap();
        assert!(r.lhs.norm() < 1e-15 && r.rhs.norm() < 1e-12);
        let half = StieltjesMeasure::from_atoms(&[(0.0, 0.5), (1.0, 0.5)]).unwrap();
        let r = l_mu_identity_check(&half, c(0.0, 1.0), &q).unwrap();
        assert!((r.lhs - expected * 0.5).norm() < 1e-12 && r.residual < 1e-8);
        let uniform = StieltjesMeasure::new(vec![], vec![DensityPiece::polynomial(0.0, 1.0, vec![1.0]).unwrap()]).unwrap();
        let r = l_mu_identity_check(&uniform, c(0.3, 0.8), &q).unwrap();
        assert!(r.residual < 1e-8, "{r:?}");
    }

    #[test]
    fn mu_examples() {
        let koebe = build_from_mu(&StieltjesMeasure::from_atoms(&[(1.0, 1.0)]).unwrap()).unwrap();
        let z = c(0.3, 0.4);
        assert!((koebe.psi(z).unwrap() - z / (ONE - z)).norm() < 1e-14);
        let id = build_from_mu(&StieltjesMeasure::from_atoms(&[(0.0, 1.0)]).unwrap()).unwrap();
        assert_eq!(id.psi(z).unwrap(), z);
        let uniform = StieltjesMeasure::new(vec![], vec![DensityPiece::polynomial(0.0, 1.0, vec![1.0]).unwrap()]).unwrap();
        let u = build_from_mu(&uniform).unwrap();
        let i = c(0.0, 1.0);
        let direct = u.phi(i).unwrap();
        let via_nu = u.phi_nu_form(i).unwrap().unwrap();
        assert!((direct - via_nu).norm() < 1e-8, "{direct} {via_nu}");
        assert!(build_from_mu(&StieltjesMeasure::from_atoms(&[(2.0, 1.0)]).unwrap()).is_err());
    }

    #[test]
    fn indicator_density_candidate() {
        let v = BoundaryDensity::indicator(1.0, 2.0, PI / 2f64.ln()).unwrap();
        let cand = build_from_v(v).unwrap();
        let z = c(0.0, 1.0);
        let closed = ((c(2.0, 0.0) - z) / (ONE - z)).ln() / 2f64.ln();
        assert!((cand.phi(z).unwrap() - closed).norm() < 1e-8);
        assert!((cand.psi_derivative_at_zero().unwrap() - ONE).norm() < 1e-8);
        let bad = BoundaryDensity::indicator(0.5, 2.0, 1.0).unwrap();
        assert!(matches!(build_from_v(bad), Err(Error::Precondition { .. })));
    }

    #[test]
    fn convex_exponential_potential() {
        let built = build_from_convex(1.0, |t| t, 2.0).unwrap();
        // E1(1)
        assert!((built.b - 0.219_383_934_395_520_3).abs() < 1e-10, "{}", built.b);
        assert!((built.candidate.phi(c(0.0, 0.0)).unwrap() - ONE).norm() < 1e-10);
        assert!(matches!(
            build_from_convex(1.0, |t: f64| t.sqrt(), 2.0),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn certification_examples() {
        let koebe = build_from_mu(&StieltjesMeasure::from_atoms(&[(1.0, 1.0)]).unwrap()).unwrap();
        let r = certify_universal(&koebe);
        assert_eq!(r.verdict, Verdict::Exceptional, "{r:?}");
        let pole = UniversalCandidate::callable("1/(1+z)", |z| Ok(ONE / (ONE + z)));
        let r = certify_universal(&pole);
        assert_eq!(r.verdict, Verdict::Rejected);
        assert_eq!(r.failed_step, Some(Step::Holomorphy));
        let li1 = UniversalCandidate::polylog(1.0).unwrap();
        let r = certify_universal(&li1);
        assert_eq!(r.verdict, Verdict::Member, "{r:?}");
    }

    #[test]
    fn image_examples() {
        let id = UniversalCandidate::callable("1", |_| Ok(ONE));
        let disk = CircularDomain::disk(c(0.0, 0.0), 0.5).unwrap();
        let e = starlike_image_check(&id, &disk, 256).unwrap();
        assert!(e.passed && (e.min_turning - 1.0).abs() < 1e-9, "{e:?}");
        let koebe = UniversalCandidate::exceptional(1.0, 1.0).unwrap();
        let e = starlike_image_check(&koebe, &CircularDomain::disk(c(0.0, 0.0), 0.9).unwrap(), 1024).unwrap();
        assert!(e.passed && e.winding == 1);
        let bad = UniversalCandidate::callable("1 + 5z", |z| Ok(ONE + 5.0 * z));
        let e = starlike_image_check(&bad, &disk, 256).unwrap();
        // z + 5z^2 also vanishes at -0.2, so the image winds twice around 0
        assert!(!e.passed && e.winding == 2, "{e:?}");
        assert!(CircularDomain::disk(c(0.5, 0.0), 0.6).is_err());
        let hp = CircularDomain::half_plane(ONE, c(-1.0, 0.0)).unwrap();
        let e = starlike_image_check(&koebe, &hp, 256).unwrap();
        assert!(e.passed, "{e:?}");
        assert_eq!(e.disks.len(), 3);
    }
}
