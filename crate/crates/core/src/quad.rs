//! One-dimensional quadrature used by every representation integral.
//!
//! Two engines live here. Adaptive Gauss–Kronrod (21-point Kronrod extension
//! of the 10-point Gauss rule) is used for smooth integrands, including the
//! near-singular kernels `1/(t - z)` with `z` close to the real axis. Adaptive
//! tanh-sinh is used whenever an endpoint carries an integrable singularity;
//! its integrand receives a [`Point`] so that the distance to the endpoint is
//! available at full precision even when it is far below one ulp of the
//! endpoint itself.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: real or complex.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn magnitude(&self) -> f64;

    fn is_finite_value(&self) -> bool;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Absolute/relative error targets. A result is accepted when its error
/// estimate is below `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs > 0.0 && self.rel > 0.0) || !self.abs.is_finite() || !self.rel.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be positive and finite, got abs={} rel={}",
                self.abs, self.rel
            )));
        }
        Ok(())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-10, rel: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub tol: Tolerance,
    /// Maximum number of subintervals kept by the adaptive Gauss–Kronrod driver.
    pub max_intervals: usize,
    /// Maximum bisection depth of the adaptive tanh-sinh driver.
    pub max_depth: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            max_intervals: 2000,
            max_depth: 40,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(abs: f64, rel: f64) -> Self {
        Self {
            tol: Tolerance::new(abs, rel),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

/// An abscissa written as `anchor + offset`. The anchor is an interval
/// endpoint (or other exactly-known point); the offset is small near it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub anchor: f64,
    pub offset: f64,
}

impl Point {
    pub fn at(x: f64) -> Self {
        Self { anchor: x, offset: 0.0 }
    }

    pub fn value(&self) -> f64 {
        self.anchor + self.offset
    }

    /// `self - c`, exact up to one rounding when `c == anchor`.
    pub fn distance_to(&self, c: f64) -> f64 {
        (self.anchor - c) + self.offset
    }
}

// 21-point Kronrod abscissae and weights with the embedded 10-point Gauss weights.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

fn gk21<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Result<(T, f64)> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    if !fc.is_finite_value() {
        return Err(Error::NonFinite { at: centre });
    }
    let mut res_g = T::default();
    let mut res_k = fc * WGK[10];
    let mut res_abs = fc.magnitude() * WGK[10];
    let mut fv1 = [T::default(); 10];
    let mut fv2 = [T::default(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let (x1, x2) = (centre - dx, centre + dx);
        let f1 = f(x1);
        let f2 = f(x2);
        if !f1.is_finite_value() {
            return Err(Error::NonFinite { at: x1 });
        }
        if !f2.is_finite_value() {
            return Err(Error::NonFinite { at: x2 });
        }
        fv1[j] = f1;
        fv2[j] = f2;
        res_k = res_k + (f1 + f2) * WGK[j];
        res_abs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let h = half.abs();
    res_asc *= h;
    res_abs *= h;
    let mut err = ((res_k - res_g) * half).magnitude();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((res_k * half, err))
}

/// Adaptive Gauss–Kronrod quadrature of `f` over the finite interval `[a, b]`.
pub fn gauss_kronrod<T, F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Estimate { value: T::default(), error: 0.0 });
    }
    let (value, error) = gk21(&f, a, b)?;
    let mut panels = vec![Panel { a, b, value, error }];
    let mut total = value;
    let mut total_err = error;
    loop {
        if total_err <= opts.tol.target(total.magnitude()) {
            return Ok(Estimate { value: total, error: total_err });
        }
        if panels.len() >= opts.max_intervals {
            return Err(Error::Quadrature { estimate: total.magnitude(), residual: total_err });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            // interval exhausted at machine resolution
            return Err(Error::Quadrature { estimate: total.magnitude(), residual: total_err });
        }
        let (v1, e1) = gk21(&f, p.a, mid)?;
        let (v2, e2) = gk21(&f, mid, p.b)?;
        total = total - p.value + v1 + v2;
        total_err = total_err - p.error + e1 + e2;
        panels.push(Panel { a: p.a, b: mid, value: v1, error: e1 });
        panels.push(Panel { a: mid, b: p.b, value: v2, error: e2 });
        // refresh the running error sum now and then to shed cancellation drift
        if panels.len() % 64 == 0 {
            total_err = panels.iter().map(|p| p.error).sum();
            total = panels.iter().fold(T::default(), |acc, p| acc + p.value);
        }
    }
}

/// Integrates `f` over consecutive pieces `[p0, p1], [p1, p2], ...` with
/// Gauss–Kronrod, spreading the absolute tolerance over the pieces.
pub fn gauss_kronrod_pieces<T, F>(f: F, points: &[f64], opts: &QuadOptions) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let mut acc = Estimate { value: T::default(), error: 0.0 };
    let n = points.len().saturating_sub(1).max(1) as f64;
    let local = QuadOptions {
        tol: Tolerance::new(opts.tol.abs / n, opts.tol.rel),
        ..*opts
    };
    for w in points.windows(2) {
        if w[1] > w[0] {
            let e = gauss_kronrod(&f, w[0], w[1], &local)?;
            acc.value = acc.value + e.value;
            acc.error += e.error;
        }
    }
    Ok(acc)
}

/// Largest |u| used by the tanh-sinh rule; beyond it the complement underflows.
const TS_UMAX: f64 = 6.1;
const TS_MIN_LEVEL: u32 = 3;
const TS_MAX_LEVEL: u32 = 6;

/// One tanh-sinh node on [-1, 1]: `x = 1 - c` for `u > 0` (mirrored for `u < 0`),
/// weight already multiplied by `dx/du`.
#[inline]
fn ts_node(u: f64) -> (f64, f64) {
    let s = std::f64::consts::FRAC_PI_2 * u.abs().sinh();
    let c = 2.0 / (1.0 + (2.0 * s).exp());
    let w = std::f64::consts::FRAC_PI_2 * u.cosh() * c * (2.0 - c);
    (c, w)
}

fn ts_panel<T, F>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Option<(T, f64)>>
where
    T: QuadValue,
    F: Fn(Point) -> T,
{
    let half = 0.5 * (b - a);
    let eval = |u: f64| -> Result<T> {
        let (c, w) = ts_node(u);
        if w == 0.0 || c == 0.0 {
            return Ok(T::default());
        }
        let off = half * c;
        if off == 0.0 {
            return Ok(T::default());
        }
        let p = if u > 0.0 {
            Point { anchor: b, offset: -off }
        } else if u < 0.0 {
            Point { anchor: a, offset: off }
        } else {
            Point { anchor: a, offset: half }
        };
        let v = f(p);
        if !v.is_finite_value() {
            return Err(Error::NonFinite { at: p.value() });
        }
        Ok(v * (w * half))
    };

    // level 0: integer nodes
    let mut sum = eval(0.0)?;
    let mut k = 1.0;
    while k <= TS_UMAX {
        sum = sum + eval(k)? + eval(-k)?;
        k += 1.0;
    }
    let mut h = 1.0;
    let mut estimate = sum * h;
    let mut prev_diff = f64::INFINITY;
    for level in 1..=TS_MAX_LEVEL {
        h *= 0.5;
        let mut u = h;
        let mut fresh = T::default();
        while u <= TS_UMAX {
            fresh = fresh + eval(u)? + eval(-u)?;
            u += 2.0 * h;
        }
        sum = sum + fresh;
        let next = sum * h;
        let diff = (next - estimate).magnitude();
        estimate = next;
        // the error roughly squares from one level to the next once the rule is resolved
        let err = if diff <= 1e-2 * prev_diff { diff * diff / prev_diff } else { diff };
        let threshold = abs_tol.max(rel_tol * estimate.magnitude()).max(16.0 * f64::EPSILON * estimate.magnitude());
        if level >= TS_MIN_LEVEL && (err <= threshold || diff == 0.0) {
            return Ok(Some((estimate, err)));
        }
        prev_diff = diff;
    }
    Ok(None)
}

fn ts_adaptive<T, F>(f: &F, a: f64, b: f64, opts: &QuadOptions, scale: f64, depth: u32) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(Point) -> T,
{
    let width = (b - a).abs();
    let abs_tol = (opts.tol.abs * width / scale).max(f64::MIN_POSITIVE);
    if let Some((value, error)) = ts_panel(f, a, b, abs_tol, opts.tol.rel)? {
        return Ok(Estimate { value, error });
    }
    let mid = 0.5 * (a + b);
    if depth >= opts.max_depth || mid <= a.min(b) || mid >= a.max(b) {
        return Err(Error::Quadrature { estimate: f64::NAN, residual: f64::INFINITY });
    }
    let left = ts_adaptive(f, a, mid, opts, scale, depth + 1)?;
    let right = ts_adaptive(f, mid, b, opts, scale, depth + 1)?;
    Ok(Estimate {
        value: left.value + right.value,
        error: left.error + right.error,
    })
}

/// Adaptive tanh-sinh quadrature over the finite interval `[a, b]`.
///
/// The integrand is only ever evaluated strictly inside the interval. Nodes
/// near an endpoint are reported as `Point { anchor: endpoint, offset }`.
pub fn tanh_sinh<T, F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(Point) -> T,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Estimate { value: T::default(), error: 0.0 });
    }
    let scale = (b - a).abs();
    ts_adaptive(&f, a, b, opts, scale, 0)
}

/// Tanh-sinh over consecutive pieces; each breakpoint becomes an exact anchor.
pub fn tanh_sinh_pieces<T, F>(f: F, points: &[f64], opts: &QuadOptions) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(Point) -> T,
{
    let mut acc = Estimate { value: T::default(), error: 0.0 };
    let n = points.len().saturating_sub(1).max(1) as f64;
    let local = QuadOptions {
        tol: Tolerance::new(opts.tol.abs / n, opts.tol.rel),
        ..*opts
    };
    for w in points.windows(2) {
        if w[1] > w[0] {
            let e = tanh_sinh(&f, w[0], w[1], &local)?;
            acc.value = acc.value + e.value;
            acc.error += e.error;
        }
    }
    Ok(acc)
}

/// Integral of `f` over `[a, +inf)` through `t = a + s/(1 - s)`, `s` in `[0, 1)`.
/// The point handed to `f` is anchored at `a`.
pub fn semi_infinite<T, F>(f: F, a: f64, opts: &QuadOptions) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(Point) -> T,
{
    let g = |p: Point| -> T {
        let s = p.anchor + p.offset;
        let one_minus_s = (1.0 - p.anchor) - p.offset;
        if one_minus_s <= 0.0 {
            return T::default();
        }
        let t_off = s / one_minus_s;
        let jacobian = 1.0 / (one_minus_s * one_minus_s);
        if !t_off.is_finite() || !jacobian.is_finite() {
            return T::default();
        }
        f(Point { anchor: a, offset: t_off }) * jacobian
    };
    tanh_sinh(g, 0.0, 1.0, opts)
}
