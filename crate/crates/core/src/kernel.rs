//! Integration kernels shared by the representation formulas, written so that
//! they stay finite for very large `|t|` (pulled-back densities reach
//! `t ~ 1e300`).

use num_complex::Complex64;

use crate::quad::Point;

/// `ln sqrt(1 + t^2)`.
pub fn half_log1p_sq(t: f64) -> f64 {
    let a = t.abs();
    if a <= 1.0 {
        0.5 * (t * t).ln_1p()
    } else {
        a.ln() + 0.5 * (1.0 / (a * a)).ln_1p()
    }
}

/// `ln sqrt((1 + t^2) / ((t - x)^2 + y^2))`.
pub fn log_ratio(t: f64, x: f64, y: f64) -> f64 {
    let d = t - x;
    if t.abs() <= 1e8 {
        0.5 * ((1.0 + t * t) / (d * d + y * y)).ln()
    } else {
        let r = 1.0 / t;
        let q = d * r;
        let w = y * r;
        0.5 * ((r * r + 1.0) / (q * q + w * w)).ln()
    }
}

/// Principal branch of `log(sqrt(1 + t^2) / (t - z))` for `Im z > 0`.
/// The imaginary part is `arg` of the quotient and lies in `(0, pi)`.
pub fn log_kernel(t: f64, z: Complex64) -> Complex64 {
    Complex64::new(log_ratio(t, z.re, z.im), z.im.atan2(t - z.re))
}

/// `ln(sqrt(1 + t^2) / |t - x|)` with `t - x` taken from the point offset.
pub fn boundary_log_kernel(p: Point, x: f64) -> f64 {
    let d = p.distance_to(x).abs();
    let t = p.value();
    half_log1p_sq(t) - d.ln()
}

/// `1/(t - z) - t/(1 + t^2)`.
pub fn pick_kernel(t: f64, z: Complex64) -> Complex64 {
    let inv = 1.0 / (Complex64::new(t, 0.0) - z);
    let corr = if t.abs() <= 1e8 { t / (1.0 + t * t) } else { 1.0 / (t + 1.0 / t) };
    inv - corr
}

/// Antiderivative of [`pick_kernel`] in `t`: `log(t - z) - ln sqrt(1 + t^2)`,
/// which tends to 0 at `+inf` and to `-i pi` at `-inf` when `Im z > 0`.
pub fn pick_kernel_primitive(t: f64, z: Complex64) -> Complex64 {
    -log_kernel(t, z)
}
