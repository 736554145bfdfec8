//! Pick functions in canonical form and primitives of Pick functions that are
//! themselves Pick functions.
//!
//! A [`PickCanonical`] is `alpha z + beta + int (1/(t - z) - t/(1 + t^2)) dsigma(t)`.
//! A [`PrimitivePick`] is described by `(alpha, beta, nu)` with `nu`
//! non-decreasing; it can be evaluated either by integrating the kernel
//! against `nu(t) dt` or, after integration by parts, as
//! `alpha z + beta + i pi nu(-inf) + int log(sqrt(1 + t^2)/(t - z)) dnu(t)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{boundary_log_kernel, half_log1p_sq, log_kernel, log_ratio, pick_kernel, pick_kernel_primitive};
use crate::measure::{Cuts, NuFunction, StieltjesMeasure};
use crate::quad::{self, Point, QuadOptions};

fn check_params(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha must be finite and non-negative, got {alpha}")));
    }
    if !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("beta must be finite, got {beta}")));
    }
    Ok(())
}

fn upper(z: Complex64) -> Result<()> {
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidArgument(format!("expected Im z > 0, got {z}")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct PickCanonical {
    alpha: f64,
    beta: f64,
    sigma: StieltjesMeasure,
}

impl PickCanonical {
    pub fn new(alpha: f64, beta: f64, sigma: StieltjesMeasure) -> Result<Self> {
        check_params(alpha, beta)?;
        Ok(Self { alpha, beta, sigma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sigma(&self) -> &StieltjesMeasure {
        &self.sigma
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_with(z, &QuadOptions::default())
    }

    /// Evaluation off the real axis; the lower half-plane is reached by
    /// conjugate symmetry only.
    pub fn eval_with(&self, z: Complex64, opts: &QuadOptions) -> Result<Complex64> {
        if z.im == 0.0 || !z.im.is_finite() || !z.re.is_finite() {
            return Err(Error::InvalidArgument(format!("expected Im z != 0, got {z}")));
        }
        if z.im < 0.0 {
            return Ok(self.eval_with(z.conj(), opts)?.conj());
        }
        let integral = self
            .sigma
            .integrate(|p: Point| pick_kernel(p.value(), z), Cuts::Smooth(&[z.re]), opts)?;
        Ok(z * self.alpha + self.beta + integral.value)
    }
}

pub fn eval_pick(p: &PickCanonical, z: Complex64) -> Result<Complex64> {
    p.eval(z)
}

#[derive(Debug, Clone)]
pub struct PrimitivePick {
    alpha: f64,
    beta: f64,
    nu: NuFunction,
}

impl PrimitivePick {
    pub fn new(alpha: f64, beta: f64, nu: NuFunction) -> Result<Self> {
        check_params(alpha, beta)?;
        Ok(Self { alpha, beta, nu })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn nu(&self) -> &NuFunction {
        &self.nu
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_with(z, &QuadOptions::default())
    }

    /// Logarithmic form, each factor on the principal branch.
    pub fn eval_with(&self, z: Complex64, opts: &QuadOptions) -> Result<Complex64> {
        upper(z)?;
        let integral = self
            .nu
            .measure()
            .integrate(|p: Point| log_kernel(p.value(), z), Cuts::Smooth(&[z.re]), opts)?;
        Ok(z * self.alpha + self.beta + Complex64::new(0.0, PI * self.nu.baseline()) + integral.value)
    }

    /// Values in the lower half-plane through `Phi(conj z) = conj Phi(z)`.
    pub fn eval_reflected(&self, z: Complex64, opts: &QuadOptions) -> Result<Complex64> {
        if z.im < 0.0 {
            Ok(self.eval_with(z.conj(), opts)?.conj())
        } else {
            self.eval_with(z, opts)
        }
    }

    /// `alpha z + beta + int (1/(t - z) - t/(1 + t^2)) nu(t) dt`, integrated
    /// directly against `nu` as a function. Constant stretches below the
    /// support use the closed-form primitive of the kernel; every bounded
    /// stretch inside the support goes through adaptive quadrature.
    pub fn eval_integral_form(&self, z: Complex64, opts: &QuadOptions) -> Result<Complex64> {
        upper(z)?;
        let m = self.nu.measure();
        let base = self.nu.baseline();
        let mut total = z * self.alpha + self.beta;
        let bps = m.breakpoints();
        let Some(&first) = bps.first() else {
            // nu constant: the kernel integrates to G(+inf) - G(-inf) = i pi
            return Ok(total + Complex64::new(0.0, PI * base));
        };
        // (-inf, first): nu = baseline
        total += (pick_kernel_primitive(first, z) + Complex64::new(0.0, PI)) * base;

        let kernel_nu = |t: f64| pick_kernel(t, z) * self.nu.cdf(t);
        let mut pts = bps.clone();
        if z.re > first && z.re < *bps.last().unwrap() && !pts.contains(&z.re) {
            pts.push(z.re);
            pts.sort_by(f64::total_cmp);
        }
        let n = pts.len().max(2) as f64;
        let local = QuadOptions {
            tol: quad::Tolerance::new(opts.tol.abs / n, opts.tol.rel),
            ..*opts
        };
        for w in pts.windows(2) {
            total += quad::gauss_kronrod(kernel_nu, w[0], w[1], &local)?.value;
        }

        // [last, +inf): nu = nu(+inf) - (mass of unbounded pieces above t)
        let last = *pts.last().unwrap();
        let top = self.nu.upper_limit();
        total += -pick_kernel_primitive(last, z) * top;
        let unbounded: Vec<_> = m.pieces().iter().filter(|p| !p.hi().is_finite()).collect();
        if !unbounded.is_empty() {
            let remainder = quad::semi_infinite(
                |p: Point| {
                    let t = p.value();
                    let above: f64 = unbounded.iter().map(|q| q.mass_above(t)).sum();
                    pick_kernel(t, z) * above
                },
                last,
                &local,
            )?;
            total -= remainder.value;
        }
        Ok(total)
    }

    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.derivative_with(z, &QuadOptions::default())
    }

    /// `alpha + int dnu(t) / (t - z)`.
    pub fn derivative_with(&self, z: Complex64, opts: &QuadOptions) -> Result<Complex64> {
        upper(z)?;
        let integral = self.nu.measure().integrate(
            |p: Point| 1.0 / (Complex64::new(p.value(), 0.0) - z),
            Cuts::Smooth(&[z.re]),
            opts,
        )?;
        Ok(Complex64::new(self.alpha, 0.0) + integral.value)
    }

    pub fn harmonic_parts(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        self.harmonic_parts_with(x, y, &QuadOptions::default())
    }

    /// Real and imaginary parts integrated separately as real integrals.
    pub fn harmonic_parts_with(&self, x: f64, y: f64, opts: &QuadOptions) -> Result<(f64, f64)> {
        upper(Complex64::new(x, y))?;
        let m = self.nu.measure();
        let u = m.integrate(|p: Point| log_ratio(p.value(), x, y), Cuts::Smooth(&[x]), opts)?;
        let v = m.integrate(
            |p: Point| FRAC_PI_2 - ((p.value() - x) / y).atan(),
            Cuts::Smooth(&[x]),
            opts,
        )?;
        Ok((
            self.alpha * x + self.beta + u.value,
            self.alpha * y + PI * self.nu.baseline() + v.value,
        ))
    }

    pub fn boundary_u(&self, x: f64) -> Result<f64> {
        self.boundary_u_with(x, &QuadOptions::default())
    }

    /// `alpha x + beta + int ln(sqrt(1 + t^2)/|t - x|) dnu(t)`; undefined at atoms.
    pub fn boundary_u_with(&self, x: f64, opts: &QuadOptions) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!("x must be finite, got {x}")));
        }
        if self.nu.measure().atom_at(x).is_some() {
            return Err(Error::BoundarySingularity { x });
        }
        let integral = self
            .nu
            .measure()
            .integrate(|p: Point| boundary_log_kernel(p, x), Cuts::SingularAt(x), opts)?;
        Ok(self.alpha * x + self.beta + integral.value)
    }

    /// [`Self::boundary_u_with`] at `p.anchor + p.offset`, with distances to
    /// atoms taken from the offset so that points far closer to an atom than
    /// one ulp still resolve.
    pub fn boundary_u_point(&self, p: Point, opts: &QuadOptions) -> Result<f64> {
        let x = p.value();
        let m = self.nu.measure();
        let mut acc = self.alpha * x + self.beta;
        for a in m.atoms() {
            let d = p.distance_to(a.location).abs();
            if d == 0.0 {
                return Err(Error::BoundarySingularity { x: a.location });
            }
            acc += a.mass * (half_log1p_sq(a.location) - d.ln());
        }
        if !m.pieces().is_empty() {
            let dens = StieltjesMeasure::new(Vec::new(), m.pieces().to_vec())?;
            acc += dens
                .integrate(|q: Point| boundary_log_kernel(q, x), Cuts::SingularAt(x), opts)?
                .value;
        }
        Ok(acc)
    }

    /// `pi nu(x)`, the boundary value of the imaginary part.
    pub fn boundary_v(&self, x: f64) -> f64 {
        PI * self.nu.cdf(x)
    }
}

pub fn eval_primitive(p: &PrimitivePick, z: Complex64) -> Result<Complex64> {
    p.eval(z)
}

pub fn derivative(p: &PrimitivePick, z: Complex64) -> Result<Complex64> {
    p.derivative(z)
}

pub fn harmonic_parts(p: &PrimitivePick, x: f64, y: f64) -> Result<(f64, f64)> {
    p.harmonic_parts(x, y)
}

pub fn boundary_u(p: &PrimitivePick, x: f64) -> Result<f64> {
    p.boundary_u(x)
}

pub fn boundary_v(p: &PrimitivePick, x: f64) -> f64 {
    p.boundary_v(x)
}
