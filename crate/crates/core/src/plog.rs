//! Logarithms of Pick functions with bounded phase, their exponentials, and
//! grid tests of the four monotonicity criteria characterizing Pick functions
//! whose logarithmic derivative is again Pick.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{half_log1p_sq, log_kernel, pick_kernel_primitive};
use crate::measure::NuFunction;
use crate::pick::PrimitivePick;
use crate::quad::{Point, QuadOptions};

/// `f(z) = beta + i pi nu(-inf) + int log(sqrt(1 + t^2)/(t - z)) dnu(t)` with `0 <= nu <= 1`.
#[derive(Debug, Clone)]
pub struct LogPickPrimitive {
    inner: PrimitivePick,
}

impl LogPickPrimitive {
    pub fn new(beta: f64, nu: NuFunction) -> Result<Self> {
        nu.check_unit_range()?;
        Ok(Self {
            inner: PrimitivePick::new(0.0, beta, nu)?,
        })
    }

    pub fn beta(&self) -> f64 {
        self.inner.beta()
    }

    pub fn nu(&self) -> &NuFunction {
        self.inner.nu()
    }

    pub fn as_primitive(&self) -> &PrimitivePick {
        &self.inner
    }

    pub fn eval_f(&self, z: Complex64) -> Result<Complex64> {
        self.inner.eval(z)
    }

    pub fn eval_f_with(&self, z: Complex64, opts: &QuadOptions) -> Result<Complex64> {
        self.inner.eval_with(z, opts)
    }

    /// Closed-form parameters when the support of `nu` has at most one point.
    pub fn exceptional(&self) -> Option<ExceptionalParams> {
        detect_exceptional(self.nu()).map(|p| ExceptionalParams { beta: self.beta(), ..p })
    }
}

/// `phi = exp(f)` for a [`LogPickPrimitive`] `f`.
#[derive(Debug, Clone)]
pub struct PLogFunction {
    log_part: LogPickPrimitive,
}

impl PLogFunction {
    pub fn new(log_part: LogPickPrimitive) -> Self {
        Self { log_part }
    }

    pub fn from_nu(beta: f64, nu: NuFunction) -> Result<Self> {
        Ok(Self::new(LogPickPrimitive::new(beta, nu)?))
    }

    pub fn log_part(&self) -> &LogPickPrimitive {
        &self.log_part
    }

    pub fn nu(&self) -> &NuFunction {
        self.log_part.nu()
    }

    pub fn eval_phi(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.log_part.eval_f(z)?.exp())
    }

    pub fn eval_phi_with(&self, z: Complex64, opts: &QuadOptions) -> Result<Complex64> {
        Ok(self.log_part.eval_f_with(z, opts)?.exp())
    }

    pub fn boundary_phi(&self, x: f64) -> Result<Complex64> {
        self.boundary_phi_with(x, &QuadOptions::default())
    }

    /// `exp(beta + int ln(sqrt(1 + t^2)/|x - t|) dnu(t) + i pi nu(x))`.
    pub fn boundary_phi_with(&self, x: f64, opts: &QuadOptions) -> Result<Complex64> {
        let (modulus, phase) = self.boundary_polar(x, opts)?;
        Ok(Complex64::from_polar(modulus, phase))
    }

    /// Modulus and argument `pi nu(x)` of the boundary value.
    pub fn boundary_polar(&self, x: f64, opts: &QuadOptions) -> Result<(f64, f64)> {
        let u = self.log_part.inner.boundary_u_with(x, opts)?;
        Ok((u.exp(), PI * self.nu().cdf(x)))
    }

    /// Boundary real and imaginary parts as `cos(pi nu) e^U` and `sin(pi nu) e^U`.
    pub fn boundary_parts(&self, x: f64, opts: &QuadOptions) -> Result<(f64, f64)> {
        let u = self.log_part.inner.boundary_u_with(x, opts)?;
        let nu = self.nu().cdf(x);
        Ok((cos_pi(nu) * u.exp(), sin_pi(nu) * u.exp()))
    }
}

/// `sin(pi s)` for `s` in `[0, 1]`, exact at the endpoints.
pub fn sin_pi(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        0.0
    } else if s > 0.5 {
        (PI * (1.0 - s)).sin()
    } else {
        (PI * s).sin()
    }
}

/// `cos(pi s)` for `s` in `[0, 1]`, exact at `0`, `1/2`, `1`.
pub fn cos_pi(s: f64) -> f64 {
    if s == 0.5 {
        0.0
    } else if s <= 0.0 {
        1.0
    } else if s >= 1.0 {
        -1.0
    } else {
        (PI * s).cos()
    }
}

pub fn eval_f(l: &LogPickPrimitive, z: Complex64) -> Result<Complex64> {
    l.eval_f(z)
}

pub fn eval_phi(p: &PLogFunction, z: Complex64) -> Result<Complex64> {
    p.eval_phi(z)
}

pub fn boundary_phi(p: &PLogFunction, x: f64) -> Result<Complex64> {
    p.boundary_phi(x)
}

/// Parameters of the one-point-support family
/// `f = beta + i pi theta1 (1 - theta) + theta log(sqrt(1 + a^2)/(a - z))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalParams {
    pub theta: f64,
    pub theta1: f64,
    /// Atom location; `None` when `theta = 0`.
    pub a: Option<f64>,
    pub beta: f64,
}

impl ExceptionalParams {
    pub fn new(theta: f64, theta1: f64, a: Option<f64>, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) || !(0.0..=1.0).contains(&theta1) {
            return Err(Error::InvalidArgument(format!("theta={theta}, theta1={theta1} must lie in [0, 1]")));
        }
        if theta > 0.0 && !a.is_some_and(f64::is_finite) {
            return Err(Error::InvalidArgument("a positive theta needs a finite atom location".into()));
        }
        Ok(Self { theta, theta1, a, beta })
    }

    pub fn eval_f(&self, z: Complex64) -> Complex64 {
        let constant = Complex64::new(self.beta, PI * self.theta1 * (1.0 - self.theta));
        match self.a {
            Some(a) if self.theta > 0.0 => constant + log_kernel(a, z) * self.theta,
            _ => constant,
        }
    }

    pub fn eval_phi(&self, z: Complex64) -> Complex64 {
        self.eval_f(z).exp()
    }
}

/// One-point-support detection. `theta1` is reported as 0 when `theta = 1`.
pub fn detect_exceptional(n: &NuFunction) -> Option<ExceptionalParams> {
    let m = n.measure();
    if m.support_count_at_least_two() {
        return None;
    }
    let (theta, a) = match m.atoms().first() {
        Some(atom) => (atom.mass, Some(atom.location)),
        None => (0.0, None),
    };
    let theta1 = if theta < 1.0 { (n.baseline() / (1.0 - theta)).min(1.0) } else { 0.0 };
    Some(ExceptionalParams {
        theta,
        theta1,
        a,
        beta: 0.0,
    })
}

/// `sin(pi nu(x)) exp(beta + int ln(sqrt(1 + t^2)/|x - t|) dnu(t))`, the
/// boundary imaginary part of `exp(f)`.
pub fn v_from_nu(n: &NuFunction, beta: f64, x: f64) -> Result<f64> {
    v_from_nu_with(n, beta, x, &QuadOptions::default())
}

pub fn v_from_nu_with(n: &NuFunction, beta: f64, x: f64, opts: &QuadOptions) -> Result<f64> {
    if !n.measure().support_count_at_least_two() {
        return Err(Error::Exceptional(
            "fewer than two growing points; boundary density formula inapplicable".into(),
        ));
    }
    if n.measure().atom_at(x).is_some() {
        return Err(Error::BoundarySingularity { x });
    }
    let s = sin_pi(n.cdf(x));
    if s == 0.0 {
        return Ok(0.0);
    }
    let p = PrimitivePick::new(0.0, beta, n.clone())?;
    Ok(s * p.boundary_u_with(x, opts)?.exp())
}

/// [`v_from_nu_with`] at a point given relative to an anchor; used by
/// quadratures whose nodes approach atoms closer than one ulp.
pub fn v_from_nu_point(n: &NuFunction, beta: f64, p: Point, opts: &QuadOptions) -> Result<f64> {
    if !n.measure().support_count_at_least_two() {
        return Err(Error::Exceptional(
            "fewer than two growing points; boundary density formula inapplicable".into(),
        ));
    }
    let s = sin_pi(n.cdf_point(p));
    if s == 0.0 {
        return Ok(0.0);
    }
    let prim = PrimitivePick::new(0.0, beta, n.clone())?;
    Ok(s * prim.boundary_u_point(p, opts)?.exp())
}

/// `exp(beta + int (1/(t - z) - t/(1 + t^2)) rho(t) dt)` for a piecewise-constant
/// phase `rho` with values in `[0, 1]`; `values[k]` holds on the k-th gap
/// between consecutive `breaks` (with the two unbounded gaps at the ends).
///
/// Non-decreasing phases reproduce the class above; other phases give Pick
/// functions that fail the monotonicity criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFunction {
    beta: f64,
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl PhaseFunction {
    pub fn new(beta: f64, breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return Err(Error::InvalidArgument("need one more phase value than breakpoints".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) || breaks.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidArgument("breakpoints must be finite and increasing".into()));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidArgument("phase values must lie in [0, 1]".into()));
        }
        Ok(Self { beta, breaks, values })
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn phase(&self, x: f64) -> f64 {
        let k = self.breaks.partition_point(|b| *b < x);
        if k < self.breaks.len() && self.breaks[k] == x {
            0.5 * (self.values[k] + self.values[k + 1])
        } else {
            self.values[k]
        }
    }

    pub fn eval_f(&self, z: Complex64) -> Result<Complex64> {
        if !(z.im > 0.0) {
            return Err(Error::InvalidArgument(format!("expected Im z > 0, got {z}")));
        }
        let mut acc = Complex64::new(self.beta, 0.0);
        let mut left = Complex64::new(0.0, -PI);
        for (k, b) in self.breaks.iter().enumerate() {
            let right = pick_kernel_primitive(*b, z);
            acc += (right - left) * self.values[k];
            left = right;
        }
        acc += -left * self.values[self.breaks.len()];
        Ok(acc)
    }

    pub fn eval_phi(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_f(z)?.exp())
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Boundary value at a point off the breakpoints.
    pub fn boundary_phi(&self, x: f64) -> Result<Complex64> {
        let (modulus, rho) = self.boundary_polar_point(Point::at(x))?;
        Ok(Complex64::from_polar(modulus, PI * rho))
    }

    /// Modulus and phase `rho` of the boundary value at `p.anchor + p.offset`.
    pub fn boundary_polar_point(&self, p: Point) -> Result<(f64, f64)> {
        let mut log_modulus = self.beta;
        let mut gap = 0;
        for (k, b) in self.breaks.iter().enumerate() {
            let d = p.distance_to(*b);
            if d == 0.0 {
                return Err(Error::BoundarySingularity { x: *b });
            }
            if d > 0.0 {
                gap = k + 1;
            }
            let jump = self.values[k + 1] - self.values[k];
            log_modulus += jump * (half_log1p_sq(*b) - d.abs().ln());
        }
        Ok((log_modulus.exp(), self.values[gap]))
    }
}

/// Evaluation grid for the monotonicity criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl GridSpec {
    pub fn new(mut xs: Vec<f64>, mut ys: Vec<f64>) -> Result<Self> {
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("grid values must be finite".into()));
        }
        if ys.iter().any(|y| *y <= 0.0) {
            return Err(Error::InvalidArgument("grid heights must be positive".into()));
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        if xs.len() < 2 || ys.len() < 2 {
            return Err(Error::InvalidArgument("grid needs at least two x-values and two y-values".into()));
        }
        Ok(Self { xs, ys })
    }

    /// Sixteen log-spaced abscissae in `[-10, 10]` plus points next to the
    /// given support breakpoints; heights `{0.05, 0.1, 0.5, 1, 5}`.
    pub fn default_for(breakpoints: &[f64]) -> Self {
        let (lo, hi) = (0.05f64.log10(), 1.0f64);
        let mut xs = Vec::new();
        for k in 0..8 {
            let v = 10f64.powf(lo + (hi - lo) * k as f64 / 7.0);
            xs.push(v);
            xs.push(-v);
        }
        for b in breakpoints.iter().filter(|b| b.is_finite() && b.abs() <= 1e6) {
            let h = 0.02 * b.abs().max(1.0);
            xs.extend([b - h, *b, b + h]);
        }
        Self::new(xs, vec![0.05, 0.1, 0.5, 1.0, 5.0]).expect("default grid is valid")
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::default_for(&[])
    }
}

fn parse_list(text: &str) -> Result<Vec<f64>> {
    let bad = |what: &str| Error::Spec(format!("bad grid list {what:?}"));
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if let Some(open) = rest.find('(').filter(|i| rest[..*i].chars().all(|c| c.is_ascii_alphabetic())) {
            let name = &rest[..open];
            let close = rest.find(')').ok_or_else(|| bad(rest))?;
            let args: Vec<f64> = rest[open + 1..close]
                .split(',')
                .map(|a| a.trim().parse::<f64>().map_err(|_| bad(a)))
                .collect::<Result<_>>()?;
            let [a, b, n] = args[..] else { return Err(bad(rest)) };
            if !((1.0..=10_000.0).contains(&n) && n.fract() == 0.0) {
                return Err(bad(rest));
            }
            let n = n as usize;
            let step = |k: usize| if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
            match name {
                "lin" => out.extend((0..n).map(|k| a + (b - a) * step(k))),
                "geom" if a > 0.0 && b > 0.0 => out.extend((0..n).map(|k| a * (b / a).powf(step(k)))),
                _ => return Err(bad(name)),
            }
            rest = rest[close + 1..].trim_start();
            rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
        } else {
            let end = rest.find(',').unwrap_or(rest.len());
            let item = rest[..end].trim();
            out.push(item.parse::<f64>().map_err(|_| bad(item))?);
            rest = rest.get(end + 1..).unwrap_or("").trim_start();
        }
    }
    Ok(out)
}

/// `xs=<list>;ys=<list>`, each list a comma-separated mix of numbers,
/// `lin(a,b,n)` and `geom(a,b,n)`.
impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut xs = None;
        let mut ys = None;
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Spec(format!("expected key=value in grid spec, got {part:?}")))?;
            let list = parse_list(value)?;
            match key.trim() {
                "xs" if xs.is_none() => xs = Some(list),
                "ys" if ys.is_none() => ys = Some(list),
                k => return Err(Error::Spec(format!("unexpected grid key {k:?}"))),
            }
        }
        let default = GridSpec::default();
        GridSpec::new(xs.unwrap_or(default.xs), ys.unwrap_or(default.ys))
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        write!(f, "xs={};ys={}", join(&self.xs), join(&self.ys))
    }
}

/// Smallest violation that is still counted.
pub const VIOLATION_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// `[x, y]` of the first point involved.
    pub at: [f64; 2],
    /// `[x, y]` of the second point for pairwise criteria.
    pub other: Option<[f64; 2]>,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion: u8,
    pub description: String,
    pub passed: bool,
    pub checks: usize,
    pub violations: usize,
    pub worst: Option<Violation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    /// No violation found on the grid.
    Member,
    NonMember,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub overall: Membership,
    /// Preconditions of the criteria: `phi` is non-constant and maps into the closed upper half-plane.
    pub non_constant: bool,
    pub pick_positive: bool,
    pub criteria: Vec<CriterionVerdict>,
    /// Unwrapped arguments stayed in `[0, pi]` along every row.
    pub argument_in_range: bool,
    pub failure: Option<String>,
    pub grid: GridSpec,
    pub note: String,
}

impl MembershipReport {
    pub fn criterion(&self, k: u8) -> Option<&CriterionVerdict> {
        self.criteria.iter().find(|c| c.criterion == k)
    }

    /// Numbers of the failed criteria.
    pub fn failed(&self) -> Vec<u8> {
        self.criteria.iter().filter(|c| !c.passed).map(|c| c.criterion).collect()
    }
}

struct Tally {
    checks: usize,
    violations: usize,
    worst: Option<Violation>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checks: 0,
            violations: 0,
            worst: None,
        }
    }

    /// Records a check whose defect (positive means violated) is `defect`.
    fn record(&mut self, defect: f64, at: [f64; 2], other: Option<[f64; 2]>) {
        self.checks += 1;
        if defect > VIOLATION_FLOOR || defect.is_nan() {
            self.violations += 1;
            if self.worst.is_none_or(|w| defect > w.magnitude) {
                self.worst = Some(Violation { at, other, magnitude: defect });
            }
        }
    }

    fn finish(self, criterion: u8, description: &str) -> CriterionVerdict {
        CriterionVerdict {
            criterion,
            description: description.into(),
            passed: self.violations == 0,
            checks: self.checks,
            violations: self.violations,
            worst: self.worst,
        }
    }
}

/// Grid test of the four criteria for a non-constant Pick function `phi`.
///
/// Every criterion is checked over all ordered pairs of the grid (criteria
/// 1-3) or at every grid node (criterion 4, with a central difference of step
/// `1e-4 * y`). A pass on the grid corroborates membership; it does not prove it.
pub fn membership_test<F>(phi: F, grid: &GridSpec) -> MembershipReport
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let nx = grid.xs.len();
    let ny = grid.ys.len();
    let nodes: Vec<(usize, usize)> = (0..ny).flat_map(|j| (0..nx).map(move |i| (i, j))).collect();
    let evaluated: Vec<Result<[Complex64; 3]>> = nodes
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (grid.xs[i], grid.ys[j]);
            let h = 1e-4 * y;
            Ok([
                phi(Complex64::new(x, y))?,
                phi(Complex64::new(x, y - h))?,
                phi(Complex64::new(x, y + h))?,
            ])
        })
        .collect();

    let mut values = vec![[Complex64::default(); 3]; nodes.len()];
    for (k, r) in evaluated.into_iter().enumerate() {
        match r {
            Ok(v) if v.iter().all(|c| c.re.is_finite() && c.im.is_finite()) => values[k] = v,
            other => {
                let (i, j) = nodes[k];
                let why = match other {
                    Err(e) => e.to_string(),
                    Ok(_) => "non-finite value".into(),
                };
                return MembershipReport {
                    overall: Membership::Inconclusive,
                    non_constant: false,
                    pick_positive: false,
                    criteria: Vec::new(),
                    argument_in_range: false,
                    failure: Some(format!("evaluation failed at {}+{}i: {why}", grid.xs[i], grid.ys[j])),
                    grid: grid.clone(),
                    note: GRID_NOTE.into(),
                };
            }
        }
    }
    let at = |i: usize, j: usize| values[j * nx + i];
    let point = |i: usize, j: usize| [grid.xs[i], grid.ys[j]];

    let first = at(0, 0)[0];
    let scale = values.iter().map(|v| v[0].norm()).fold(0.0, f64::max).max(1.0);
    let non_constant = values.iter().any(|v| (v[0] - first).norm() > 1e-12 * scale);
    let pick_positive = values.iter().all(|v| v[0].im >= -VIOLATION_FLOOR);

    let mut c1 = Tally::new();
    for i in 0..nx {
        for j1 in 0..ny {
            for j2 in j1 + 1..ny {
                let defect = at(i, j2)[0].norm() - at(i, j1)[0].norm();
                c1.record(defect, point(i, j1), Some(point(i, j2)));
            }
        }
    }

    let mut c2 = Tally::new();
    let mut c3 = Tally::new();
    let mut argument_in_range = true;
    for j in 0..ny {
        let mut args: Vec<f64> = Vec::with_capacity(nx);
        for i in 0..nx {
            let raw = at(i, j)[0].arg();
            let unwrapped = match args.last() {
                None => raw,
                Some(&prev) => {
                    let mut d = raw - prev;
                    d -= (d / (2.0 * PI)).round() * 2.0 * PI;
                    prev + d
                }
            };
            if !(-VIOLATION_FLOOR..=PI + VIOLATION_FLOOR).contains(&unwrapped) {
                argument_in_range = false;
            }
            args.push(unwrapped);
        }
        for i1 in 0..nx {
            for i2 in i1 + 1..nx {
                c2.record(args[i1] - args[i2], point(i1, j), Some(point(i2, j)));
                let (a, b) = (at(i1, j)[0], at(i2, j)[0]);
                let det = a.re * b.im - b.re * a.im;
                c3.record(-det, point(i1, j), Some(point(i2, j)));
            }
        }
    }

    let mut c4 = Tally::new();
    for j in 0..ny {
        let h = 1e-4 * grid.ys[j];
        for i in 0..nx {
            let [v, below, above] = at(i, j);
            let dy = (above - below) / (2.0 * h);
            c4.record(v.re * dy.re + v.im * dy.im, point(i, j), None);
        }
    }

    let criteria = vec![
        c1.finish(1, "modulus strictly decreases upward along vertical lines"),
        c2.finish(2, "argument strictly increases left to right along horizontal lines"),
        c3.finish(3, "U(x1)V(x2) - U(x2)V(x1) > 0 for x1 < x2"),
        c4.finish(4, "U U_y + V V_y < 0"),
    ];
    let all_pass = criteria.iter().all(|c| c.passed);
    let overall = if non_constant && pick_positive && all_pass {
        Membership::Member
    } else {
        Membership::NonMember
    };
    MembershipReport {
        overall,
        non_constant,
        pick_positive,
        criteria,
        argument_in_range,
        failure: None,
        grid: grid.clone(),
        note: GRID_NOTE.into(),
    }
}

const GRID_NOTE: &str = "member means no violation was found on the listed grid; the criteria quantify over all points";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::StieltjesMeasure;

    const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

    fn two_atom() -> NuFunction {
        NuFunction::new(0.0, StieltjesMeasure::from_atoms(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap()).unwrap()
    }

    #[test]
    fn f_and_phi_examples() {
        let h = LogPickPrimitive::new(0.0, NuFunction::step(0.0, 1.0).unwrap()).unwrap();
        assert!((h.eval_f(I).unwrap() - I * (PI / 2.0)).norm() < 1e-15);
        let c = LogPickPrimitive::new(0.0, NuFunction::constant(0.3).unwrap()).unwrap();
        assert!((c.eval_f(Complex64::new(2.0, 0.5)).unwrap() - I * (0.3 * PI)).norm() < 1e-15);
        let one = LogPickPrimitive::new(1.0, NuFunction::default()).unwrap();
        assert_eq!(one.eval_f(I).unwrap(), Complex64::new(1.0, 0.0));
        assert!(LogPickPrimitive::new(0.0, NuFunction::constant(1.2).unwrap()).is_err());

        let p = PLogFunction::new(h);
        assert!((p.eval_phi(I).unwrap() - I).norm() < 1e-15);
        let z = Complex64::new(0.7, 0.2);
        assert!((p.eval_phi(z).unwrap() + 1.0 / z).norm() < 1e-14);
        let t = PLogFunction::from_nu(0.0, two_atom()).unwrap();
        assert!((t.eval_phi(I).unwrap() - I).norm() < 1e-15);
    }

    #[test]
    fn boundary_examples() {
        let p = PLogFunction::from_nu(0.0, NuFunction::step(0.0, 1.0).unwrap()).unwrap();
        assert!((p.boundary_phi(2.0).unwrap() - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        assert!((p.boundary_phi(-2.0).unwrap() - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!(p.boundary_phi(0.0).is_err());
        let one = PLogFunction::from_nu(0.0, NuFunction::default()).unwrap();
        assert_eq!(one.boundary_phi(3.0).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn exceptional_detection() {
        let e = detect_exceptional(&NuFunction::step(0.0, 1.0).unwrap()).unwrap();
        assert_eq!((e.theta, e.theta1, e.a), (1.0, 0.0, Some(0.0)));
        let e = detect_exceptional(&NuFunction::constant(0.25).unwrap()).unwrap();
        assert_eq!((e.theta, e.theta1, e.a), (0.0, 0.25, None));
        assert!(detect_exceptional(&two_atom()).is_none());
        // closed form agrees with the integral form
        let nu = NuFunction::new(0.2, StieltjesMeasure::from_atoms(&[(1.5, 0.6)]).unwrap()).unwrap();
        let l = LogPickPrimitive::new(0.4, nu).unwrap();
        let e = l.exceptional().unwrap();
        assert!((e.theta1 - 0.5).abs() < 1e-15);
        let z = Complex64::new(-0.3, 0.8);
        assert!((e.eval_f(z) - l.eval_f(z).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn v_examples() {
        assert!((v_from_nu(&two_atom(), 0.0, 0.0).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(v_from_nu(&two_atom(), 0.0, -5.0).unwrap(), 0.0);
        assert!(matches!(
            v_from_nu(&NuFunction::step(0.0, 1.0).unwrap(), 0.0, 1.0),
            Err(Error::Exceptional(_))
        ));
    }

    #[test]
    fn phase_function_closed_forms() {
        // rho = 1 - H gives z; rho = indicator of [0, 1] gives (z - 1)/(sqrt(2) z)
        let z = Complex64::new(0.4, 0.9);
        let id = PhaseFunction::new(0.0, vec![0.0], vec![1.0, 0.0]).unwrap();
        assert!((id.eval_phi(z).unwrap() - z).norm() < 1e-14);
        let bx = PhaseFunction::new(0.0, vec![0.0, 1.0], vec![0.0, 1.0, 0.0]).unwrap();
        let expect = (z - 1.0) / (z * 2f64.sqrt());
        assert!((bx.eval_phi(z).unwrap() - expect).norm() < 1e-14);
        // non-decreasing phase reproduces the measure representation
        let h = PhaseFunction::new(0.0, vec![0.0], vec![0.0, 1.0]).unwrap();
        assert!((h.eval_phi(z).unwrap() + 1.0 / z).norm() < 1e-14);
        assert!((h.boundary_phi(2.0).unwrap() + 0.5).norm() < 1e-15);
    }

    #[test]
    fn grid_parsing() {
        let g: GridSpec = "xs=lin(-1,1,3),5;ys=geom(0.1,10,3)".parse().unwrap();
        assert_eq!(g.xs, vec![-1.0, 0.0, 1.0, 5.0]);
        assert_eq!(g.ys.len(), 3);
        assert!((g.ys[1] - 1.0).abs() < 1e-15);
        assert!("xs=1;ys=1,2".parse::<GridSpec>().is_err());
        assert!("xs=1,2;ys=0,1".parse::<GridSpec>().is_err());
        assert!("zs=1,2".parse::<GridSpec>().is_err());
        assert!("xs=lin(1,2)".parse::<GridSpec>().is_err());
        let back: GridSpec = g.to_string().parse().unwrap();
        assert_eq!(back, g);
        let d = GridSpec::default();
        assert_eq!(d.xs.len(), 16);
        assert!((d.xs[15] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let grid = GridSpec::default_for(&[0.0]);
        let r = membership_test(|z| Ok(-1.0 / z), &grid);
        assert_eq!(r.overall, Membership::Member, "{:?}", r.failed());
        let r = membership_test(Ok, &grid);
        assert_eq!(r.overall, Membership::NonMember);
        assert!(!r.criterion(1).unwrap().passed);
        let rho = PhaseFunction::new(0.0, vec![0.0], vec![1.0, 0.0]).unwrap();
        let r = membership_test(|z| rho.eval_phi(z), &grid);
        assert!(!r.criterion(2).unwrap().passed);
        let r = membership_test(|_| Ok(I), &grid);
        assert!(!r.non_constant);
        assert_eq!(r.overall, Membership::NonMember);
        let r = membership_test(|_| Err(Error::NonFinite { at: 0.0 }), &grid);
        assert_eq!(r.overall, Membership::Inconclusive);
    }
}
