//! Runs a [`JobSpec`] and builds its report.

use std::f64::consts::PI;
use std::path::Path;

use hs_core::hardy::{p_window, window_sweep, LineOptions};
use hs_core::measure::json::MeasureSpec;
use hs_core::measure::{NuFunction, StieltjesMeasure};
use hs_core::pick::{PickCanonical, PrimitivePick};
use hs_core::plog::{v_from_nu_with, GridSpec, PLogFunction, PhaseFunction};
use hs_core::quad::{Point, QuadOptions, Tolerance};
use hs_core::starlike::{
    build_from_convex, build_from_mu, build_from_v_seeded, candidate_quad, certify_with, l_mu_identity_check,
    starlike_image_check, CircularDomain, UniversalCandidate, Verdict, DET_SAMPLE_SEED,
};
use hs_core::transforms::{cauchy_halfplane_with, hilbert_pv, poisson_v_with, BoundaryDensity, PVQuadSpec};
use hs_core::Error;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::job::{Builtin, Command, DensitySpec, JobSpec, Potential, Source};
use crate::report::{num, Outcome, ReportEnvelope, Table, TOOL};

/// Largest accepted residual of the identity check.
pub const IDENTITY_TOL: f64 = 1e-8;
pub const DEFAULT_SAMPLES: usize = 256;
pub const DEFAULT_YS: [f64; 3] = [0.1, 0.5, 1.0];

/// Exit class of a library error.
pub fn classify(e: &Error) -> Outcome {
    match e {
        Error::InvalidMeasure(_)
        | Error::InvalidArgument(_)
        | Error::Spec(_)
        | Error::Exceptional(_)
        | Error::BoundarySingularity { .. } => Outcome::UsageError,
        Error::Precondition { .. } => Outcome::Failed,
        Error::Quadrature { .. } | Error::NonFinite { .. } | Error::PrincipalValue { .. } => Outcome::NonConverged,
    }
}

#[derive(Debug)]
struct Failure {
    outcome: Outcome,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            outcome: classify(&e),
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        outcome: Outcome::UsageError,
        message: message.into(),
    }
}

struct Done {
    results: Value,
    table: Table,
    outcome: Outcome,
    diagnostic: Option<String>,
}

struct Ctx {
    quad: QuadOptions,
    seed: u64,
}

/// Default tolerance of a command: certification runs at the tighter
/// candidate tolerance, everything else at the quadrature default.
pub fn default_tolerance(command: Command) -> Tolerance {
    match command {
        Command::Certify => candidate_quad().tol,
        _ => Tolerance::default(),
    }
}

/// Runs `job`; relative input paths are resolved against `base`.
pub fn run(job: JobSpec, base: Option<&Path>) -> ReportEnvelope {
    let defaults = default_tolerance(job.command);
    let tolerance = Tolerance::new(
        job.parameters.tol_abs.unwrap_or(defaults.abs),
        job.parameters.tol_rel.unwrap_or(defaults.rel),
    );
    let seed = job.parameters.seed.unwrap_or(DET_SAMPLE_SEED);
    let max_radius = LineOptions::default().max_radius;
    let mut echo = job.clone();
    echo.parameters.tol_abs = Some(tolerance.abs);
    echo.parameters.tol_rel = Some(tolerance.rel);
    echo.parameters.seed = Some(seed);
    let done = match job.load_inputs(base) {
        Err(m) => Err(usage(m)),
        Ok(loaded) => {
            echo.input = loaded.input.clone();
            let base_quad = match loaded.command {
                Command::Certify => candidate_quad(),
                _ => QuadOptions::default(),
            };
            let ctx = Ctx {
                quad: QuadOptions { tol: tolerance, ..base_quad },
                seed,
            };
            tolerance.validate().map_err(Failure::from).and_then(|_| dispatch(&loaded, &ctx))
        }
    };
    let (results, table, verdict, diagnostic) = match done {
        Ok(d) => (d.results, d.table, d.outcome, d.diagnostic),
        Err(f) => (Value::Null, Table::default(), f.outcome, Some(f.message)),
    };
    ReportEnvelope {
        tool: TOOL.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        job: echo,
        tolerance,
        seed,
        max_radius,
        verdict,
        exit_code: verdict.exit_code(),
        diagnostic,
        results,
        table,
    }
}

fn dispatch(job: &JobSpec, ctx: &Ctx) -> Result<Done, Failure> {
    match job.command {
        Command::Eval => eval(job, ctx),
        Command::Transform => transform(job, ctx),
        Command::Hardy => hardy(job, ctx),
        Command::Certify => certify(job, ctx),
        Command::IdentityCheck => identity_check(job, ctx),
    }
}

fn inline<T>(s: &Option<Source<T>>) -> Option<&T> {
    match s {
        Some(Source::Inline(v)) => Some(v),
        _ => None,
    }
}

fn nu_input(job: &JobSpec) -> Result<NuFunction, Failure> {
    let spec: &MeasureSpec = inline(&job.input.nu).ok_or_else(|| usage(format!("{} needs --nu", job.command)))?;
    Ok(spec.to_nu()?)
}

fn mu_input(job: &JobSpec) -> Result<StieltjesMeasure, Failure> {
    let spec: &MeasureSpec = inline(&job.input.mu).ok_or_else(|| usage(format!("{} needs --mu", job.command)))?;
    Ok(spec.to_measure()?)
}

fn density(spec: &DensitySpec) -> Result<BoundaryDensity, Failure> {
    Ok(match spec {
        DensitySpec::Indicator { a, b, height } => {
            let h = match height {
                Some(h) => *h,
                None if *a > 0.0 && b > a => PI / (b / a).ln(),
                None => return Err(usage("an indicator without height needs 0 < a < b")),
            };
            BoundaryDensity::indicator(*a, *b, h)?
        }
        DensitySpec::Nu { nu, beta } => {
            let Source::Inline(m) = nu else {
                return Err(usage("density input was not loaded"));
            };
            BoundaryDensity::from_nu(&m.to_nu()?, *beta)?
        }
        DensitySpec::Phase { beta, breaks, values } => {
            BoundaryDensity::from_phase(&PhaseFunction::new(*beta, breaks.clone(), values.clone())?)?
        }
    })
}

/// `v` rescaled so that `int v(t)/t dt = pi`.
fn normalized(v: BoundaryDensity, q: &QuadOptions) -> Result<BoundaryDensity, Failure> {
    let weight = v.integrate(|p: Point| 1.0 / p.value(), &[], q)?.value;
    if !(weight > 0.0 && weight.is_finite()) {
        return Err(usage(format!("cannot normalize a density with int v(t)/t dt = {weight}")));
    }
    let s = PI / weight;
    let label = format!("{} (normalized)", v.label());
    let (lower, decay, bps) = (v.support_lower(), v.decay(), v.breakpoints().to_vec());
    Ok(BoundaryDensity::new(label, lower, decay, bps, move |p: Point| s * v.eval_point(p))?)
}

fn density_input(job: &JobSpec, ctx: &Ctx) -> Result<BoundaryDensity, Failure> {
    let v = if let Some(spec) = inline(&job.input.v) {
        density(spec)?
    } else if job.input.nu.is_some() {
        BoundaryDensity::from_nu(&nu_input(job)?, job.parameters.beta.unwrap_or(0.0))?
    } else {
        return Err(usage(format!("{} needs --v or --nu", job.command)));
    };
    if job.parameters.normalize == Some(true) {
        normalized(v, &ctx.quad)
    } else {
        Ok(v)
    }
}

/// Collects rows, turning numerical failures into unconverged rows.
struct Rows {
    table: Table,
    notes: Vec<String>,
}

impl Rows {
    fn new(columns: &[&str]) -> Self {
        Self {
            table: Table::new(columns),
            notes: Vec::new(),
        }
    }

    /// Pushes `(quantity, arg, value, converged)`.
    fn value(&mut self, quantity: &str, arg: Complex64, value: hs_core::Result<Complex64>) -> Result<(), Failure> {
        let row = |v: Complex64, ok: bool| {
            vec![
                Value::String(quantity.into()),
                num(arg.re),
                num(arg.im),
                num(v.re),
                num(v.im),
                Value::Bool(ok),
            ]
        };
        match value {
            Ok(v) => self.table.push(row(v, true)),
            Err(e) if classify(&e) == Outcome::NonConverged => {
                self.notes.push(format!("{quantity} at {}: {e}", crate::complex::format_complex(arg)));
                self.table.push(row(Complex64::new(f64::NAN, f64::NAN), false));
            }
            Err(e) => return Err(e.into()),
        }
        Ok(())
    }

    fn finish(self, results: Value) -> Done {
        let outcome = if self.notes.is_empty() { Outcome::Pass } else { Outcome::NonConverged };
        Done {
            results: with_notes(results, &self.notes),
            table: self.table,
            outcome,
            diagnostic: self.notes.first().cloned(),
        }
    }
}

fn with_notes(mut results: Value, notes: &[String]) -> Value {
    if let Value::Object(m) = &mut results {
        m.insert("notes".into(), json!(notes));
    }
    results
}

const VALUE_COLUMNS: [&str; 6] = ["quantity", "arg_re", "arg_im", "re", "im", "converged"];

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn eval(job: &JobSpec, ctx: &Ctx) -> Result<Done, Failure> {
    let p = &job.parameters;
    if p.z.is_empty() && p.x.is_empty() {
        return Err(usage("eval needs --z or --x points"));
    }
    let alpha = p.alpha.unwrap_or(0.0);
    let beta = p.beta.unwrap_or(0.0);
    let q = &ctx.quad;
    let mut rows = Rows::new(&VALUE_COLUMNS);
    if job.input.nu.is_some() {
        let nu = nu_input(job)?;
        let f = PrimitivePick::new(alpha, beta, nu.clone())?;
        let exp_form = if alpha == 0.0 { PLogFunction::from_nu(beta, nu.clone()).ok() } else { None };
        for &z in &p.z {
            let value = if z.im < 0.0 { f.eval_reflected(z, q) } else { f.eval_with(z, q) };
            rows.value("f", z, value)?;
            if z.im > 0.0 {
                rows.value("df", z, f.derivative_with(z, q))?;
            }
            if let Some(g) = &exp_form {
                let value = if z.im < 0.0 { g.eval_phi_with(z.conj(), q).map(|w| w.conj()) } else { g.eval_phi_with(z, q) };
                rows.value("phi", z, value)?;
            }
        }
        for &x in &p.x {
            rows.value("u", real(x), f.boundary_u_with(x, q).map(real))?;
            rows.value("v", real(x), Ok(real(f.boundary_v(x))))?;
            if exp_form.is_some() {
                rows.value("density", real(x), v_from_nu_with(&nu, beta, x, q).map(real))?;
            }
        }
        Ok(rows.finish(json!({"function": "primitive", "alpha": alpha, "beta": beta, "exp_form": exp_form.is_some()})))
    } else if job.input.mu.is_some() {
        if !p.x.is_empty() {
            return Err(usage("boundary values (--x) need --nu"));
        }
        let g = PickCanonical::new(alpha, beta, mu_input(job)?)?;
        for &z in &p.z {
            rows.value("pick", z, g.eval_with(z, q))?;
        }
        Ok(rows.finish(json!({"function": "pick", "alpha": alpha, "beta": beta})))
    } else {
        Err(usage("eval needs --nu or --mu"))
    }
}

fn transform(job: &JobSpec, ctx: &Ctx) -> Result<Done, Failure> {
    let p = &job.parameters;
    let q = &ctx.quad;
    let mut rows = Rows::new(&VALUE_COLUMNS);
    let mode = job.mode.as_deref().ok_or_else(|| usage("transform needs a mode: hilbert, cauchy or poisson"))?;
    match mode {
        "hilbert" => {
            if p.x.is_empty() {
                return Err(usage("hilbert needs --x points"));
            }
            let v = density_input(job, ctx)?;
            let spec = PVQuadSpec { tol: q.tol, ..PVQuadSpec::default() };
            for &x in &p.x {
                rows.value("hilbert", real(x), hilbert_pv(&v, x, &spec).map(real))?;
            }
            Ok(rows.finish(json!({"transform": "hilbert", "density": v.label(), "pv": spec})))
        }
        "cauchy" => {
            if p.z.is_empty() {
                return Err(usage("cauchy needs --z points"));
            }
            let v = density_input(job, ctx)?;
            for &z in &p.z {
                rows.value("cauchy", z, cauchy_halfplane_with(&v, z, q))?;
            }
            Ok(rows.finish(json!({"transform": "cauchy", "density": v.label()})))
        }
        "poisson" => {
            if p.x.is_empty() || p.y.is_empty() {
                return Err(usage("poisson needs --x and --y points"));
            }
            let nu = nu_input(job)?;
            let alpha = p.alpha.unwrap_or(0.0);
            for &x in &p.x {
                for &y in &p.y {
                    rows.value("poisson", Complex64::new(x, y), poisson_v_with(&nu, alpha, x, y, q).map(real))?;
                }
            }
            Ok(rows.finish(json!({"transform": "poisson", "alpha": alpha})))
        }
        other => Err(usage(format!("unknown transform {other:?}; expected hilbert, cauchy or poisson"))),
    }
}

/// Exponents around the window: below, inside and above.
fn sweep_exponents(lower: f64, upper: f64) -> Vec<f64> {
    if upper.is_finite() {
        let w = upper - lower;
        vec![0.5 * lower, lower + 0.25 * w, lower + 0.5 * w, lower + 0.75 * w, upper + 0.5]
    } else {
        vec![0.5 * lower, 1.25 * lower, 2.0 * lower, 4.0 * lower]
    }
}

fn hardy(job: &JobSpec, ctx: &Ctx) -> Result<Done, Failure> {
    let p = &job.parameters;
    let nu = nu_input(job)?;
    let mode = job.mode.as_deref().unwrap_or("norm");
    let window = p_window(&nu)?;
    if mode == "window" {
        let mut table = Table::new(&["lower", "upper"]);
        table.push(vec![num(window.lower), num(window.upper)]);
        return Ok(Done {
            results: json!({"window": window}),
            table,
            outcome: Outcome::Pass,
            diagnostic: None,
        });
    }
    let ps = match mode {
        "norm" if p.p.is_empty() => return Err(usage("hardy norm needs --p")),
        "norm" => p.p.clone(),
        "sweep" if p.p.is_empty() => sweep_exponents(window.lower, window.upper),
        "sweep" => p.p.clone(),
        other => return Err(usage(format!("unknown hardy mode {other:?}; expected norm, sweep or window"))),
    };
    let ys = if p.y.is_empty() { DEFAULT_YS.to_vec() } else { p.y.clone() };
    let f = PLogFunction::from_nu(p.beta.unwrap_or(0.0), nu)?;
    let opts = LineOptions {
        quad: ctx.quad,
        ..LineOptions::default()
    };
    let sweep = window_sweep(&f, &ps, &ys, &opts)?;
    let mut table = Table::new(&["p", "y", "value", "converged", "line_converged", "radius", "in_window"]);
    let mut notes = Vec::new();
    for e in &sweep.entries {
        table.push(vec![
            num(e.p),
            num(e.y),
            num(e.value),
            Value::Bool(e.converged),
            Value::Bool(e.line_converged),
            num(e.radius),
            Value::Bool(window.contains(e.p)),
        ]);
        if !e.converged {
            let why = if e.line_converged { "integrals grow as y -> 0" } else { "line integral did not converge" };
            notes.push(format!("p={} y={}: {why}", e.p, e.y));
        }
    }
    let outcome = if notes.is_empty() { Outcome::Pass } else { Outcome::NonConverged };
    Ok(Done {
        results: with_notes(json!({"sweep": sweep}), &notes),
        table,
        outcome,
        diagnostic: notes.first().cloned(),
    })
}

fn builtin_candidate(b: Builtin) -> Result<UniversalCandidate, Failure> {
    let c = match b {
        Builtin::Polylog(alpha) => UniversalCandidate::polylog(alpha)?,
        Builtin::Exceptional { theta, a } => UniversalCandidate::exceptional(theta, a)?,
        Builtin::Koebe => UniversalCandidate::exceptional(1.0, 1.0)?.with_label("koebe"),
        Builtin::Identity => UniversalCandidate::exceptional(0.0, 1.0)?.with_label("identity"),
        Builtin::PoleAtMinusOne => UniversalCandidate::callable("1/(1+z)", |z: Complex64| Ok(1.0 / (1.0 + z))),
        Builtin::OnePlusFiveZ => UniversalCandidate::callable("1+5z", |z: Complex64| Ok(1.0 + 5.0 * z)),
    };
    Ok(c)
}

fn certify_mode(job: &JobSpec) -> Result<&str, Failure> {
    if let Some(m) = job.mode.as_deref() {
        return Ok(m);
    }
    let i = &job.input;
    match (i.builtin.is_some(), i.psi.is_some(), i.v.is_some(), i.mu.is_some()) {
        (true, false, false, false) => Ok("builtin"),
        (false, true, false, false) => Ok("convex"),
        (false, false, true, false) => Ok("v"),
        (false, false, false, true) => Ok("mu"),
        _ => Err(usage("certify needs exactly one of --mu, --v, --psi, --builtin")),
    }
}

fn certify(job: &JobSpec, ctx: &Ctx) -> Result<Done, Failure> {
    let p = &job.parameters;
    let mut extra = Value::Null;
    let candidate = match certify_mode(job)? {
        "mu" => build_from_mu(&mu_input(job)?)?,
        "v" => build_from_v_seeded(density_input(job, ctx)?, ctx.seed)?,
        "convex" => {
            let text = job.input.psi.as_deref().ok_or_else(|| usage("certify convex needs --psi"))?;
            let psi: Potential = text.parse().map_err(usage)?;
            let a = p.a.unwrap_or(1.0);
            let build = build_from_convex(a, move |t| psi.eval(t), p.gamma.unwrap_or(2.0))?;
            extra = json!({
                "a": a,
                "b": build.b,
                "convexity_defect": build.convexity_defect,
                "gamma_integral": build.gamma_integral,
            });
            build.candidate
        }
        "builtin" => {
            let text = job.input.builtin.as_deref().ok_or_else(|| usage("certify builtin needs --builtin"))?;
            builtin_candidate(text.parse().map_err(usage)?)?
        }
        other => return Err(usage(format!("unknown certify mode {other:?}; expected mu, v, convex or builtin"))),
    };
    let candidate = candidate.with_quad(ctx.quad);
    let grid = match &p.grid {
        Some(g) => Some(g.parse::<GridSpec>()?),
        None => None,
    };
    let report = certify_with(&candidate, grid.as_ref());

    let mut table = Table::new(&["check", "passed", "value"]);
    let row = |name: String, passed: bool, value: f64| vec![Value::String(name), Value::Bool(passed), num(value)];
    table.push(row("normalization".into(), report.normalization_error.is_finite(), report.normalization_error));
    if let Some(h) = &report.holomorphy {
        table.push(row("holomorphy".into(), h.passed, h.worst));
    }
    if let Some(w) = &report.whitelist {
        table.push(row("whitelist".into(), true, w.residual));
    }
    if let Some(m) = &report.membership {
        for c in &m.criteria {
            let worst = c.worst.map_or(0.0, |v| v.magnitude);
            table.push(row(format!("criterion-{}", c.criterion), c.passed, worst));
        }
    }

    let mut outcome = match report.verdict {
        Verdict::Member => Outcome::Member,
        Verdict::Exceptional => Outcome::Exceptional,
        Verdict::Rejected => Outcome::Rejected,
        Verdict::Inconclusive => Outcome::Inconclusive,
    };
    let mut diagnostic = report.note.clone();
    let mut geometry = Vec::new();
    let run_geometry = matches!(outcome, Outcome::Member | Outcome::Exceptional) && p.geometry != Some(false);
    if run_geometry {
        let domains = if p.domains.is_empty() { CircularDomain::battery() } else { p.domains.clone() };
        let samples = p.samples.unwrap_or(DEFAULT_SAMPLES);
        for (k, d) in domains.iter().enumerate() {
            d.validate()?;
            let ev = match starlike_image_check(&candidate, d, samples) {
                Ok(ev) => ev,
                Err(e) if classify(&e) == Outcome::NonConverged => {
                    outcome = Outcome::NonConverged;
                    diagnostic = Some(format!("geometric check on domain {k}: {e}"));
                    break;
                }
                Err(e) => return Err(e.into()),
            };
            for (j, disk) in ev.disks.iter().enumerate() {
                table.push(row(format!("domain-{k}.disk-{j}.turning"), disk.min_turning >= 0.0, disk.min_turning));
                table.push(row(format!("domain-{k}.disk-{j}.winding"), disk.winding == 1, disk.winding as f64));
            }
            if let Some(why) = &ev.inconclusive {
                if outcome != Outcome::Rejected {
                    outcome = Outcome::Inconclusive;
                    diagnostic = Some(format!("geometric check on domain {k}: {why}"));
                }
            } else if !ev.passed {
                outcome = Outcome::Rejected;
                diagnostic = Some(format!(
                    "image of domain {k} is not starlike: min turning {}, winding {}",
                    ev.min_turning, ev.winding
                ));
            }
            geometry.push(ev);
        }
    }
    if outcome == Outcome::Rejected && diagnostic.is_none() {
        diagnostic = report.failed_step.map(|s| format!("failed at {s:?}"));
    }
    Ok(Done {
        results: json!({
            "candidate": candidate.label(),
            "certification": report,
            "geometry": geometry,
            "convex": extra,
        }),
        table,
        outcome,
        diagnostic,
    })
}

fn identity_check(job: &JobSpec, ctx: &Ctx) -> Result<Done, Failure> {
    let mu = mu_input(job)?;
    let zs = if job.parameters.z.is_empty() { vec![Complex64::new(0.0, 1.0)] } else { job.parameters.z.clone() };
    let mut table = Table::new(&["z_re", "z_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "passed"]);
    let mut notes = Vec::new();
    let mut failed = false;
    for z in zs {
        match l_mu_identity_check(&mu, z, &ctx.quad) {
            Ok(r) => {
                let passed = r.residual <= IDENTITY_TOL;
                failed |= !passed;
                table.push(vec![
                    num(z.re),
                    num(z.im),
                    num(r.lhs.re),
                    num(r.lhs.im),
                    num(r.rhs.re),
                    num(r.rhs.im),
                    num(r.residual),
                    Value::Bool(passed),
                ]);
                if !passed {
                    notes.push(format!("residual {} at {} exceeds {IDENTITY_TOL}", r.residual, crate::complex::format_complex(z)));
                }
            }
            Err(e) if classify(&e) == Outcome::NonConverged => {
                notes.push(format!("at {}: {e}", crate::complex::format_complex(z)));
                let mut row = vec![num(z.re), num(z.im)];
                row.extend(std::iter::repeat_n(Value::Null, 5));
                row.push(Value::Bool(false));
                table.push(row);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let unconverged = table.rows.iter().any(|r| r[2].is_null());
    let outcome = if unconverged {
        Outcome::NonConverged
    } else if failed {
        Outcome::Failed
    } else {
        Outcome::Pass
    };
    Ok(Done {
        results: with_notes(json!({"threshold": IDENTITY_TOL}), &notes),
        table,
        outcome,
        diagnostic: notes.first().cloned(),
    })
}
