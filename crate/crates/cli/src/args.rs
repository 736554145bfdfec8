//! Command-line flags and their translation into a [`JobSpec`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hs_core::measure::json::MeasureSpec;
use num_complex::Complex64;

use crate::complex::parse_complex;
use crate::job::{Command, DensitySpec, Format, Input, JobSpec, Output, Parameters, Source};

#[derive(Debug, Parser)]
#[command(name = "hs", version, about = "Pick functions, boundary transforms, Hardy norms and starlikeness checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Absolute quadrature tolerance.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol_abs: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol_rel: Option<f64>,
    /// Membership grid, `xs=a,b,...;ys=c,d,...`.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Report file; with `--format csv` the full JSON report goes next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_parser = parse_format)]
    pub format: Option<Format>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn parse_z(s: &str) -> Result<Complex64, String> {
    parse_complex(s)
}

#[derive(Debug, Clone, Default, Args)]
pub struct Points {
    /// Complex points `a+bi`; repeat or separate with commas.
    #[arg(long, value_parser = parse_z, value_delimiter = ',', allow_hyphen_values = true)]
    pub z: Vec<Complex64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub y: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Values of the primitive function (from --nu) or the Pick function (from --mu).
    Eval {
        /// Measure JSON, inline or a file path.
        #[arg(long)]
        nu: Option<String>,
        #[arg(long)]
        mu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[command(flatten)]
        points: Points,
    },
    /// Hilbert, Cauchy or Poisson transforms of a boundary density.
    Transform {
        #[arg(value_enum)]
        mode: TransformMode,
        /// Density JSON (`{"kind": "indicator" | "nu" | "phase", ...}`).
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        nu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long)]
        normalize: bool,
        #[command(flatten)]
        points: Points,
    },
    /// Line p-norms of exp(f) and the admissible exponent window.
    Hardy {
        #[arg(value_enum)]
        mode: Option<HardyMode>,
        #[arg(long)]
        nu: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Vec<f64>,
    },
    /// Certify a candidate for universal starlikeness.
    Certify {
        #[arg(value_enum)]
        mode: Option<CertifyMode>,
        #[arg(long)]
        mu: Option<String>,
        #[arg(long)]
        v: Option<String>,
        /// Lower end of the convex potential's support.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        /// Convex potential: `t`, `t^P` or `poly:c0,c1,...`.
        #[arg(long)]
        psi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<f64>,
        /// `polylog:ALPHA`, `exceptional:THETA:A`, `koebe`, `identity`,
        /// `pole-at-minus-one` or `one-plus-5z`.
        #[arg(long)]
        builtin: Option<String>,
        /// Samples per circle in the geometric check.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        no_geometry: bool,
        /// Rescale the density so that int v(t)/t dt = pi.
        #[arg(long)]
        normalize: bool,
    },
    /// Both sides of the identity relating int log(1/(1 - tz)) dmu to a Pick integral.
    IdentityCheck {
        #[arg(long)]
        mu: String,
        #[arg(long, value_parser = parse_z, value_delimiter = ',', allow_hyphen_values = true)]
        z: Vec<Complex64>,
    },
    /// Run a JobSpec file.
    Run {
        #[arg(long)]
        job: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TransformMode {
    Hilbert,
    Cauchy,
    Poisson,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum HardyMode {
    Norm,
    Sweep,
    Window,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CertifyMode {
    Mu,
    V,
    Convex,
    Builtin,
}

fn measure(arg: Option<String>) -> Result<Option<Source<MeasureSpec>>, String> {
    arg.map(|a| Source::from_arg(&a)).transpose()
}

fn density(arg: Option<String>) -> Result<Option<Source<DensitySpec>>, String> {
    arg.map(|a| Source::from_arg(&a)).transpose()
}

fn mode_name<T: ValueEnum>(m: &T) -> String {
    m.to_possible_value().expect("no skipped variants").get_name().to_string()
}

/// Where a job comes from: flags, or a file whose directory anchors relative paths.
pub enum JobSource {
    Flags(JobSpec),
    File(PathBuf),
}

/// Job described by subcommand flags; `run` is returned as a file reference.
pub fn to_job(cmd: Cmd) -> Result<JobSource, String> {
    let mut input = Input::default();
    let mut params = Parameters::default();
    let (command, mode) = match cmd {
        Cmd::Run { job } => return Ok(JobSource::File(job)),
        Cmd::Eval {
            nu,
            mu,
            alpha,
            beta,
            points,
        } => {
            input.nu = measure(nu)?;
            input.mu = measure(mu)?;
            params.alpha = alpha;
            params.beta = beta;
            set_points(&mut params, points);
            (Command::Eval, None)
        }
        Cmd::Transform {
            mode,
            v,
            nu,
            alpha,
            beta,
            normalize,
            points,
        } => {
            input.v = density(v)?;
            input.nu = measure(nu)?;
            params.alpha = alpha;
            params.beta = beta;
            params.normalize = normalize.then_some(true);
            set_points(&mut params, points);
            (Command::Transform, Some(mode_name(&mode)))
        }
        Cmd::Hardy { mode, nu, beta, p, y } => {
            input.nu = measure(Some(nu))?;
            params.beta = beta;
            params.p = p;
            params.y = y;
            (Command::Hardy, mode.map(|m| mode_name(&m)))
        }
        Cmd::Certify {
            mode,
            mu,
            v,
            a,
            psi,
            gamma,
            builtin,
            samples,
            no_geometry,
            normalize,
        } => {
            input.mu = measure(mu)?;
            input.v = density(v)?;
            input.psi = psi;
            input.builtin = builtin;
            params.a = a;
            params.gamma = gamma;
            params.samples = samples;
            params.geometry = no_geometry.then_some(false);
            params.normalize = normalize.then_some(true);
            (Command::Certify, mode.map(|m| mode_name(&m)))
        }
        Cmd::IdentityCheck { mu, z } => {
            input.mu = measure(Some(mu))?;
            params.z = z;
            (Command::IdentityCheck, None)
        }
    };
    Ok(JobSource::Flags(JobSpec {
        command,
        mode,
        input,
        parameters: params,
        output: Output::default(),
    }))
}

fn set_points(params: &mut Parameters, points: Points) {
    params.z = points.z;
    params.x = points.x;
    params.y = points.y;
}

/// Global flags take precedence over the job's own settings.
pub fn apply_global(job: &mut JobSpec, g: &Global) {
    let p = &mut job.parameters;
    p.tol_abs = g.tol_abs.or(p.tol_abs);
    p.tol_rel = g.tol_rel.or(p.tol_rel);
    p.seed = g.seed.or(p.seed);
    if g.grid.is_some() {
        p.grid = g.grid.clone();
    }
    if let Some(out) = &g.out {
        job.output.path = Some(out.display().to_string());
    }
    if let Some(f) = g.format {
        job.output.format = f;
    }
}
