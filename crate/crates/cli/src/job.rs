//! Job descriptions: what to run, on which input, with which parameters.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use hs_core::measure::json::MeasureSpec;
use hs_core::starlike::CircularDomain;
use num_complex::Complex64;
use serde::de::{DeserializeOwned, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Eval,
    Transform,
    Hardy,
    Certify,
    IdentityCheck,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Eval => "eval",
            Command::Transform => "transform",
            Command::Hardy => "hardy",
            Command::Certify => "certify",
            Command::IdentityCheck => "identity-check",
        })
    }
}

/// An inline JSON value or the path of a file holding it.
#[derive(Debug, Clone, PartialEq)]
pub enum Source<T> {
    Inline(T),
    Path(String),
}

impl<T: Serialize> Serialize for Source<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Source::Inline(v) => v.serialize(s),
            Source::Path(p) => s.serialize_str(p),
        }
    }
}

impl<'de, T: DeserializeOwned> Deserialize<'de> for Source<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(p) => Ok(Source::Path(p)),
            v => serde_json::from_value(v).map(Source::Inline).map_err(serde::de::Error::custom),
        }
    }
}

impl<T: DeserializeOwned> Source<T> {
    /// Command-line form: JSON when the text starts with `{`, a path otherwise.
    pub fn from_arg(arg: &str) -> Result<Self, String> {
        if arg.trim_start().starts_with('{') {
            serde_json::from_str(arg).map(Source::Inline).map_err(|e| format!("inline JSON: {e}"))
        } else {
            Ok(Source::Path(arg.to_string()))
        }
    }

    /// Reads the file behind a path, leaving inline values untouched.
    pub fn load(self, base: Option<&Path>) -> Result<T, String> {
        match self {
            Source::Inline(v) => Ok(v),
            Source::Path(p) => {
                let path = match base {
                    Some(dir) if Path::new(&p).is_relative() => dir.join(&p),
                    _ => Path::new(&p).to_path_buf(),
                };
                let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
            }
        }
    }
}

/// A boundary density `v` for the transform and certification commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DensitySpec {
    /// `height` on `[a, b]`; without a height the density is normalized.
    Indicator { a: f64, b: f64, height: Option<f64> },
    /// Boundary imaginary part of `exp(beta + int log(sqrt(1+t^2)/(t - z)) dnu)`.
    Nu {
        nu: Source<MeasureSpec>,
        #[serde(default)]
        beta: f64,
    },
    /// `exp(u) sin(pi s(x))` for a piecewise-constant phase `s`.
    Phase {
        #[serde(default)]
        beta: f64,
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
}

impl DensitySpec {
    fn load(self, base: Option<&Path>) -> Result<Self, String> {
        Ok(match self {
            DensitySpec::Nu { nu, beta } => DensitySpec::Nu {
                nu: Source::Inline(nu.load(base)?),
                beta,
            },
            other => other,
        })
    }
}

/// Convex potentials for the `certify convex` pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// `t^power`
    Power(f64),
    /// `c0 + c1 t + c2 t^2 + ...`
    Poly(Vec<f64>),
}

impl Potential {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Potential::Power(p) => t.powf(*p),
            Potential::Poly(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck),
        }
    }
}

impl FromStr for Potential {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let number = |x: &str| -> Result<f64, String> {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad number {x:?} in potential {s:?}"))
        };
        if s == "t" {
            return Ok(Potential::Power(1.0));
        }
        if let Some(p) = s.strip_prefix("t^") {
            return Ok(Potential::Power(number(p)?));
        }
        if let Some(list) = s.strip_prefix("poly:") {
            let c = list.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
            return Ok(Potential::Poly(c));
        }
        Err(format!("unknown potential {s:?}; expected t, t^P or poly:c0,c1,..."))
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Power(p) if *p == 1.0 => f.write_str("t"),
            Potential::Power(p) => write!(f, "t^{p}"),
            Potential::Poly(c) => {
                let parts: Vec<String> = c.iter().map(f64::to_string).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

/// Built-in candidates for `certify builtin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    Polylog(f64),
    Exceptional { theta: f64, a: f64 },
    /// `1/(1 - z)`
    Koebe,
    /// The constant 1.
    Identity,
    /// `1/(1 + z)`
    PoleAtMinusOne,
    /// `1 + 5z`
    OnePlusFiveZ,
}

impl FromStr for Builtin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let number = |x: &str| -> Result<f64, String> {
            x.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad number {x:?} in builtin {s:?}"))
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["polylog", alpha] => Ok(Builtin::Polylog(number(alpha)?)),
            ["exceptional", theta, a] => Ok(Builtin::Exceptional {
                theta: number(theta)?,
                a: number(a)?,
            }),
            ["koebe"] => Ok(Builtin::Koebe),
            ["identity"] => Ok(Builtin::Identity),
            ["pole-at-minus-one"] => Ok(Builtin::PoleAtMinusOne),
            ["one-plus-5z"] => Ok(Builtin::OnePlusFiveZ),
            _ => Err(format!(
                "unknown builtin {s:?}; expected polylog:ALPHA, exceptional:THETA:A, koebe, identity, \
                 pole-at-minus-one or one-plus-5z"
            )),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Polylog(a) => write!(f, "polylog:{a}"),
            Builtin::Exceptional { theta, a } => write!(f, "exceptional:{theta}:{a}"),
            Builtin::Koebe => f.write_str("koebe"),
            Builtin::Identity => f.write_str("identity"),
            Builtin::PoleAtMinusOne => f.write_str("pole-at-minus-one"),
            Builtin::OnePlusFiveZ => f.write_str("one-plus-5z"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Input {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Source<MeasureSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Source<MeasureSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Source<DensitySpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    /// Complex points as `[re, im]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub z: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub x: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub y: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Lower end of the convex potential's support.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// Exponent of the integrability check of a convex potential.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Membership grid as `xs=...;ys=...`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_abs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_rel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Samples per circle of the geometric check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Run the geometric check after certification (default true).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<bool>,
    /// Domains of the geometric check; the standard battery when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub domains: Vec<CircularDomain>,
    /// Rescale a density so that `int v(t)/t dt = pi`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalize: Option<bool>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format {s:?}; expected json or csv")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    /// Sub-mode: `hilbert|cauchy|poisson`, `norm|sweep|window`, `mu|v|convex|builtin`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default)]
    pub input: Input,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default)]
    pub output: Output,
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// Replaces file references by their contents; relative paths are taken
    /// from `base` when given.
    pub fn load_inputs(mut self, base: Option<&Path>) -> Result<Self, String> {
        let inp = &mut self.input;
        if let Some(nu) = inp.nu.take() {
            inp.nu = Some(Source::Inline(nu.load(base)?));
        }
        if let Some(mu) = inp.mu.take() {
            inp.mu = Some(Source::Inline(mu.load(base)?));
        }
        if let Some(v) = inp.v.take() {
            inp.v = Some(Source::Inline(v.load(base)?.load(base)?));
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn job_round_trip() {
        let text = r#"{"command": "hardy", "mode": "norm",
            "input": {"nu": {"atoms": [[-1, 0.5], [1, 0.5]]}},
            "parameters": {"p": [2.5], "y": [0.1], "z": [[0, 1]]}}"#;
        let job = JobSpec::parse(text).unwrap();
        assert_eq!(job.command, Command::Hardy);
        assert_eq!(job.parameters.z, vec![Complex64::new(0.0, 1.0)]);
        let again = JobSpec::parse(&serde_json::to_string(&job).unwrap()).unwrap();
        assert_eq!(again, job);
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(JobSpec::parse(r#"{"command": "eval", "extra": 1}"#).is_err());
        assert!(JobSpec::parse(r#"{"command": "eval", "parameters": {"zz": []}}"#).is_err());
        assert!(JobSpec::parse(r#"{"command": "evaluate"}"#).is_err());
        let v = r#"{"command": "certify", "input": {"v": {"kind": "indicator", "a": 1, "b": 2, "c": 3}}}"#;
        assert!(JobSpec::parse(v).is_err());
    }

    #[test]
    fn sources() {
        let s: Source<MeasureSpec> = Source::from_arg("two_atoms.json").unwrap();
        assert_eq!(s, Source::Path("two_atoms.json".into()));
        let s: Source<MeasureSpec> = Source::from_arg(r#"{"atoms": [[1, 1.0]]}"#).unwrap();
        assert!(matches!(s, Source::Inline(_)));
        assert!(Source::<MeasureSpec>::from_arg("{not json").is_err());
    }

    #[test]
    fn potentials_and_builtins() {
        assert_eq!("t".parse::<Potential>().unwrap(), Potential::Power(1.0));
        assert_eq!("t^2".parse::<Potential>().unwrap().eval(3.0), 9.0);
        assert_eq!("poly:1,0,2".parse::<Potential>().unwrap().eval(2.0), 9.0);
        assert!("exp".parse::<Potential>().is_err());
        for s in ["polylog:0.5", "exceptional:1:2", "koebe", "identity", "pole-at-minus-one", "one-plus-5z"] {
            let b: Builtin = s.parse().unwrap();
            assert_eq!(b.to_string(), s);
        }
        assert!("polylog".parse::<Builtin>().is_err());
    }
}
