//! JSON description of a measure:
//!
//! ```json
//! {"baseline": 0.0,
//!  "atoms": [[-1, 0.5], [1, 0.5]],
//!  "pieces": [{"interval": [0, 2], "coeffs": [0.3]}],
//!  "tail": {"from": 1, "kind": "exp_convex", "params": {"weight": 0.37, "rate": 1, "power": 1}}}
//! ```
//!
//! Piece coefficients are in the local variable `t - a` of their interval `[a, b]`.

use serde::{Deserialize, Serialize};

use super::{Atom, DensityLaw, DensityPiece, NuFunction, StieltjesMeasure};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    #[serde(default)]
    pub baseline: f64,
    #[serde(default)]
    pub atoms: Vec<[f64; 2]>,
    #[serde(default)]
    pub pieces: Vec<PieceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub interval: [f64; 2],
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailSpec {
    pub from: f64,
    pub kind: String,
    pub params: TailParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailParams {
    #[serde(default = "one")]
    pub weight: f64,
    #[serde(default = "one")]
    pub rate: f64,
    #[serde(default = "one")]
    pub power: f64,
}

fn one() -> f64 {
    1.0
}

impl MeasureSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_measure(&self) -> Result<StieltjesMeasure> {
        let mut atoms: Vec<Atom> = self
            .atoms
            .iter()
            .map(|&[location, mass]| Atom { location, mass })
            .collect();
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        let mut pieces = Vec::with_capacity(self.pieces.len() + 1);
        for p in &self.pieces {
            pieces.push(DensityPiece::polynomial(p.interval[0], p.interval[1], p.coeffs.clone())?);
        }
        if let Some(t) = &self.tail {
            if t.kind != "exp_convex" {
                return Err(Error::Spec(format!("unknown tail kind {:?}", t.kind)));
            }
            pieces.push(DensityPiece::exp_convex(t.from, t.params.weight, t.params.rate, t.params.power)?);
        }
        StieltjesMeasure::new(atoms, pieces)
    }

    pub fn to_nu(&self) -> Result<NuFunction> {
        NuFunction::new(self.baseline, self.to_measure()?)
    }

    /// Inverse of [`MeasureSpec::to_nu`] for measures that have a JSON form.
    pub fn from_nu(n: &NuFunction) -> Result<Self> {
        let mut spec = Self::from_measure(n.measure())?;
        spec.baseline = n.baseline();
        Ok(spec)
    }

    pub fn from_measure(m: &StieltjesMeasure) -> Result<Self> {
        let mut spec = Self {
            atoms: m.atoms().iter().map(|a| [a.location, a.mass]).collect(),
            ..Self::default()
        };
        for p in m.pieces() {
            match p.law() {
                DensityLaw::Polynomial(poly) => spec.pieces.push(PieceSpec {
                    interval: [p.lo(), p.hi()],
                    coeffs: poly.coeffs().to_vec(),
                }),
                DensityLaw::ExpConvex { weight, rate, power } if spec.tail.is_none() => {
                    spec.tail = Some(TailSpec {
                        from: p.lo(),
                        kind: "exp_convex".into(),
                        params: TailParams {
                            weight: *weight,
                            rate: *rate,
                            power: *power,
                        },
                    })
                }
                _ => {
                    return Err(Error::Spec(format!(
                        "density piece on [{}, {}] has no JSON form",
                        p.lo(),
                        p.hi()
                    )))
                }
            }
        }
        Ok(spec)
    }
}
