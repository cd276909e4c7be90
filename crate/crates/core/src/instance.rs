//! JSON instance files shared by the command-line tools.
//!
//! ```json
//! {
//!   "id": "demo",
//!   "bounds": [5, 3],
//!   "objective": {"family": "concave-linear", "weights": [1, 2],
//!                 "directions": [[1, 0], [1, 1]], "shape": "sqrt"},
//!   "monotone": true,
//!   "constraint": {"kind": "cardinality", "K": 4}
//! }
//! ```
//!
//! Families: `concave-linear` (weights, directions, concave shape),
//! `nonmonotone-dr` (seed), `custom-linear` (any shape, uncertified).
//! Constraint kinds: `cardinality` (`K`), `knapsack` (`K`, `costs`),
//! `polymatroid` (`rank_oracle`, e.g. `"partition-rank(2,3)"`).

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::continuous::RankSpec;
use crate::decomposition::Epsilon;
use crate::error::{Error, Result};
use crate::lattice_fn::{make_custom_linear, make_nonmonotone_dr, GroundCoordinates, LatticeFunction, Shape};
use crate::reduction::Constraint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub bounds: Vec<u64>,
    pub objective: ObjectiveSpec,
    pub monotone: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<ConstraintSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    ConcaveLinear,
    NonmonotoneDr,
    CustomLinear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveSpec {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintKind {
    Cardinality,
    Knapsack,
    Polymatroid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    pub kind: ConstraintKind,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_oracle: Option<String>,
}

/// A parsed and constructed instance.
#[derive(Debug)]
pub struct Instance {
    pub id: String,
    pub coordinates: GroundCoordinates,
    pub function: LatticeFunction,
    pub constraint: Option<Constraint>,
    pub spec: InstanceSpec,
}

pub fn parse_instance(text: &str) -> Result<InstanceSpec> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn missing(field: &str, family: &str) -> Error {
    Error::Parse(format!("`{field}` is required for {family}"))
}

impl ObjectiveSpec {
    pub fn build(&self, gc: &GroundCoordinates, monotone: bool) -> Result<LatticeFunction> {
        let linear = |family: &str| -> Result<(Vec<f64>, Vec<Vec<u64>>, Shape)> {
            let weights = self.weights.clone().ok_or_else(|| missing("weights", family))?;
            let directions = self
                .directions
                .clone()
                .ok_or_else(|| missing("directions", family))?;
            let shape: Shape = self
                .shape
                .as_deref()
                .ok_or_else(|| missing("shape", family))?
                .parse()?;
            if let Some(c) = directions.iter().find(|c| c.len() != gc.dims()) {
                return Err(Error::DimensionMismatch {
                    expected: gc.dims(),
                    actual: c.len(),
                });
            }
            Ok((weights, directions, shape))
        };
        match self.family {
            Family::ConcaveLinear => {
                let (w, c, shape) = linear("concave-linear")?;
                if !shape.is_concave() {
                    return Err(Error::InvalidArgument(format!(
                        "concave-linear needs a concave shape, got {shape}"
                    )));
                }
                make_custom_linear(w, c, shape, monotone)
            }
            Family::CustomLinear => {
                let (w, c, shape) = linear("custom-linear")?;
                make_custom_linear(w, c, shape, monotone)
            }
            Family::NonmonotoneDr => {
                let seed = self.seed.ok_or_else(|| missing("seed", "nonmonotone-dr"))?;
                Ok(make_nonmonotone_dr(seed, gc)?.with_declared_monotone(monotone))
            }
        }
    }
}

impl ConstraintSpec {
    pub fn build(&self, dims: usize) -> Result<Constraint> {
        let budget = || {
            self.k
                .filter(|k| k.is_finite() && *k >= 0.0)
                .ok_or_else(|| Error::Parse("`K` must be a nonnegative number".into()))
        };
        let c = match self.kind {
            ConstraintKind::Cardinality => {
                let k = budget()?;
                if k.fract() != 0.0 || k < 1.0 || k > u64::MAX as f64 {
                    return Err(Error::Parse(format!(
                        "cardinality `K` must be a positive integer, got {k}"
                    )));
                }
                Constraint::Cardinality(k as u64)
            }
            ConstraintKind::Knapsack => Constraint::Knapsack {
                costs: self.costs.clone().ok_or_else(|| missing("costs", "knapsack"))?,
                budget: budget()?,
            },
            ConstraintKind::Polymatroid => {
                let name = self
                    .rank_oracle
                    .as_deref()
                    .ok_or_else(|| missing("rank_oracle", "polymatroid"))?;
                Constraint::Polymatroid(name.parse::<RankSpec>()?.instantiate(dims)?)
            }
        };
        c.validate(dims)?;
        Ok(c)
    }
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Instance> {
        let coordinates = GroundCoordinates::new(self.bounds.clone())?;
        let function = self.objective.build(&coordinates, self.monotone)?;
        let constraint = self
            .constraint
            .as_ref()
            .map(|c| c.build(coordinates.dims()))
            .transpose()?;
        Ok(Instance {
            id: self.id.clone().unwrap_or_else(|| "instance".to_string()),
            coordinates,
            function,
            constraint,
            spec: self.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance specs always serialize")
    }
}

/// Parses an accuracy parameter written as a decimal (`0.125`) or a
/// fraction (`1/8`) into an exact rational.
pub fn parse_epsilon(text: &str) -> Result<Epsilon> {
    let text = text.trim();
    let bad = || Error::Parse(format!("bad epsilon `{text}`"));
    let eps = if let Some((n, d)) = text.split_once('/') {
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ratio::new(n, d)
    } else {
        let (int, frac) = text.split_once('.').unwrap_or((text, ""));
        if frac.len() > 18 || (int.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
        if !digits(int) || !digits(frac) {
            return Err(bad());
        }
        let denom = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_val: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let numer = int
            .checked_mul(denom)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Ratio::new(numer, denom)
    };
    if *eps.numer() == 0 || eps > Ratio::from_integer(1) {
        return Err(Error::EpsilonOutOfRange(text.to_string()));
    }
    Ok(eps)
}
