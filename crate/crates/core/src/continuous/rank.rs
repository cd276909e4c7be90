//! Integer polymatroid rank functions and their polytopes.
//!
//! A polymatroid is `{x >= 0 : sum_{i in S} x_i <= rho(S) for all S}` for a
//! monotone submodular `rho` with `rho(empty) = 0`. Sets are bitmasks over the
//! original coordinates, so every exhaustive routine here is limited to
//! [`MAX_RANK_DIMS`] coordinates.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest ground set on which constraints are enumerated.
pub const MAX_RANK_DIMS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankKind {
    /// `rho(S) = min(k, per_item * |S|)`.
    Cardinality { k: u64, per_item: u64 },
    /// `rho(S) = total weight of topics covered by some i in S`.
    WeightedCoverage {
        covers: Vec<Vec<usize>>,
        weights: Vec<u64>,
    },
    /// `rho(S) = sum of caps of blocks met by S`; coordinate `i` is in block
    /// `i mod caps.len()`.
    Partition { caps: Vec<u64> },
    /// Explicit table indexed by bitmask.
    Table(Vec<u64>),
}

/// Parsed form of a built-in rank oracle name, before the ground set is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankSpec {
    Cardinality { k: u64, per_item: Option<u64> },
    WeightedCoverage { topics: usize, seed: u64 },
    Partition { caps: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolymatroidOracle {
    dims: usize,
    kind: RankKind,
}

/// A violated rank inequality: `<chi_S, x> > rho(S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    pub set: u64,
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl PolymatroidOracle {
    pub fn new(dims: usize, kind: RankKind) -> Result<Self> {
        if dims == 0 || dims > 63 {
            return Err(Error::InvalidArgument(format!(
                "rank oracle on {dims} coordinates"
            )));
        }
        match &kind {
            RankKind::WeightedCoverage { covers, weights } => {
                if covers.len() != dims {
                    return Err(Error::DimensionMismatch {
                        expected: dims,
                        actual: covers.len(),
                    });
                }
                if covers.iter().flatten().any(|&t| t >= weights.len()) {
                    return Err(Error::InvalidArgument("coverage topic out of range".into()));
                }
            }
            RankKind::Partition { caps } if caps.is_empty() => {
                return Err(Error::InvalidArgument("partition-rank needs a cap".into()));
            }
            RankKind::Table(values) if values.len() != 1usize << dims => {
                return Err(Error::DimensionMismatch {
                    expected: 1 << dims,
                    actual: values.len(),
                });
            }
            _ => {}
        }
        Ok(PolymatroidOracle { dims, kind })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn kind(&self) -> &RankKind {
        &self.kind
    }

    pub fn rank(&self, set: u64) -> u64 {
        match &self.kind {
            RankKind::Cardinality { k, per_item } => {
                (*k).min(per_item.saturating_mul(set.count_ones() as u64))
            }
            RankKind::WeightedCoverage { covers, weights } => {
                let mut covered = vec![false; weights.len()];
                for i in members(set) {
                    for &t in &covers[i] {
                        covered[t] = true;
                    }
                }
                covered
                    .iter()
                    .zip(weights)
                    .filter(|(c, _)| **c)
                    .map(|(_, w)| w)
                    .sum()
            }
            RankKind::Partition { caps } => {
                let m = caps.len();
                let mut hit = vec![false; m];
                for i in members(set) {
                    hit[i % m] = true;
                }
                hit.iter()
                    .zip(caps)
                    .filter(|(h, _)| **h)
                    .fold(0u64, |acc, (_, c)| acc.saturating_add(*c))
            }
            RankKind::Table(values) => values[set as usize],
        }
    }

    pub fn singleton_rank(&self, i: usize) -> u64 {
        self.rank(1 << i)
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.dims > MAX_RANK_DIMS {
            return Err(Error::too_large(
                "rank-constraint ground set",
                self.dims as u128,
                MAX_RANK_DIMS as u128,
            ));
        }
        Ok(())
    }

    /// `(S, x(S) - rho(S))` for the most violated nonempty `S`.
    pub fn most_violated(&self, x: &[f64]) -> Result<(u64, f64)> {
        self.check_enumerable()?;
        let mut best = (0u64, f64::NEG_INFINITY);
        for set in 1..(1u64 << self.dims) {
            let excess = set_sum(x, set) - self.rank(set) as f64;
            if excess > best.1 {
                best = (set, excess);
            }
        }
        Ok(best)
    }

    /// Membership in the polytope, with `x >= -tol` and rank slack `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        if x.len() != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                actual: x.len(),
            });
        }
        if x.iter().any(|&v| v < -tol) {
            return Ok(false);
        }
        Ok(self.most_violated(x)?.1 <= tol)
    }

    pub fn contains_point(&self, x: &[u64]) -> Result<bool> {
        let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        self.contains(&xf, 0.0)
    }

    /// Separation oracle: `None` when `x` is in the polytope, otherwise a rank
    /// inequality `<v, x> <= D` that `x` violates.
    pub fn separate(&self, x: &[f64], tol: f64) -> Result<Option<Hyperplane>> {
        if let Some(i) = x.iter().position(|&v| v < -tol) {
            let mut normal = vec![0.0; self.dims];
            normal[i] = -1.0;
            return Ok(Some(Hyperplane {
                set: 0,
                normal,
                offset: 0.0,
            }));
        }
        let (set, excess) = self.most_violated(x)?;
        if excess <= tol {
            return Ok(None);
        }
        let normal = (0..self.dims)
            .map(|i| if set >> i & 1 == 1 { 1.0 } else { 0.0 })
            .collect();
        Ok(Some(Hyperplane {
            set,
            normal,
            offset: self.rank(set) as f64,
        }))
    }

    /// Exhaustive check of `rho(empty) = 0`, monotonicity and submodularity.
    pub fn validate(&self) -> Result<std::result::Result<(), String>> {
        self.check_enumerable()?;
        if self.rank(0) != 0 {
            return Ok(Err(format!("rank of the empty set is {}", self.rank(0))));
        }
        let full = 1u64 << self.dims;
        for set in 0..full {
            let r = self.rank(set);
            for i in 0..self.dims {
                if set >> i & 1 == 1 {
                    continue;
                }
                let with_i = self.rank(set | 1 << i);
                if with_i < r {
                    return Ok(Err(format!("rank decreases adding {i} to {set:#b}")));
                }
                for j in (i + 1)..self.dims {
                    if set >> j & 1 == 1 {
                        continue;
                    }
                    let lhs = with_i + self.rank(set | 1 << j);
                    let rhs = r + self.rank(set | 1 << i | 1 << j);
                    if lhs < rhs {
                        return Ok(Err(format!("submodularity fails at {set:#b} with {i}, {j}")));
                    }
                }
            }
        }
        Ok(Ok(()))
    }

    /// Random polymatroid on `dims` coordinates: a weighted coverage function
    /// truncated at a random budget, stored as a table.
    pub fn random(dims: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let topics = dims + 2;
        let cov = coverage(dims, topics, &mut rng);
        let budget = rng.gen_range(1..=(2 * topics as u64));
        let base = PolymatroidOracle::new(dims, cov)?;
        let values = (0..(1u64 << dims)).map(|s| base.rank(s).min(budget)).collect();
        PolymatroidOracle::new(dims, RankKind::Table(values))
    }
}

fn coverage(dims: usize, topics: usize, rng: &mut ChaCha8Rng) -> RankKind {
    let weights = (0..topics).map(|_| rng.gen_range(1..=3)).collect();
    let covers = (0..dims)
        .map(|_| loop {
            let c: Vec<usize> = (0..topics).filter(|_| rng.gen_bool(0.5)).collect();
            if !c.is_empty() {
                break c;
            }
        })
        .collect();
    RankKind::WeightedCoverage { covers, weights }
}

impl RankSpec {
    pub fn instantiate(&self, dims: usize) -> Result<PolymatroidOracle> {
        let kind = match self {
            RankSpec::Cardinality { k, per_item } => RankKind::Cardinality {
                k: *k,
                per_item: per_item.unwrap_or(*k),
            },
            RankSpec::WeightedCoverage { topics, seed } => {
                if *topics == 0 || *topics > 64 {
                    return Err(Error::InvalidArgument(format!(
                        "weighted-coverage needs 1..=64 topics, got {topics}"
                    )));
                }
                coverage(dims, *topics, &mut ChaCha8Rng::seed_from_u64(*seed))
            }
            RankSpec::Partition { caps } => RankKind::Partition { caps: caps.clone() },
        };
        PolymatroidOracle::new(dims, kind)
    }
}

impl fmt::Display for RankSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankSpec::Cardinality { k, per_item: None } => write!(f, "cardinality-rank({k})"),
            RankSpec::Cardinality { k, per_item: Some(u) } => write!(f, "cardinality-rank({k},{u})"),
            RankSpec::WeightedCoverage { topics, seed } => {
                write!(f, "weighted-coverage({topics},{seed})")
            }
            RankSpec::Partition { caps } => {
                let caps: Vec<String> = caps.iter().map(u64::to_string).collect();
                write!(f, "partition-rank({})", caps.join(","))
            }
        }
    }
}

impl FromStr for RankSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s
            .find('(')
            .ok_or_else(|| Error::Parse(format!("rank oracle `{s}` needs parameters")))?;
        let name = s[..open].trim();
        let body = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("rank oracle `{s}` is missing `)`")))?;
        let args = body
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad rank oracle argument `{}`", a.trim())))
            })
            .collect::<Result<Vec<u64>>>()?;
        match (name, args.as_slice()) {
            ("cardinality-rank", [k]) => Ok(RankSpec::Cardinality {
                k: *k,
                per_item: None,
            }),
            ("cardinality-rank", [k, u]) => Ok(RankSpec::Cardinality {
                k: *k,
                per_item: Some(*u),
            }),
            ("weighted-coverage", [topics, seed]) => Ok(RankSpec::WeightedCoverage {
                topics: usize::try_from(*topics).map_err(|_| Error::Parse("topic count overflows".into()))?,
                seed: *seed,
            }),
            ("partition-rank", caps) if !caps.is_empty() => Ok(RankSpec::Partition { caps: caps.to_vec() }),
            _ => Err(Error::Parse(format!("unknown rank oracle `{s}`"))),
        }
    }
}

pub(crate) fn members(set: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| set >> i & 1 == 1)
}

pub(crate) fn set_sum(x: &[f64], set: u64) -> f64 {
    members(set).take_while(|&i| i < x.len()).map(|i| x[i]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in [
            "cardinality-rank(3)",
            "cardinality-rank(4,2)",
            "weighted-coverage(5,7)",
            "partition-rank(2,1,3)",
        ] {
            let spec: RankSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        for bad in [
            "",
            "cardinality-rank",
            "cardinality-rank()",
            "foo(1)",
            "partition-rank(1,",
            "cardinality-rank(1,2,3)",
            "cardinality-rank(-1)",
        ] {
            assert!(bad.parse::<RankSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn builtins_are_polymatroids() {
        let specs = [
            "cardinality-rank(3)",
            "cardinality-rank(5,2)",
            "weighted-coverage(6,11)",
            "partition-rank(2,3)",
        ];
        for s in specs {
            let p = s.parse::<RankSpec>().unwrap().instantiate(5).unwrap();
            assert_eq!(p.validate().unwrap(), Ok(()), "{s}");
        }
        for seed in 0..20 {
            let p = PolymatroidOracle::random(4, seed).unwrap();
            assert_eq!(p.validate().unwrap(), Ok(()));
        }
    }

    #[test]
    fn cardinality_rank_is_a_budget() {
        let p = RankSpec::Cardinality { k: 3, per_item: None }
            .instantiate(3)
            .unwrap();
        assert!(p.contains_point(&[1, 1, 1]).unwrap());
        assert!(p.contains_point(&[3, 0, 0]).unwrap());
        assert!(!p.contains_point(&[2, 2, 0]).unwrap());
    }

    #[test]
    fn validate_rejects_non_submodular_table() {
        // rho = |S|^2 on two elements is supermodular.
        let p = PolymatroidOracle::new(2, RankKind::Table(vec![0, 1, 1, 4])).unwrap();
        assert!(p.validate().unwrap().is_err());
        let p = PolymatroidOracle::new(2, RankKind::Table(vec![1, 1, 1, 1])).unwrap();
        assert!(p.validate().unwrap().is_err());
        let p = PolymatroidOracle::new(2, RankKind::Table(vec![0, 2, 1, 1])).unwrap();
        assert!(p.validate().unwrap().is_err());
    }

    #[test]
    fn separation_returns_violated_inequality() {
        let p = RankSpec::Partition { caps: vec![2, 1] }.instantiate(4).unwrap();
        // Block 0 = {0, 2}, block 1 = {1, 3}.
        assert!(p.separate(&[1.0, 0.5, 1.0, 0.5], 1e-12).unwrap().is_none());
        let h = p.separate(&[1.5, 0.0, 1.0, 0.0], 1e-12).unwrap().unwrap();
        let lhs: f64 = h
            .normal
            .iter()
            .zip([1.5, 0.0, 1.0, 0.0])
            .map(|(a, b)| a * b)
            .sum();
        assert!(lhs > h.offset);
        let h = p.separate(&[-0.5, 0.0, 0.0, 0.0], 1e-12).unwrap().unwrap();
        assert_eq!(h.normal[0], -1.0);
    }

    #[test]
    fn enumeration_guard() {
        let p = RankSpec::Cardinality { k: 1, per_item: None }
            .instantiate(20)
            .unwrap();
        assert!(matches!(p.validate(), Err(Error::TooLarge { .. })));
        assert_eq!(p.rank(0b101), 1);
    }
}
