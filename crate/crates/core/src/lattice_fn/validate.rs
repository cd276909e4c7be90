//! Exhaustive property checks over a whole (small) box.
//!
//! All checks tabulate `f` once over the domain and then test the local form
//! of each property: on a product of chains, diminishing returns holds iff
//! `f(x + e_i) - f(x) >= f(x + e_j + e_i) - f(x + e_j)` for all `x, i, j`, and
//! lattice submodularity holds iff the same inequality holds for `i != j`.

use std::fmt;

use super::{tolerance, GroundCoordinates, LatticeFunction, LatticePoint};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_POINTS: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Counterexample {
    /// `f(x + e_i) - f(x) < f(y + e_i) - f(y)` with `x <= y`.
    DiminishingReturns {
        x: LatticePoint,
        y: LatticePoint,
        coordinate: usize,
        gap: f64,
    },
    /// `f(x) + f(y) < f(x v y) + f(x ^ y)`.
    LatticeSubmodular {
        x: LatticePoint,
        y: LatticePoint,
        gap: f64,
    },
    /// `f(x + e_i) < f(x)`.
    Monotone {
        x: LatticePoint,
        coordinate: usize,
        gap: f64,
    },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::DiminishingReturns {
                x,
                y,
                coordinate,
                gap,
            } => write!(
                f,
                "x={x} y={y} i={} (marginal at y exceeds marginal at x by {gap:e})",
                coordinate + 1
            ),
            Counterexample::LatticeSubmodular { x, y, gap } => {
                write!(f, "x={x} y={y} (join+meet exceeds by {gap:e})")
            }
            Counterexample::Monotone { x, coordinate, gap } => {
                write!(f, "x={x} i={} (decrease of {gap:e})", coordinate + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
    pub tolerance: f64,
    pub points: u128,
}

impl Validation {
    fn from(counterexample: Option<Counterexample>, tolerance: f64, points: u128) -> Self {
        Validation {
            passed: counterexample.is_none(),
            counterexample,
            tolerance,
            points,
        }
    }
}

/// Exhaustive validator with a configurable domain-size guard.
#[derive(Debug, Clone, Copy)]
pub struct Validator {
    pub max_points: u128,
}

impl Default for Validator {
    fn default() -> Self {
        Validator {
            max_points: DEFAULT_MAX_POINTS,
        }
    }
}

struct Table<'a> {
    gc: &'a GroundCoordinates,
    values: Vec<f64>,
    strides: Vec<usize>,
    tol: f64,
}

impl<'a> Table<'a> {
    fn build(f: &LatticeFunction, gc: &'a GroundCoordinates, max_points: u128) -> Result<Self> {
        if f.dims() != gc.dims() {
            return Err(Error::DimensionMismatch {
                expected: gc.dims(),
                actual: f.dims(),
            });
        }
        let size = gc.domain_size();
        if size > max_points {
            return Err(Error::too_large("lattice domain", size, max_points));
        }
        let values: Vec<f64> = gc.points().map(|x| f.eval(&x)).collect();
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        Ok(Table {
            gc,
            tol: tolerance(f.is_exact(), hi - lo),
            strides: gc.strides(),
            values,
        })
    }

    fn len(&self) -> usize {
        self.values.len()
    }

    /// Marginal `f(x + e_i) - f(x)` at table index `idx`, if `x_i < B_i`.
    fn marginal(&self, idx: usize, x: &LatticePoint, i: usize) -> Option<f64> {
        (x[i] < self.gc.bounds()[i]).then(|| self.values[idx + self.strides[i]] - self.values[idx])
    }
}

impl Validator {
    pub fn with_max_points(max_points: u128) -> Self {
        Validator { max_points }
    }

    pub fn check_dr(&self, f: &LatticeFunction, gc: &GroundCoordinates) -> Result<Validation> {
        let t = Table::build(f, gc, self.max_points)?;
        let n = gc.dims();
        for idx in 0..t.len() {
            let x = gc.point_at(idx);
            for j in 0..n {
                if x[j] >= gc.bounds()[j] {
                    continue;
                }
                let y = x.increment(j);
                let y_idx = idx + t.strides[j];
                for i in 0..n {
                    let (Some(dx), Some(dy)) = (t.marginal(idx, &x, i), t.marginal(y_idx, &y, i)) else {
                        continue;
                    };
                    if dx < dy - t.tol {
                        let c = Counterexample::DiminishingReturns {
                            x,
                            y,
                            coordinate: i,
                            gap: dy - dx,
                        };
                        return Ok(Validation::from(Some(c), t.tol, t.len() as u128));
                    }
                }
            }
        }
        Ok(Validation::from(None, t.tol, t.len() as u128))
    }

    pub fn check_lattice_submodular(
        &self,
        f: &LatticeFunction,
        gc: &GroundCoordinates,
    ) -> Result<Validation> {
        let t = Table::build(f, gc, self.max_points)?;
        let n = gc.dims();
        for idx in 0..t.len() {
            let x = gc.point_at(idx);
            for i in 0..n {
                for j in (i + 1)..n {
                    if x[i] >= gc.bounds()[i] || x[j] >= gc.bounds()[j] {
                        continue;
                    }
                    let (si, sj) = (t.strides[i], t.strides[j]);
                    let lhs = t.values[idx + si] + t.values[idx + sj];
                    let rhs = t.values[idx] + t.values[idx + si + sj];
                    if lhs < rhs - t.tol {
                        let c = Counterexample::LatticeSubmodular {
                            x: x.increment(i),
                            y: x.increment(j),
                            gap: rhs - lhs,
                        };
                        return Ok(Validation::from(Some(c), t.tol, t.len() as u128));
                    }
                }
            }
        }
        Ok(Validation::from(None, t.tol, t.len() as u128))
    }

    pub fn check_monotone(&self, f: &LatticeFunction, gc: &GroundCoordinates) -> Result<Validation> {
        let t = Table::build(f, gc, self.max_points)?;
        for idx in 0..t.len() {
            let x = gc.point_at(idx);
            for i in 0..gc.dims() {
                if let Some(d) = t.marginal(idx, &x, i) {
                    if d < -t.tol {
                        let c = Counterexample::Monotone {
                            x,
                            coordinate: i,
                            gap: -d,
                        };
                        return Ok(Validation::from(Some(c), t.tol, t.len() as u128));
                    }
                }
            }
        }
        Ok(Validation::from(None, t.tol, t.len() as u128))
    }
}

pub fn check_dr(f: &LatticeFunction, gc: &GroundCoordinates) -> Result<Validation> {
    Validator::default().check_dr(f, gc)
}

pub fn check_lattice_submodular(f: &LatticeFunction, gc: &GroundCoordinates) -> Result<Validation> {
    Validator::default().check_lattice_submodular(f, gc)
}

pub fn check_monotone(f: &LatticeFunction, gc: &GroundCoordinates) -> Result<Validation> {
    Validator::default().check_monotone(f, gc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_fn::{make_concave_linear, Shape};

    fn gc(b: &[u64]) -> GroundCoordinates {
        GroundCoordinates::new(b.to_vec()).unwrap()
    }

    #[test]
    fn min_cap_is_dr() {
        let f = LatticeFunction::from_fn(1, true, true, |x| (x[0].min(2)) as f64);
        let v = check_dr(&f, &gc(&[5])).unwrap();
        assert!(v.passed);
        assert_eq!(v.tolerance, 0.0);
    }

    #[test]
    fn square_is_not_dr() {
        let f = LatticeFunction::from_fn(1, true, true, |x| (x[0] * x[0]) as f64);
        let v = check_dr(&f, &gc(&[3])).unwrap();
        assert!(!v.passed);
        match v.counterexample.unwrap() {
            Counterexample::DiminishingReturns { x, y, coordinate, .. } => {
                assert_eq!(x, LatticePoint(vec![0]));
                assert_eq!(y, LatticePoint(vec![1]));
                assert_eq!(coordinate, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn product_is_not_lattice_submodular() {
        let f = LatticeFunction::from_fn(2, true, true, |x| (x[0] * x[1]) as f64);
        let v = check_lattice_submodular(&f, &gc(&[2, 2])).unwrap();
        assert!(!v.passed);
    }

    #[test]
    fn separable_concave_is_lattice_submodular() {
        let f = LatticeFunction::from_fn(3, true, false, |x| x.iter().map(|&v| (v as f64).sqrt()).sum());
        assert!(check_lattice_submodular(&f, &gc(&[3, 2, 4])).unwrap().passed);
        assert!(check_dr(&f, &gc(&[3, 2, 4])).unwrap().passed);
    }

    #[test]
    fn lattice_submodular_but_not_dr() {
        // Convex in a single coordinate: no pairs, so lattice submodular trivially.
        let f = LatticeFunction::from_fn(1, true, true, |x| (x[0] * x[0]) as f64);
        assert!(check_lattice_submodular(&f, &gc(&[3])).unwrap().passed);
        assert!(!check_dr(&f, &gc(&[3])).unwrap().passed);
    }

    #[test]
    fn domain_guard() {
        let f = LatticeFunction::from_fn(2, true, true, |_| 0.0);
        let v = Validator::with_max_points(10).check_dr(&f, &gc(&[3, 3]));
        assert!(matches!(v, Err(Error::TooLarge { .. })));
    }

    #[test]
    fn monotone_check_finds_witness() {
        let f = LatticeFunction::from_fn(1, false, true, |x| if x[0] == 2 { 0.0 } else { 1.0 });
        let v = check_monotone(&f, &gc(&[3])).unwrap();
        assert_eq!(
            v.counterexample,
            Some(Counterexample::Monotone {
                x: LatticePoint(vec![1]),
                coordinate: 0,
                gap: 1.0
            })
        );
    }

    #[test]
    fn validator_counts_one_call_per_point() {
        let f = make_concave_linear(vec![1.0], vec![vec![1, 1]], Shape::Sqrt).unwrap();
        check_dr(&f, &gc(&[3, 4])).unwrap();
        assert_eq!(f.calls(), 20);
    }
}
