//! Floor/residual rounding of a fractional lifted point to a lattice point.
//!
//! With `x = M(y)`, `z = floor(x)` and `v = x - z`, the residual extension
//! `H(v) = E[f(z + R(v))]` dominates `G(y)`. Pipage moves on `v` inside
//! `{v in [0,1]^E : z + v in P}` then reach an integral `v` without lowering
//! `H`: along `e_i - e_j` the extension is convex, along a single `e_i` it is
//! linear, so one endpoint of every move is at least as good as the start.

use super::greedy::FEASIBILITY_TOL;
use super::rank::{members, set_sum, PolymatroidOracle, MAX_RANK_DIMS};
use super::FractionalPoint;
use crate::error::{Error, Result};
use crate::lattice_fn::{LatticeFunction, LatticePoint};
use crate::reduction::ReducedInstance;

const SNAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RoundingState {
    pub x: Vec<f64>,
    pub floor: Vec<u64>,
    pub residual: Vec<f64>,
}

impl RoundingState {
    /// Splits `x` into integer floor and residual in `[0, 1)`. Entries within
    /// `1e-9` of an integer are snapped first.
    pub fn new(x: &[f64]) -> Result<Self> {
        let mut snapped = Vec::with_capacity(x.len());
        for &xi in x {
            if !xi.is_finite() || xi < -SNAP {
                return Err(Error::Infeasible(format!(
                    "coordinate {xi} is not a nonnegative real"
                )));
            }
            let r = xi.round();
            snapped.push(if (xi - r).abs() <= SNAP { r } else { xi });
        }
        let floor: Vec<u64> = snapped.iter().map(|v| v.floor() as u64).collect();
        let residual = snapped.iter().zip(&floor).map(|(v, &z)| v - z as f64).collect();
        Ok(RoundingState {
            x: snapped,
            floor,
            residual,
        })
    }
}

/// `H(v) = E[f(z + R(v))]` by enumeration over the fractional coordinates.
pub fn residual_extension(f: &LatticeFunction, floor: &[u64], residual: &[f64]) -> Result<f64> {
    let cube = ResidualCube::build(f, floor, residual)?;
    Ok(cube.value(residual))
}

/// `f` on the cube `z + {0,1}^F` for the fractional coordinates `F`.
struct ResidualCube {
    coords: Vec<usize>,
    values: Vec<f64>,
}

impl ResidualCube {
    fn build(f: &LatticeFunction, floor: &[u64], residual: &[f64]) -> Result<Self> {
        let coords: Vec<usize> = residual
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(|(i, _)| i)
            .collect();
        if coords.len() > MAX_RANK_DIMS {
            return Err(Error::too_large(
                "fractional coordinates",
                coords.len() as u128,
                MAX_RANK_DIMS as u128,
            ));
        }
        let mut point = floor.to_vec();
        let values = (0..(1u64 << coords.len()))
            .map(|mask| {
                for (k, &i) in coords.iter().enumerate() {
                    point[i] = floor[i] + (mask >> k & 1);
                }
                f.eval(&point)
            })
            .collect();
        Ok(ResidualCube { coords, values })
    }

    fn value(&self, v: &[f64]) -> f64 {
        let mut weights = vec![1.0];
        for &i in &self.coords {
            let p = v[i];
            let len = weights.len();
            for k in 0..len {
                let base = weights[k];
                weights[k] = base * (1.0 - p);
                weights.push(base * p);
            }
        }
        weights.iter().zip(&self.values).map(|(w, f)| w * f).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rounded {
    pub point: LatticePoint,
    pub value: f64,
    pub state: RoundingState,
    /// `H(v)` before any pipage move.
    pub residual_value: f64,
    pub moves: usize,
}

/// Rounds a fractional lifted point with `M(y) in P` to an integral
/// `x in P` inside the box, with `f(x) >= H(v) >= G(y)` up to rounding.
pub fn round(ri: &ReducedInstance<'_>, p: &PolymatroidOracle, y: &FractionalPoint) -> Result<Rounded> {
    if y.len() != ri.len() {
        return Err(Error::DimensionMismatch {
            expected: ri.len(),
            actual: y.len(),
        });
    }
    if y.iter().any(|&v| !(-SNAP..=1.0 + SNAP).contains(&v)) {
        return Err(Error::Infeasible("y leaves the unit box".into()));
    }
    let x = ri.map().apply(y);
    if !p.contains(&x, FEASIBILITY_TOL)? {
        return Err(Error::Infeasible("M(y) violates a rank constraint".into()));
    }
    round_point(ri.function(), p, &x)
}

/// Pipage rounding of a fractional lattice point `x in P`.
pub fn round_point(f: &LatticeFunction, p: &PolymatroidOracle, x: &[f64]) -> Result<Rounded> {
    let n = p.dims();
    if n > MAX_RANK_DIMS {
        return Err(Error::too_large(
            "rank-constraint ground set",
            n as u128,
            MAX_RANK_DIMS as u128,
        ));
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: x.len(),
        });
    }
    let state = RoundingState::new(x)?;
    let z = &state.floor;
    let cube = ResidualCube::build(f, z, &state.residual)?;
    let residual_value = cube.value(&state.residual);
    let sets = 1u64 << n;
    // Residual rank rho(S) - z(S).
    let zf: Vec<f64> = z.iter().map(|&v| v as f64).collect();
    let cap: Vec<f64> = (0..sets).map(|s| p.rank(s) as f64 - set_sum(&zf, s)).collect();

    let mut v = state.residual.clone();
    let mut moves = 0;
    let max_moves = 4 * n * n + 4 * n + 8;
    loop {
        for vi in v.iter_mut() {
            if *vi < SNAP {
                *vi = 0.0;
            } else if *vi > 1.0 - SNAP {
                *vi = 1.0;
            }
        }
        let frac: u64 = (0..n)
            .filter(|&i| v[i] > 0.0 && v[i] < 1.0)
            .fold(0, |m, i| m | 1 << i);
        if frac == 0 {
            break;
        }
        if moves >= max_moves {
            return Err(Error::Infeasible("pipage rounding did not terminate".into()));
        }
        moves += 1;
        let slack = |s: u64| cap[s as usize] - set_sum(&v, s);
        let tight = (1..sets)
            .filter(|&s| s & frac != 0 && slack(s) <= SNAP)
            .min_by_key(|&s| (s.count_ones(), s));
        let (plus, minus) = match tight.map(|t| t & frac) {
            Some(tf) if tf.count_ones() >= 2 => {
                let mut it = members(tf);
                let i = it.next().expect("two members");
                let j = it.next().expect("two members");
                let (bi, bj) = (1u64 << i, 1u64 << j);
                let room = |inside: u64, outside: u64| {
                    (1..sets)
                        .filter(|s| s & inside != 0 && s & outside == 0)
                        .map(slack)
                        .fold(f64::INFINITY, f64::min)
                        .max(0.0)
                };
                let up = (1.0 - v[i]).min(v[j]).min(room(bi, bj));
                let down = v[i].min(1.0 - v[j]).min(room(bj, bi));
                let mut a = v.clone();
                a[i] += up;
                a[j] -= up;
                let mut b = v.clone();
                b[i] -= down;
                b[j] += down;
                (a, b)
            }
            _ => {
                let i = frac.trailing_zeros() as usize;
                let bi = 1u64 << i;
                let up = (1..sets)
                    .filter(|s| s & bi != 0)
                    .map(slack)
                    .fold(1.0 - v[i], f64::min)
                    .max(0.0);
                let mut a = v.clone();
                a[i] += up;
                let mut b = v.clone();
                b[i] = 0.0;
                (a, b)
            }
        };
        let (best, other) = if cube.value(&plus) >= cube.value(&minus) {
            (plus, minus)
        } else {
            (minus, plus)
        };
        // A zero-length best move would stall; take the other endpoint.
        v = if best == v { other } else { best };
    }

    let point = LatticePoint(z.iter().zip(&v).map(|(&zi, &vi)| zi + vi as u64).collect());
    if !p.contains_point(&point)? {
        return Err(Error::Infeasible(format!(
            "rounded point {point} violates a rank constraint"
        )));
    }
    let value = cube.value(&v);
    Ok(Rounded {
        point,
        value,
        state,
        residual_value,
        moves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuous::RankSpec;

    #[test]
    fn state_splits_floor_and_residual() {
        let s = RoundingState::new(&[2.5, 3.0, 0.25, 1.9999999999]).unwrap();
        assert_eq!(s.floor, vec![2, 3, 0, 2]);
        assert_eq!(s.residual, vec![0.5, 0.0, 0.25, 0.0]);
        for ((x, z), v) in s.x.iter().zip(&s.floor).zip(&s.residual) {
            assert_eq!(*z as f64 + v, *x);
        }
        assert!(RoundingState::new(&[-1.0]).is_err());
    }

    #[test]
    fn integral_point_is_unchanged() {
        let f = LatticeFunction::from_fn(2, true, true, |x| (x[0] + x[1]) as f64);
        let p = RankSpec::Cardinality { k: 4, per_item: None }
            .instantiate(2)
            .unwrap();
        let r = round_point(&f, &p, &[1.0, 3.0]).unwrap();
        assert_eq!(r.point, LatticePoint(vec![1, 3]));
        assert_eq!(r.moves, 0);
    }

    #[test]
    fn pair_move_keeps_budget() {
        // Linear objective favoring coordinate 1 under x0 + x1 <= 3.
        let f = LatticeFunction::from_fn(2, true, true, |x| (x[0] + 2 * x[1]) as f64);
        let p = RankSpec::Cardinality { k: 3, per_item: None }
            .instantiate(2)
            .unwrap();
        let r = round_point(&f, &p, &[1.5, 1.5]).unwrap();
        assert_eq!(r.point, LatticePoint(vec![1, 2]));
        assert!(r.value >= r.residual_value);
    }

    #[test]
    fn residual_extension_by_hand() {
        let f = LatticeFunction::from_fn(2, true, true, |x| (x[0] * 10 + x[1]) as f64);
        // z = (1, 0), v = (0.5, 0.25): E = 10 * 1.5 + 0.25
        let h = residual_extension(&f, &[1, 0], &[0.5, 0.25]).unwrap();
        assert!((h - 15.25).abs() < 1e-12);
    }
}
