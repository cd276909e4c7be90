//! Fractional pipeline for polymatroid constraints.
//!
//! The lifted problem `max G(y) s.t. y in [0,1]^E', M(y) in P` is solved
//! approximately with measured continuous greedy, using an exact linear
//! optimizer over the lifted polytope, and the result is rounded back to an
//! integral lattice point through the floor/residual decomposition.

mod greedy;
mod multilinear;
mod rank;
mod rounding;

use std::ops::Deref;

pub use greedy::{
    feasible_scale, lifted_feasible, lmo, measured_continuous_greedy, separate_lifted,
    ContinuousGreedyOptions, ContinuousGreedyRun, FEASIBILITY_TOL,
};
pub use multilinear::{multilinear_exact, multilinear_sample, Estimate, SubsetTable, MAX_EXACT_ELEMENTS};
pub use rank::{Hyperplane, PolymatroidOracle, RankKind, RankSpec, MAX_RANK_DIMS};
pub use rounding::{residual_extension, round, round_point, Rounded, RoundingState};

use crate::error::{Error, Result};
use crate::lattice_fn::{GroundCoordinates, LatticeFunction, LatticePoint};
use crate::reduction::{BuildMode, Constraint, ReducedInstance};

/// A point of `[0,1]^E'`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPoint(pub Vec<f64>);

impl FractionalPoint {
    pub fn new(y: Vec<f64>) -> Result<Self> {
        if y.iter().any(|v| !(-1e-12..=1.0 + 1e-12).contains(v)) {
            return Err(Error::InvalidArgument("fractional point leaves [0, 1]".into()));
        }
        Ok(FractionalPoint(y))
    }

    pub fn zeros(m: usize) -> Self {
        FractionalPoint(vec![0.0; m])
    }

    pub fn indicator(set: &[bool]) -> Self {
        FractionalPoint(set.iter().map(|&s| if s { 1.0 } else { 0.0 }).collect())
    }
}

impl Deref for FractionalPoint {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone)]
pub struct PolymatroidSolution {
    pub y: FractionalPoint,
    pub fractional_value: f64,
    pub point: LatticePoint,
    pub value: f64,
    pub oracle_calls: u64,
}

/// Continuous greedy on the exact lift followed by pipage rounding.
///
/// Bounds are clipped to singleton ranks first; points above them are never
/// feasible.
pub fn maximize_polymatroid(
    f: &LatticeFunction,
    gc: &GroundCoordinates,
    p: &PolymatroidOracle,
    opts: &ContinuousGreedyOptions,
) -> Result<PolymatroidSolution> {
    let start = f.calls();
    let clipped = Constraint::Polymatroid(p.clone()).implied_bounds(gc)?;
    let ri = ReducedInstance::build(f, &clipped, BuildMode::Exact)?;
    let run = measured_continuous_greedy(&ri, p, opts)?;
    let fractional_value = if ri.len() <= MAX_EXACT_ELEMENTS {
        multilinear_exact(&ri, &run.y)?
    } else {
        multilinear_sample(&ri, &run.y, 1000, opts.seed)?.mean
    };
    let rounded = round(&ri, p, &run.y)?;
    Ok(PolymatroidSolution {
        y: run.y,
        fractional_value,
        point: rounded.point,
        value: rounded.value,
        oracle_calls: f.calls() - start,
    })
}
