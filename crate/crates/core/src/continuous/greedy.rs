//! Linear optimization over the lifted polytope and measured continuous greedy.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::multilinear::{sampled_marginals, SubsetTable};
use super::rank::{members, PolymatroidOracle, MAX_RANK_DIMS};
use super::FractionalPoint;
use crate::error::{Error, Result};
use crate::reduction::ReducedInstance;

/// Slack used for polytope membership of floating-point iterates.
pub const FEASIBILITY_TOL: f64 = 1e-9;

fn check_oracle(ri: &ReducedInstance<'_>, p: &PolymatroidOracle) -> Result<()> {
    if p.dims() != ri.coordinates().dims() {
        return Err(Error::DimensionMismatch {
            expected: ri.coordinates().dims(),
            actual: p.dims(),
        });
    }
    if p.dims() > MAX_RANK_DIMS {
        return Err(Error::too_large(
            "rank-constraint ground set",
            p.dims() as u128,
            MAX_RANK_DIMS as u128,
        ));
    }
    Ok(())
}

/// Maximizer of `<w, y>` over `{y in [0,1]^E' : M(y) in P}`.
///
/// In the variables `u_e = a_e y_e` the feasible region is a polymatroid
/// (the rank function composed with the part-to-coordinate map, cut by the
/// box `u_e <= a_e`), so the greedy order by `w_e / a_e` is optimal: each
/// element with positive weight is raised as far as every rank inequality
/// through its coordinate allows.
pub fn lmo(ri: &ReducedInstance<'_>, p: &PolymatroidOracle, w: &[f64]) -> Result<FractionalPoint> {
    check_oracle(ri, p)?;
    if w.len() != ri.len() {
        return Err(Error::DimensionMismatch {
            expected: ri.len(),
            actual: w.len(),
        });
    }
    let n = p.dims();
    let sets = 1u64 << n;
    let mut slack: Vec<f64> = (0..sets).map(|s| p.rank(s) as f64).collect();
    let mut order: Vec<usize> = (0..ri.len()).filter(|&k| w[k] > 0.0).collect();
    let ratio = |k: usize| w[k] / ri.elements()[k].value as f64;
    order.sort_by(|&a, &b| ratio(b).total_cmp(&ratio(a)).then(a.cmp(&b)));
    let mut y = vec![0.0; ri.len()];
    for k in order {
        let e = ri.elements()[k];
        let bit = 1u64 << e.coordinate;
        let room = (1..sets)
            .filter(|s| s & bit != 0)
            .map(|s| slack[s as usize])
            .fold(e.value as f64, f64::min)
            .max(0.0);
        if room <= 0.0 {
            continue;
        }
        y[k] = (room / e.value as f64).min(1.0);
        let used = y[k] * e.value as f64;
        for s in (1..sets).filter(|s| s & bit != 0) {
            slack[s as usize] -= used;
        }
    }
    Ok(FractionalPoint(y))
}

/// Separation over the lifted region `{y in [0,1]^E' : M(y) in P}`.
///
/// Box violations are reported directly; otherwise a rank inequality
/// `<v, x> <= D` violated by `x = M(y)` is pulled back to `<M* v, y> <= D`.
pub fn separate_lifted(
    ri: &ReducedInstance<'_>,
    p: &PolymatroidOracle,
    y: &[f64],
    tol: f64,
) -> Result<Option<(Vec<f64>, f64)>> {
    check_oracle(ri, p)?;
    for (k, &v) in y.iter().enumerate() {
        let mut normal = vec![0.0; y.len()];
        if v < -tol {
            normal[k] = -1.0;
            return Ok(Some((normal, 0.0)));
        }
        if v > 1.0 + tol {
            normal[k] = 1.0;
            return Ok(Some((normal, 1.0)));
        }
    }
    let x = ri.map().apply(y);
    Ok(p.separate(&x, tol)?
        .map(|h| (ri.map().adjoint(&h.normal), h.offset)))
}

/// Whether `M(y)` lies in `P` and `y` in the unit box.
pub fn lifted_feasible(ri: &ReducedInstance<'_>, p: &PolymatroidOracle, y: &[f64], tol: f64) -> Result<bool> {
    Ok(separate_lifted(ri, p, y, tol)?.is_none())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousGreedyOptions {
    pub steps: usize,
    /// Zero selects exact marginals from a subset table.
    pub samples: usize,
    pub seed: u64,
    pub keep_history: bool,
}

impl Default for ContinuousGreedyOptions {
    fn default() -> Self {
        ContinuousGreedyOptions {
            steps: 100,
            samples: 0,
            seed: 0,
            keep_history: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ContinuousGreedyRun {
    pub y: FractionalPoint,
    /// Iterates after each step, when requested.
    pub history: Vec<FractionalPoint>,
    pub oracle_calls: u64,
}

/// Measured continuous greedy over `{y in [0,1]^E' : M(y) in P}`.
///
/// Each of `T` steps weighs element `e` by `w_e = E[g(R(y) + e) - g(R(y))]`,
/// picks `b = lmo(w)` and moves `y_e += (1 - y_e) b_e / T`. The final point
/// is dominated by the average of the `b`s, so it stays feasible.
pub fn measured_continuous_greedy(
    ri: &ReducedInstance<'_>,
    p: &PolymatroidOracle,
    opts: &ContinuousGreedyOptions,
) -> Result<ContinuousGreedyRun> {
    check_oracle(ri, p)?;
    if opts.steps == 0 {
        return Err(Error::InvalidArgument(
            "continuous greedy needs at least one step".into(),
        ));
    }
    let start = ri.function().calls();
    let table = if opts.samples == 0 {
        Some(SubsetTable::build(ri)?)
    } else {
        None
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let m = ri.len();
    let step = 1.0 / opts.steps as f64;
    let mut y = vec![0.0; m];
    let mut history = Vec::new();
    for _ in 0..opts.steps {
        let w = match &table {
            Some(t) => t
                .gradient(&y)
                .iter()
                .zip(&y)
                .map(|(d, ye)| d * (1.0 - ye))
                .collect(),
            None => sampled_marginals(ri, &y, opts.samples, &mut rng),
        };
        let b = lmo(ri, p, &w)?;
        for (ye, be) in y.iter_mut().zip(b.iter()) {
            *ye += step * (1.0 - *ye) * be;
        }
        if opts.keep_history {
            history.push(FractionalPoint(y.clone()));
        }
    }
    Ok(ContinuousGreedyRun {
        y: FractionalPoint(y),
        history,
        oracle_calls: ri.function().calls() - start,
    })
}

/// Largest `lambda <= 1` with `lambda * M(y)` in `P`.
pub fn feasible_scale(ri: &ReducedInstance<'_>, p: &PolymatroidOracle, y: &[f64]) -> Result<f64> {
    check_oracle(ri, p)?;
    let x = ri.map().apply(y);
    let mut lambda: f64 = 1.0;
    for s in 1..(1u64 << p.dims()) {
        let load: f64 = members(s).map(|i| x[i]).sum();
        if load > 0.0 {
            lambda = lambda.min(p.rank(s) as f64 / load);
        }
    }
    Ok(lambda)
}
