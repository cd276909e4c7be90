//! Set-submodular maximization on a lifted instance, plus exact oracles.
//!
//! Solvers keep the lattice image of their current sets and update it one
//! part at a time, so a single `g` evaluation never costs more than one `f`
//! evaluation plus `O(n)` bookkeeping, even for the naive unary lift.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::{unary, Epsilon};
use crate::error::{Error, Result};
use crate::lattice_fn::{GroundCoordinates, LatticeFunction, LatticePoint};
use crate::reduction::{Constraint, LiftedConstraint, ReducedInstance};

pub const DEFAULT_MAX_ELEMENTS: usize = 24;
pub const DEFAULT_MAX_LATTICE_POINTS: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub solution: Vec<bool>,
    pub point: LatticePoint,
    pub value: f64,
    pub oracle_calls: u64,
    pub seed: Option<u64>,
}

struct CallMeter<'a> {
    f: &'a LatticeFunction,
    start: u64,
}

impl<'a> CallMeter<'a> {
    fn start(f: &'a LatticeFunction) -> Self {
        CallMeter { f, start: f.calls() }
    }

    fn elapsed(&self) -> u64 {
        self.f.calls() - self.start
    }
}

fn finish(
    ri: &ReducedInstance<'_>,
    solution: Vec<bool>,
    value: f64,
    meter: CallMeter<'_>,
    seed: Option<u64>,
) -> SolverResult {
    SolverResult {
        point: ri.map_back(&solution),
        solution,
        value,
        oracle_calls: meter.elapsed(),
        seed,
    }
}

enum Rule {
    Deterministic,
    Randomized(Box<ChaCha8Rng>),
}

fn double_greedy(ri: &ReducedInstance<'_>, mut rule: Rule, seed: Option<u64>) -> SolverResult {
    let meter = CallMeter::start(ri.function());
    let m = ri.len();
    let mut lo = vec![0u64; ri.coordinates().dims()];
    let mut hi = ri.coordinates().bounds().to_vec();
    let mut chosen = vec![false; m];
    let mut f_lo = ri.eval_image(&lo);
    if m == 0 {
        return finish(ri, chosen, f_lo, meter, seed);
    }
    let mut f_hi = ri.eval_image(&hi);
    for (k, e) in ri.elements().iter().enumerate() {
        let i = e.coordinate;
        lo[i] += e.value;
        let f_add = ri.eval_image(&lo);
        lo[i] -= e.value;
        hi[i] -= e.value;
        let f_drop = ri.eval_image(&hi);
        hi[i] += e.value;
        let gain_add = f_add - f_lo;
        let gain_drop = f_drop - f_hi;
        let include = match &mut rule {
            Rule::Deterministic => gain_add >= gain_drop,
            Rule::Randomized(rng) => {
                let (a, b) = (gain_add.max(0.0), gain_drop.max(0.0));
                if a + b == 0.0 {
                    true
                } else {
                    rng.gen::<f64>() < a / (a + b)
                }
            }
        };
        if include {
            chosen[k] = true;
            lo[i] += e.value;
            f_lo = f_add;
        } else {
            hi[i] -= e.value;
            f_hi = f_drop;
        }
    }
    debug_assert_eq!(lo, hi);
    finish(ri, chosen, f_lo, meter, seed)
}

/// Randomized double greedy over `E'` in `(i, j)` order. Expected value at
/// least half the unconstrained optimum; uses `2|E'| + 2` evaluations.
pub fn double_greedy_randomized(ri: &ReducedInstance<'_>, seed: u64) -> SolverResult {
    let rng = ChaCha8Rng::seed_from_u64(seed);
    double_greedy(ri, Rule::Randomized(Box::new(rng)), Some(seed))
}

/// Deterministic double greedy: include iff the include gain is at least the
/// exclude gain. At least a third of the unconstrained optimum.
pub fn double_greedy_deterministic(ri: &ReducedInstance<'_>) -> SolverResult {
    double_greedy(ri, Rule::Deterministic, None)
}

fn knapsack_of(lifted: &LiftedConstraint) -> Result<(&[f64], f64)> {
    match lifted {
        LiftedConstraint::Knapsack { weights, budget } => Ok((weights, *budget)),
        LiftedConstraint::Polytope(_) => Err(Error::InvalidArgument(
            "greedy solvers need a knapsack constraint; use the continuous pipeline for polytopes".into(),
        )),
    }
}

fn check_small_weights(weights: &[f64], budget: f64, epsilon: f64) -> Result<()> {
    let cap = epsilon * budget;
    if let Some(&w) = weights.iter().find(|&&w| w > cap * (1.0 + 1e-12)) {
        return Err(Error::WeightsTooLarge { weight: w, cap });
    }
    Ok(())
}

fn greedy_preconditions(
    ri: &ReducedInstance<'_>,
    lifted: &LiftedConstraint,
    epsilon: f64,
) -> Result<(Vec<f64>, f64)> {
    if !ri.function().is_monotone() {
        return Err(Error::NotMonotone);
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::EpsilonOutOfRange(epsilon.to_string()));
    }
    let (weights, budget) = knapsack_of(lifted)?;
    if weights.len() != ri.len() {
        return Err(Error::DimensionMismatch {
            expected: ri.len(),
            actual: weights.len(),
        });
    }
    check_small_weights(weights, budget, epsilon)?;
    Ok((weights.to_vec(), budget))
}

/// Greedy state shared by the knapsack solvers.
struct Packing<'r, 'f> {
    ri: &'r ReducedInstance<'f>,
    weights: &'r [f64],
    budget: f64,
    x: Vec<u64>,
    chosen: Vec<bool>,
    used: f64,
    value: f64,
}

impl<'r, 'f> Packing<'r, 'f> {
    fn new(ri: &'r ReducedInstance<'f>, weights: &'r [f64], budget: f64) -> Self {
        let x = vec![0u64; ri.coordinates().dims()];
        let value = ri.eval_image(&x);
        Packing {
            ri,
            weights,
            budget,
            x,
            chosen: vec![false; ri.len()],
            used: 0.0,
            value,
        }
    }

    fn fits(&self, k: usize) -> bool {
        !self.chosen[k] && self.used + self.weights[k] <= self.budget * (1.0 + 1e-12)
    }

    /// `g(S + e_k)`.
    fn value_with(&mut self, k: usize) -> f64 {
        let e = self.ri.elements()[k];
        self.x[e.coordinate] += e.value;
        let v = self.ri.eval_image(&self.x);
        self.x[e.coordinate] -= e.value;
        v
    }

    fn add(&mut self, k: usize, new_value: f64) {
        let e = self.ri.elements()[k];
        self.x[e.coordinate] += e.value;
        self.chosen[k] = true;
        self.used += self.weights[k];
        self.value = new_value;
    }

    /// Zero-weight elements never consume budget; take them all.
    fn take_free(&mut self) {
        for k in 0..self.weights.len() {
            if self.weights[k] == 0.0 && !self.chosen[k] {
                let v = self.value_with(k);
                if v >= self.value {
                    self.add(k, v);
                }
            }
        }
    }
}

/// Descending-threshold density greedy for a knapsack whose weights are all
/// at most `epsilon` times the budget. Targets `(1 - 1/e - epsilon) OPT`.
///
/// Thresholds start at the best singleton density and shrink by `1 - epsilon/3`
/// down to `(epsilon/3) / |E'|` of it; a final pass adds any remaining element
/// with nonnegative gain that still fits.
pub fn density_greedy(
    ri: &ReducedInstance<'_>,
    lifted: &LiftedConstraint,
    epsilon: f64,
) -> Result<SolverResult> {
    let (weights, budget) = greedy_preconditions(ri, lifted, epsilon)?;
    Ok(threshold_greedy(ri, &weights, budget, epsilon))
}

fn threshold_greedy(ri: &ReducedInstance<'_>, weights: &[f64], budget: f64, epsilon: f64) -> SolverResult {
    let meter = CallMeter::start(ri.function());
    let m = ri.len();
    let mut p = Packing::new(ri, weights, budget);
    p.take_free();
    let mut d_max: f64 = 0.0;
    for (k, &w) in weights.iter().enumerate() {
        if p.fits(k) {
            let gain = p.value_with(k) - p.value;
            d_max = d_max.max(gain / w);
        }
    }
    let step = epsilon / 3.0;
    if d_max > 0.0 {
        let floor = step / m as f64 * d_max;
        let mut theta = d_max;
        while theta >= floor {
            for (k, &w) in weights.iter().enumerate() {
                if !p.fits(k) {
                    continue;
                }
                let v = p.value_with(k);
                if v - p.value >= theta * w {
                    p.add(k, v);
                }
            }
            theta *= 1.0 - step;
        }
    }
    for k in 0..m {
        if p.fits(k) {
            let v = p.value_with(k);
            if v >= p.value {
                p.add(k, v);
            }
        }
    }
    let value = p.value;
    finish(ri, p.chosen, value, meter, None)
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    density: f64,
    index: usize,
    version: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // Max-heap on density; ties go to the lower index.
    fn cmp(&self, other: &Self) -> Ordering {
        self.density
            .total_cmp(&other.density)
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Lazy density greedy: stale upper bounds sit in a max-heap and an element
/// is re-evaluated only when it reaches the top.
pub fn lazy_greedy(
    ri: &ReducedInstance<'_>,
    lifted: &LiftedConstraint,
    epsilon: f64,
) -> Result<SolverResult> {
    let (weights, budget) = greedy_preconditions(ri, lifted, epsilon)?;
    Ok(lazy_density_greedy(ri, &weights, budget))
}

fn lazy_density_greedy(ri: &ReducedInstance<'_>, weights: &[f64], budget: f64) -> SolverResult {
    let meter = CallMeter::start(ri.function());
    let mut p = Packing::new(ri, weights, budget);
    p.take_free();
    let mut version = p.chosen.iter().filter(|&&c| c).count();
    let mut heap = BinaryHeap::with_capacity(ri.len());
    for (k, &w) in weights.iter().enumerate() {
        if p.fits(k) {
            let gain = p.value_with(k) - p.value;
            heap.push(Candidate {
                density: gain / w,
                index: k,
                version,
            });
        }
    }
    while let Some(top) = heap.pop() {
        if !p.fits(top.index) {
            continue;
        }
        if top.version == version {
            let v = p.value_with(top.index);
            if v < p.value {
                continue;
            }
            p.add(top.index, v);
            version += 1;
            continue;
        }
        let v = p.value_with(top.index);
        let fresh = Candidate {
            density: (v - p.value) / weights[top.index],
            index: top.index,
            version,
        };
        match heap.peek() {
            Some(next) if next.density > fresh.density => heap.push(fresh),
            _ => {
                if v >= p.value {
                    p.add(top.index, v);
                    version += 1;
                }
            }
        }
    }
    let value = p.value;
    finish(ri, p.chosen, value, meter, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedyAlgorithm {
    Thresholds,
    Lazy,
}

/// Which lift a cardinality solve used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CardinalityPath {
    /// `K <= 1/eps`: one unit element per copy.
    Copies,
    /// `K > 1/eps`: log-size lift with every part at most `eps K`.
    SmallWeights,
}

/// Monotone maximization under `sum_i x_i <= K`.
///
/// For `K > 1/eps` the bounds are decomposed with parts capped at
/// `floor(eps K)` so the lifted knapsack has small weights; otherwise each
/// coordinate is expanded into `min(B_i, K)` unit copies.
pub fn maximize_cardinality(
    f: &LatticeFunction,
    gc: &GroundCoordinates,
    k: u64,
    epsilon: Epsilon,
    algorithm: GreedyAlgorithm,
) -> Result<(SolverResult, CardinalityPath)> {
    if !f.is_monotone() {
        return Err(Error::NotMonotone);
    }
    let constraint = Constraint::Cardinality(k);
    constraint.validate(gc.dims())?;
    let eps = *epsilon.numer() as f64 / *epsilon.denom() as f64;
    let run = |ri: &ReducedInstance<'_>, lifted: &LiftedConstraint| -> Result<SolverResult> {
        let (weights, budget) = knapsack_of(lifted)?;
        Ok(match algorithm {
            GreedyAlgorithm::Thresholds => threshold_greedy(ri, weights, budget, eps),
            GreedyAlgorithm::Lazy => lazy_density_greedy(ri, weights, budget),
        })
    };
    if epsilon * Ratio::from_integer(k) > Ratio::from_integer(1) {
        if let Some(ri) = ReducedInstance::build_small_weights(f, gc, &constraint, epsilon)? {
            let lifted = ri.lift_constraint(&constraint)?;
            check_small_weights(knapsack_of(&lifted)?.0, k as f64, eps)?;
            return Ok((run(&ri, &lifted)?, CardinalityPath::SmallWeights));
        }
    }
    let clipped = constraint.implied_bounds(gc)?;
    let decompositions = clipped
        .bounds()
        .iter()
        .map(|&b| if b == 0 { Ok(None) } else { unary(b).map(Some) })
        .collect::<Result<Vec<_>>>()?;
    let ri = ReducedInstance::from_decompositions(f, &clipped, decompositions, "naive-copies".into())?;
    let lifted = ri.lift_constraint(&constraint)?;
    Ok((run(&ri, &lifted)?, CardinalityPath::Copies))
}

/// Exact brute force over subsets of `E'`.
#[derive(Debug, Clone, Copy)]
pub struct BruteForce {
    pub max_elements: usize,
    pub max_lattice_points: u128,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce {
            max_elements: DEFAULT_MAX_ELEMENTS,
            max_lattice_points: DEFAULT_MAX_LATTICE_POINTS,
        }
    }
}

impl BruteForce {
    /// Optimum of `g` over all feasible subsets, walking subsets in Gray-code
    /// order so the lattice image changes by one part per step.
    pub fn solve(&self, ri: &ReducedInstance<'_>, lifted: Option<&LiftedConstraint>) -> Result<SolverResult> {
        let m = ri.len();
        if m > self.max_elements || m > 40 {
            return Err(Error::too_large(
                "lifted ground set",
                m as u128,
                self.max_elements as u128,
            ));
        }
        let meter = CallMeter::start(ri.function());
        let mut set = vec![false; m];
        let mut x = vec![0u64; ri.coordinates().dims()];
        let mut best: Option<(f64, Vec<bool>)> = None;
        let weights = match lifted {
            Some(LiftedConstraint::Knapsack { weights, .. }) => Some(weights.as_slice()),
            _ => None,
        };
        let mut used = 0.0f64;
        for step in 0u64..(1u64 << m) {
            if step > 0 {
                let k = step.trailing_zeros() as usize;
                let e = ri.elements()[k];
                set[k] = !set[k];
                if set[k] {
                    x[e.coordinate] += e.value;
                } else {
                    x[e.coordinate] -= e.value;
                }
                if let Some(w) = weights {
                    used = set.iter().zip(w).filter(|(s, _)| **s).map(|(_, w)| w).sum();
                }
            }
            let feasible = match lifted {
                None => true,
                Some(LiftedConstraint::Knapsack { budget, .. }) => used <= budget * (1.0 + 1e-12),
                Some(LiftedConstraint::Polytope(p)) => p.contains_point(&x)?,
            };
            if !feasible {
                continue;
            }
            let v = ri.eval_image(&x);
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, set.clone()));
            }
        }
        let (value, solution) = best.ok_or_else(|| Error::Infeasible("no feasible subset".into()))?;
        Ok(finish(ri, solution, value, meter, None))
    }

    /// Optimum of `f` over every feasible lattice point in the box.
    pub fn solve_lattice(
        &self,
        f: &LatticeFunction,
        gc: &GroundCoordinates,
        constraint: Option<&Constraint>,
    ) -> Result<(LatticePoint, f64)> {
        let size = gc.domain_size();
        if size > self.max_lattice_points {
            return Err(Error::too_large("lattice domain", size, self.max_lattice_points));
        }
        if let Some(c) = constraint {
            c.validate(gc.dims())?;
        }
        let mut best: Option<(LatticePoint, f64)> = None;
        for x in gc.points() {
            if let Some(c) = constraint {
                if !c.admits(&x)? {
                    continue;
                }
            }
            let v = f.eval(&x);
            if best.as_ref().is_none_or(|(_, b)| v > *b) {
                best = Some((x, v));
            }
        }
        best.ok_or_else(|| Error::Infeasible("no feasible lattice point".into()))
    }
}

pub fn brute_force(ri: &ReducedInstance<'_>, lifted: Option<&LiftedConstraint>) -> Result<SolverResult> {
    BruteForce::default().solve(ri, lifted)
}

pub fn brute_force_lattice(
    f: &LatticeFunction,
    gc: &GroundCoordinates,
    constraint: Option<&Constraint>,
) -> Result<(LatticePoint, f64)> {
    BruteForce::default().solve_lattice(f, gc, constraint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_fn::{make_concave_linear, make_nonmonotone_dr, random_concave_linear, Shape};
    use crate::reduction::BuildMode;

    fn gc(b: &[u64]) -> GroundCoordinates {
        GroundCoordinates::new(b.to_vec()).unwrap()
    }

    #[test]
    fn modular_monotone_takes_everything() {
        let f = LatticeFunction::from_fn(2, true, true, |x| (2 * x[0] + 3 * x[1]) as f64);
        let g = gc(&[5, 3]);
        let ri = ReducedInstance::build(&f, &g, BuildMode::Exact).unwrap();
        for r in [double_greedy_deterministic(&ri), double_greedy_randomized(&ri, 3)] {
            assert!(r.solution.iter().all(|&s| s));
            assert_eq!(r.value, 19.0);
            assert_eq!(r.point, LatticePoint(vec![5, 3]));
        }
    }

    #[test]
    fn zero_function() {
        let f = LatticeFunction::from_fn(2, true, true, |_| 0.0);
        let g = gc(&[3, 2]);
        let ri = ReducedInstance::build(&f, &g, BuildMode::Exact).unwrap();
        assert_eq!(double_greedy_randomized(&ri, 1).value, 0.0);
        assert_eq!(double_greedy_deterministic(&ri).value, 0.0);
        assert_eq!(brute_force(&ri, None).unwrap().value, 0.0);
    }

    #[test]
    fn tie_resolves_to_include() {
        // Include and exclude gains are both zero for every element.
        let f = LatticeFunction::from_fn(1, true, true, |_| 1.0);
        let g = gc(&[3]);
        let ri = ReducedInstance::build(&f, &g, BuildMode::Exact).unwrap();
        assert!(double_greedy_deterministic(&ri).solution.iter().all(|&s| s));
        assert!(double_greedy_randomized(&ri, 9).solution.iter().all(|&s| s));
    }

    #[test]
    fn double_greedy_call_budget() {
        let g = gc(&[7, 5, 3]);
        let f = make_nonmonotone_dr(4, &g).unwrap();
        let ri = ReducedInstance::build(&f, &g, BuildMode::Exact).unwrap();
        let r = double_greedy_randomized(&ri, 0);
        assert_eq!(r.oracle_calls, 2 * ri.len() as u64 + 2);
        assert!(r.oracle_calls <= 4 * ri.len() as u64);
        assert_eq!(ri.eval_g(&r.solution), r.value);
    }

    #[test]
    fn randomized_is_deterministic_per_seed() {
        let g = gc(&[6, 6]);
        let f = make_nonmonotone_dr(8, &g).unwrap();
        let ri = ReducedInstance::build(&f, &g, BuildMode::Exact).unwrap();
        let a = double_greedy_randomized(&ri, 42);
        let b = double_greedy_randomized(&ri, 42);
        assert_eq!(a.solution, b.solution);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.oracle_calls, b.oracle_calls);
    }

    #[test]
    fn brute_force_min_cap() {
        let f = make_concave_linear(vec![1.0], vec![vec![1]], Shape::MinCap(2.0)).unwrap();
        let g = gc(&[5]);
        let ri = ReducedInstance::build(&f, &g, BuildMode::Exact).unwrap();
        assert_eq!(brute_force(&ri, None).unwrap().value, 2.0);
        assert_eq!(brute_force_lattice(&f, &g, None).unwrap().1, 2.0);
    }

    #[test]
    fn brute_force_guards() {
        let f = LatticeFunction::from_fn(1, true, true, |_| 0.0);
        let g = gc(&[100]);
        let ri = ReducedInstance::build(&f, &g, BuildMode::NaiveCopies).unwrap();
        assert!(matches!(brute_force(&ri, None), Err(Error::TooLarge { .. })));
        let big = gc(&[1000, 1000, 1000]);
        let f3 = LatticeFunction::from_fn(3, true, true, |_| 0.0);
        assert!(matches!(
            brute_force_lattice(&f3, &big, None),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn greedy_takes_everything_when_budget_allows() {
        let f = random_concave_linear(5, 2, Shape::Sqrt).unwrap();
        let g = gc(&[6, 6]);
        let ri = ReducedInstance::build(&f, &g, BuildMode::Exact).unwrap();
        let lifted = LiftedConstraint::Knapsack {
            weights: ri.elements().iter().map(|e| e.value as f64).collect(),
            budget: 100.0,
        };
        for r in [
            density_greedy(&ri, &lifted, 0.1).unwrap(),
            lazy_greedy(&ri, &lifted, 0.1).unwrap(),
        ] {
            assert!(r.solution.iter().all(|&s| s));
            assert_eq!(r.point, LatticePoint(vec![6, 6]));
        }
    }

    #[test]
    fn greedy_rejects_large_weights_and_nonmonotone() {
        let f = random_concave_linear(5, 2, Shape::Sqrt).unwrap();
        let g = gc(&[6, 6]);
        let ri = ReducedInstance::build(&f, &g, BuildMode::Exact).unwrap();
        let lifted = ri.lift_constraint(&Constraint::Cardinality(5)).unwrap();
        assert!(matches!(
            density_greedy(&ri, &lifted, 0.1),
            Err(Error::WeightsTooLarge { .. })
        ));
        assert!(matches!(
            lazy_greedy(&ri, &lifted, 0.1),
            Err(Error::WeightsTooLarge { .. })
        ));

        let h = make_nonmonotone_dr(1, &g).unwrap();
        let rh = ReducedInstance::build(&h, &g, BuildMode::Exact).unwrap();
        let lifted = rh.lift_constraint(&Constraint::Cardinality(500)).unwrap();
        assert_eq!(density_greedy(&rh, &lifted, 0.5), Err(Error::NotMonotone));
    }

    #[test]
    fn small_budget_uses_copies() {
        let f = random_concave_linear(2, 3, Shape::Log1p).unwrap();
        let g = gc(&[4, 4, 4]);
        let eps = Ratio::new(1, 10);
        let (r, path) = maximize_cardinality(&f, &g, 5, eps, GreedyAlgorithm::Thresholds).unwrap();
        assert_eq!(path, CardinalityPath::Copies);
        assert!(r.point.total() <= 5);
        let opt = brute_force_lattice(&f, &g, Some(&Constraint::Cardinality(5)))
            .unwrap()
            .1;
        assert!(r.value >= (1.0 - (-1f64).exp() - 0.1) * opt);
    }

    #[test]
    fn large_budget_uses_small_weights() {
        let f = random_concave_linear(3, 2, Shape::Sqrt).unwrap();
        let g = gc(&[30, 30]);
        let eps = Ratio::new(1, 10);
        for algo in [GreedyAlgorithm::Thresholds, GreedyAlgorithm::Lazy] {
            let (r, path) = maximize_cardinality(&f, &g, 25, eps, algo).unwrap();
            assert_eq!(path, CardinalityPath::SmallWeights);
            assert!(r.point.total() <= 25);
            let opt = brute_force_lattice(&f, &g, Some(&Constraint::Cardinality(25)))
                .unwrap()
                .1;
            assert!(r.value >= (1.0 - (-1f64).exp() - 0.1) * opt, "{algo:?}");
        }
    }

    #[test]
    fn lazy_matches_reevaluation() {
        let g = gc(&[8, 8]);
        let f = random_concave_linear(11, 2, Shape::Sqrt).unwrap();
        let eps = Ratio::new(1, 4);
        let c = Constraint::Cardinality(9);
        let ri = ReducedInstance::build_small_weights(&f, &g, &c, eps)
            .unwrap()
            .unwrap();
        let lifted = ri.lift_constraint(&c).unwrap();
        let r = lazy_greedy(&ri, &lifted, 0.25).unwrap();
        assert_eq!(ri.eval_g(&r.solution), r.value);
        assert!(lifted.admits_set(&ri, &r.solution).unwrap());
    }
}
