//! Lift of a lattice instance `(f, B)` to a set function on `E'`.
//!
//! Each coordinate `i` with `B_i >= 1` contributes one element per part
//! `a_{i,j}` of a decomposition of `B_i`. A subset `S` of `E'` maps to the
//! lattice point `M(chi_S)` with `x_i = sum_{(i,j) in S} a_{i,j}`, and
//! `g(S) = f(M(chi_S))`. When `f` is DR-submodular, `g` is submodular, and
//! completeness of the decompositions makes every lattice point reachable.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_rational::Ratio;

use crate::continuous::PolymatroidOracle;
use crate::decomposition::{decompose, decompose_refined, refine_with_cap, unary, Decomposition, Epsilon};
use crate::error::{Error, Result};
use crate::lattice_fn::{GroundCoordinates, LatticeFunction, LatticePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMode {
    Exact,
    Refined(Epsilon),
    NaiveCopies,
}

impl BuildMode {
    pub fn label(&self) -> String {
        match self {
            BuildMode::Exact => "exact-log".to_string(),
            BuildMode::Refined(e) => format!("refined-log({e})"),
            BuildMode::NaiveCopies => "naive-copies".to_string(),
        }
    }
}

/// Constraint on the lattice side.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    /// `sum_i x_i <= K`.
    Cardinality(u64),
    /// `sum_i c_i x_i <= K`.
    Knapsack { costs: Vec<f64>, budget: f64 },
    /// `x` in the polymatroid of a rank function.
    Polymatroid(PolymatroidOracle),
}

impl Constraint {
    /// Whether the lattice point satisfies the constraint.
    pub fn admits(&self, x: &[u64]) -> Result<bool> {
        match self {
            Constraint::Cardinality(k) => Ok(x.iter().sum::<u64>() <= *k),
            Constraint::Knapsack { costs, budget } => {
                check_len(costs.len(), x.len())?;
                let used: f64 = costs.iter().zip(x).map(|(c, &v)| c * v as f64).sum();
                Ok(used <= *budget * (1.0 + 1e-12))
            }
            Constraint::Polymatroid(p) => p.contains_point(x),
        }
    }

    /// Bounds no feasible point can exceed, intersected with `gc`.
    pub fn implied_bounds(&self, gc: &GroundCoordinates) -> Result<GroundCoordinates> {
        let bounds = match self {
            Constraint::Cardinality(k) => gc.bounds().iter().map(|&b| b.min(*k)).collect(),
            Constraint::Knapsack { costs, budget } => {
                check_len(costs.len(), gc.dims())?;
                gc.bounds()
                    .iter()
                    .zip(costs)
                    .map(|(&b, &c)| {
                        if c > 0.0 {
                            b.min((budget / c * (1.0 + 1e-12)).floor().max(0.0) as u64)
                        } else {
                            b
                        }
                    })
                    .collect()
            }
            Constraint::Polymatroid(p) => {
                check_len(p.dims(), gc.dims())?;
                gc.bounds()
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| b.min(p.singleton_rank(i)))
                    .collect()
            }
        };
        GroundCoordinates::with_labels(gc.labels().to_vec(), bounds)
    }

    pub fn validate(&self, dims: usize) -> Result<()> {
        match self {
            Constraint::Cardinality(0) => Err(Error::InvalidArgument(
                "cardinality budget must be at least 1".into(),
            )),
            Constraint::Cardinality(_) => Ok(()),
            Constraint::Knapsack { costs, budget } => {
                check_len(costs.len(), dims)?;
                if costs.iter().any(|c| !c.is_finite() || *c < 0.0) {
                    return Err(Error::InvalidArgument(
                        "knapsack costs must be nonnegative".into(),
                    ));
                }
                if !budget.is_finite() || *budget < 0.0 {
                    return Err(Error::InvalidArgument(
                        "knapsack budget must be nonnegative".into(),
                    ));
                }
                Ok(())
            }
            Constraint::Polymatroid(p) => check_len(p.dims(), dims),
        }
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Constraint translated onto `E'`.
#[derive(Debug, Clone, PartialEq)]
pub enum LiftedConstraint {
    Knapsack {
        weights: Vec<f64>,
        budget: f64,
    },
    /// `M(y)` must lie in the polytope.
    Polytope(PolymatroidOracle),
}

impl LiftedConstraint {
    pub fn admits_set(&self, ri: &ReducedInstance<'_>, set: &[bool]) -> Result<bool> {
        match self {
            LiftedConstraint::Knapsack { weights, budget } => {
                let used: f64 = weights.iter().zip(set).filter(|(_, &s)| s).map(|(w, _)| w).sum();
                Ok(used <= budget * (1.0 + 1e-12))
            }
            LiftedConstraint::Polytope(p) => p.contains_point(&ri.map_back(set)),
        }
    }

    /// `max_e w_e / budget` for knapsacks.
    pub fn max_weight_fraction(&self) -> Option<f64> {
        match self {
            LiftedConstraint::Knapsack { weights, budget } => {
                let w = weights.iter().copied().fold(0.0, f64::max);
                Some(if *budget > 0.0 { w / budget } else { f64::INFINITY })
            }
            LiftedConstraint::Polytope(_) => None,
        }
    }
}

/// One element `(i, j)` of the lifted ground set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftedElement {
    pub coordinate: usize,
    pub part: usize,
    pub value: u64,
}

/// `M: R^{E'} -> R^E`, `x_i = sum_j y_{i,j} a_{i,j}`, and its adjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    dims: usize,
    elements: Vec<LiftedElement>,
}

impl LinearMap {
    pub fn input_len(&self) -> usize {
        self.elements.len()
    }

    pub fn output_len(&self) -> usize {
        self.dims
    }

    pub fn apply_set(&self, set: &[bool]) -> LatticePoint {
        debug_assert_eq!(set.len(), self.elements.len());
        let mut x = vec![0u64; self.dims];
        for (e, _) in self.elements.iter().zip(set).filter(|(_, &s)| s) {
            x[e.coordinate] += e.value;
        }
        LatticePoint(x)
    }

    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.elements.len());
        let mut x = vec![0.0; self.dims];
        for (e, &v) in self.elements.iter().zip(y) {
            x[e.coordinate] += v * e.value as f64;
        }
        x
    }

    /// `(M* v)_{i,j} = a_{i,j} v_i`.
    pub fn adjoint(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.dims);
        self.elements
            .iter()
            .map(|e| e.value as f64 * v[e.coordinate])
            .collect()
    }
}

#[derive(Debug, Default)]
struct ImageCache {
    values: Mutex<HashMap<Vec<u64>, f64>>,
    hits: AtomicU64,
}

/// Lifted instance. Immutable after construction; `g` is evaluated lazily.
#[derive(Debug)]
pub struct ReducedInstance<'f> {
    f: &'f LatticeFunction,
    gc: GroundCoordinates,
    decompositions: Vec<Option<Decomposition>>,
    map: LinearMap,
    mode: String,
    cache: Option<ImageCache>,
}

impl<'f> ReducedInstance<'f> {
    /// Decomposes every nonzero bound according to `mode`. Coordinates with
    /// `B_i = 0` contribute no elements.
    pub fn build(f: &'f LatticeFunction, gc: &GroundCoordinates, mode: BuildMode) -> Result<Self> {
        let decompositions = gc
            .bounds()
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                if b == 0 {
                    log::warn!("dropping coordinate {} with zero bound", gc.labels()[i]);
                    return Ok(None);
                }
                match mode {
                    BuildMode::Exact => decompose(b),
                    BuildMode::Refined(eps) => decompose_refined(b, eps),
                    BuildMode::NaiveCopies => unary(b),
                }
                .map(Some)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_decompositions(f, gc, decompositions, mode.label())
    }

    /// Lift for a knapsack-type constraint with every lifted weight at most
    /// `epsilon` times the budget.
    ///
    /// Bounds are first clipped to what the constraint allows, then each
    /// coordinate is decomposed with parts capped at `floor(eps K / c_i)`.
    /// Returns `Ok(None)` when some coordinate with positive cost needs a cap
    /// below one, i.e. the budget is too small for the small-weights regime.
    pub fn build_small_weights(
        f: &'f LatticeFunction,
        gc: &GroundCoordinates,
        constraint: &Constraint,
        epsilon: Epsilon,
    ) -> Result<Option<Self>> {
        constraint.validate(gc.dims())?;
        let clipped = constraint.implied_bounds(gc)?;
        let (costs, budget): (Vec<f64>, f64) = match constraint {
            Constraint::Cardinality(k) => (vec![1.0; gc.dims()], *k as f64),
            Constraint::Knapsack { costs, budget } => (costs.clone(), *budget),
            Constraint::Polymatroid(_) => {
                return Err(Error::InvalidArgument(
                    "small-weight lifts apply to cardinality and knapsack constraints".into(),
                ))
            }
        };
        let mut decompositions = Vec::with_capacity(gc.dims());
        for (&b, &c) in clipped.bounds().iter().zip(&costs) {
            if b == 0 {
                decompositions.push(None);
                continue;
            }
            let base = decompose(b)?;
            if c == 0.0 {
                decompositions.push(Some(base));
                continue;
            }
            let cap = match constraint {
                Constraint::Cardinality(k) => (epsilon * Ratio::from_integer(*k)).floor().to_integer(),
                _ => {
                    let e = *epsilon.numer() as f64 / *epsilon.denom() as f64;
                    (e * budget / c * (1.0 + 1e-12)).floor() as u64
                }
            };
            if cap == 0 {
                return Ok(None);
            }
            decompositions.push(Some(refine_with_cap(base, cap)?));
        }
        let label = BuildMode::Refined(epsilon).label();
        Self::from_decompositions(f, &clipped, decompositions, label).map(Some)
    }

    pub fn from_decompositions(
        f: &'f LatticeFunction,
        gc: &GroundCoordinates,
        decompositions: Vec<Option<Decomposition>>,
        mode: String,
    ) -> Result<Self> {
        if f.dims() != gc.dims() {
            return Err(Error::DimensionMismatch {
                expected: gc.dims(),
                actual: f.dims(),
            });
        }
        check_len(gc.dims(), decompositions.len())?;
        let mut elements = Vec::new();
        for (i, (d, &b)) in decompositions.iter().zip(gc.bounds()).enumerate() {
            match d {
                Some(d) if d.target() == b => {
                    elements.extend(d.parts().iter().enumerate().map(|(j, &a)| LiftedElement {
                        coordinate: i,
                        part: j,
                        value: a,
                    }))
                }
                None if b == 0 => {}
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "decomposition of coordinate {i} does not match bound {b}"
                    )))
                }
            }
        }
        Ok(ReducedInstance {
            f,
            gc: gc.clone(),
            decompositions,
            map: LinearMap {
                dims: gc.dims(),
                elements,
            },
            mode,
            cache: None,
        })
    }

    /// Memoize `g` by lattice image; hits do not touch `f`'s counter.
    pub fn with_cache(mut self) -> Self {
        self.cache = Some(ImageCache::default());
        self
    }

    pub fn function(&self) -> &'f LatticeFunction {
        self.f
    }

    pub fn coordinates(&self) -> &GroundCoordinates {
        &self.gc
    }

    pub fn decompositions(&self) -> &[Option<Decomposition>] {
        &self.decompositions
    }

    pub fn elements(&self) -> &[LiftedElement] {
        &self.map.elements
    }

    pub fn len(&self) -> usize {
        self.map.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.elements.is_empty()
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn mode(&self) -> &str {
        &self.mode
    }

    pub fn cache_hits(&self) -> u64 {
        self.cache.as_ref().map_or(0, |c| c.hits.load(Ordering::Relaxed))
    }

    /// `g(S) = f(M(chi_S))`.
    pub fn eval_g(&self, set: &[bool]) -> f64 {
        self.eval_image(&self.map.apply_set(set))
    }

    /// `f(x)` for a lattice image, honoring the cache.
    pub fn eval_image(&self, x: &[u64]) -> f64 {
        let Some(cache) = &self.cache else {
            return self.f.eval(x);
        };
        if let Some(&v) = cache.values.lock().expect("cache poisoned").get(x) {
            cache.hits.fetch_add(1, Ordering::Relaxed);
            return v;
        }
        let v = self.f.eval(x);
        cache.values.lock().expect("cache poisoned").insert(x.to_vec(), v);
        v
    }

    pub fn map_back(&self, set: &[bool]) -> LatticePoint {
        self.map.apply_set(set)
    }

    pub fn map_back_fractional(&self, y: &[f64]) -> Vec<f64> {
        self.map.apply(y)
    }

    /// A subset of `E'` whose image is exactly `x`.
    pub fn lift_point(&self, x: &[u64]) -> Result<Vec<bool>> {
        if !self.gc.contains(x) {
            return Err(Error::Infeasible(format!(
                "point outside the box {:?}",
                self.gc.bounds()
            )));
        }
        let mut set = vec![false; self.len()];
        let mut offset = 0;
        for (d, &xi) in self.decompositions.iter().zip(x) {
            if let Some(d) = d {
                for idx in d.subset_for(xi)? {
                    set[offset + idx] = true;
                }
                offset += d.len();
            }
        }
        Ok(set)
    }

    pub fn lift_constraint(&self, c: &Constraint) -> Result<LiftedConstraint> {
        c.validate(self.gc.dims())?;
        Ok(match c {
            Constraint::Cardinality(k) => LiftedConstraint::Knapsack {
                weights: self.elements().iter().map(|e| e.value as f64).collect(),
                budget: *k as f64,
            },
            Constraint::Knapsack { costs, budget } => LiftedConstraint::Knapsack {
                weights: self
                    .elements()
                    .iter()
                    .map(|e| costs[e.coordinate] * e.value as f64)
                    .collect(),
                budget: *budget,
            },
            Constraint::Polymatroid(p) => LiftedConstraint::Polytope(p.clone()),
        })
    }
}

/// Largest `|E'|` accepted by [`check_submodular_exhaustive`]; the check
/// visits `3^|E'|` pairs.
pub const MAX_EXHAUSTIVE_ELEMENTS: usize = 16;

/// Exhaustive submodularity check of `g` over all pairs `S subset T` and
/// `e not in T`. `g` is tabulated once (`2^|E'|` evaluations).
pub fn check_submodular_exhaustive(ri: &ReducedInstance<'_>, tol: f64) -> Result<Option<(u64, u64, usize)>> {
    let m = ri.len();
    if m > MAX_EXHAUSTIVE_ELEMENTS {
        return Err(Error::too_large(
            "lifted ground set",
            m as u128,
            MAX_EXHAUSTIVE_ELEMENTS as u128,
        ));
    }
    let table = tabulate(ri);
    let full = (1u64 << m) - 1;
    for t in 0..=full {
        let outside = full & !t;
        // Enumerate S subset of T via the submask walk.
        let mut s = t;
        loop {
            let mut rest = outside;
            while rest != 0 {
                let e = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let bit = 1u64 << e;
                let ds = table[(s | bit) as usize] - table[s as usize];
                let dt = table[(t | bit) as usize] - table[t as usize];
                if ds < dt - tol {
                    return Ok(Some((s, t, e)));
                }
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & t;
        }
    }
    Ok(None)
}

/// `g` on every subset, indexed by bitmask over element order.
pub fn tabulate(ri: &ReducedInstance<'_>) -> Vec<f64> {
    let m = ri.len();
    let mut set = vec![false; m];
    (0..(1u64 << m))
        .map(|mask| {
            for (k, s) in set.iter_mut().enumerate() {
                *s = mask >> k & 1 == 1;
            }
            ri.eval_g(&set)
        })
        .collect()
}

pub fn mask_to_set(mask: u64, m: usize) -> Vec<bool> {
    (0..m).map(|k| mask >> k & 1 == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_fn::{make_concave_linear, make_nonmonotone_dr, Shape};

    fn min_cap() -> LatticeFunction {
        make_concave_linear(vec![1.0], vec![vec![1]], Shape::MinCap(2.0)).unwrap()
    }

    #[test]
    fn build_min_cap_example() {
        let f = min_cap();
        let gc = GroundCoordinates::new(vec![5]).unwrap();
        let ri = ReducedInstance::build(&f, &gc, BuildMode::Exact).unwrap();
        assert_eq!(ri.len(), 4);
        let parts: Vec<u64> = ri.elements().iter().map(|e| e.value).collect();
        assert_eq!(parts, vec![1, 1, 2, 1]);
        assert_eq!(ri.eval_g(&[false; 4]), f.eval(&[0]));
        assert_eq!(ri.eval_g(&[true; 4]), f.eval(&[5]));
        assert_eq!(ri.eval_g(&[false, false, true, false]), 2.0);
        assert_eq!(ri.map_back(&[false, false, true, false]), LatticePoint(vec![2]));
    }

    #[test]
    fn eval_g_costs_one_call() {
        let f = min_cap();
        let gc = GroundCoordinates::new(vec![5]).unwrap();
        let ri = ReducedInstance::build(&f, &gc, BuildMode::Exact).unwrap();
        let before = f.calls();
        ri.eval_g(&[true, false, true, false]);
        assert_eq!(f.calls() - before, 1);
    }

    #[test]
    fn cache_counts_hits_separately() {
        let f = min_cap();
        let gc = GroundCoordinates::new(vec![5]).unwrap();
        let ri = ReducedInstance::build(&f, &gc, BuildMode::Exact)
            .unwrap()
            .with_cache();
        // {0} and {1} both map to x = 1.
        ri.eval_g(&[true, false, false, false]);
        ri.eval_g(&[false, true, false, false]);
        assert_eq!(f.calls(), 1);
        assert_eq!(ri.cache_hits(), 1);
    }

    #[test]
    fn zero_bounds_are_dropped() {
        let f = make_concave_linear(vec![1.0], vec![vec![1, 1, 1]], Shape::Sqrt).unwrap();
        let gc = GroundCoordinates::new(vec![3, 0, 2]).unwrap();
        let ri = ReducedInstance::build(&f, &gc, BuildMode::Exact).unwrap();
        assert!(ri.decompositions()[1].is_none());
        assert!(ri.elements().iter().all(|e| e.coordinate != 1));
        assert_eq!(ri.map_back(&vec![true; ri.len()]), LatticePoint(vec![3, 0, 2]));
    }

    #[test]
    fn refined_mode_propagates_errors() {
        let f = min_cap();
        let gc = GroundCoordinates::new(vec![3]).unwrap();
        let r = ReducedInstance::build(&f, &gc, BuildMode::Refined(Ratio::new(1, 4)));
        assert!(matches!(r, Err(Error::EpsilonTooSmall { .. })));
    }

    #[test]
    fn lift_constraint_examples() {
        let f = min_cap();
        let gc = GroundCoordinates::new(vec![5]).unwrap();
        let ri = ReducedInstance::build(&f, &gc, BuildMode::Exact).unwrap();
        assert_eq!(
            ri.lift_constraint(&Constraint::Cardinality(3)).unwrap(),
            LiftedConstraint::Knapsack {
                weights: vec![1.0, 1.0, 2.0, 1.0],
                budget: 3.0
            }
        );
        assert_eq!(
            ri.lift_constraint(&Constraint::Knapsack {
                costs: vec![2.0],
                budget: 6.0
            })
            .unwrap(),
            LiftedConstraint::Knapsack {
                weights: vec![2.0, 2.0, 4.0, 2.0],
                budget: 6.0
            }
        );
        assert!(ri.lift_constraint(&Constraint::Cardinality(0)).is_err());
    }

    #[test]
    fn small_weights_lift_respects_cap() {
        let f = make_concave_linear(vec![1.0], vec![vec![1, 1]], Shape::Sqrt).unwrap();
        let gc = GroundCoordinates::new(vec![40, 7]).unwrap();
        let eps = Ratio::new(1, 10);
        let c = Constraint::Cardinality(20);
        let ri = ReducedInstance::build_small_weights(&f, &gc, &c, eps)
            .unwrap()
            .unwrap();
        assert_eq!(ri.coordinates().bounds(), &[20, 7]);
        let lifted = ri.lift_constraint(&c).unwrap();
        assert!(lifted.max_weight_fraction().unwrap() <= 0.1);
        // K <= 1/eps has no small-weights lift.
        let none = ReducedInstance::build_small_weights(&f, &gc, &Constraint::Cardinality(9), eps).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn lift_point_round_trips() {
        let gc = GroundCoordinates::new(vec![6, 3]).unwrap();
        let f = make_nonmonotone_dr(3, &gc).unwrap();
        for mode in [
            BuildMode::Exact,
            BuildMode::Refined(Ratio::new(1, 2)),
            BuildMode::NaiveCopies,
        ] {
            let ri = ReducedInstance::build(&f, &gc, mode).unwrap();
            for x in gc.points() {
                let s = ri.lift_point(&x).unwrap();
                assert_eq!(ri.map_back(&s), x);
            }
        }
    }

    #[test]
    fn adjoint_identity_small() {
        let f = min_cap();
        let gc = GroundCoordinates::new(vec![5]).unwrap();
        let ri = ReducedInstance::build(&f, &gc, BuildMode::Exact).unwrap();
        let y = [0.5, 0.25, 1.0, 0.0];
        let v = [3.0];
        let lhs: f64 = ri.map().adjoint(&v).iter().zip(&y).map(|(a, b)| a * b).sum();
        let rhs: f64 = ri.map().apply(&y).iter().zip(&v).map(|(a, b)| a * b).sum();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn non_dr_lift_is_caught() {
        let f = LatticeFunction::from_fn(1, true, true, |x| (x[0] * x[0]) as f64);
        let gc = GroundCoordinates::new(vec![3]).unwrap();
        let ri = ReducedInstance::build(&f, &gc, BuildMode::Exact).unwrap();
        assert!(check_submodular_exhaustive(&ri, 0.0).unwrap().is_some());
    }
}
