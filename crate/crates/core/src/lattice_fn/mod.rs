//! Lattice functions on a bounded box `[0, B_1] x ... x [0, B_n]`.

mod validate;
mod zoo;

use std::fmt;
use std::ops::Deref;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

pub use validate::{
    check_dr, check_lattice_submodular, check_monotone, Counterexample, Validation, Validator,
    DEFAULT_MAX_POINTS,
};
pub use zoo::{make_concave_linear, make_custom_linear, make_nonmonotone_dr, random_concave_linear, Shape};

/// Coordinate labels and per-coordinate upper bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundCoordinates {
    labels: Vec<String>,
    bounds: Vec<u64>,
}

impl GroundCoordinates {
    pub fn new(bounds: Vec<u64>) -> Result<Self> {
        let labels = (1..=bounds.len()).map(|i| format!("x{i}")).collect();
        Self::with_labels(labels, bounds)
    }

    pub fn with_labels(labels: Vec<String>, bounds: Vec<u64>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one coordinate is required".into(),
            ));
        }
        if labels.len() != bounds.len() {
            return Err(Error::DimensionMismatch {
                expected: bounds.len(),
                actual: labels.len(),
            });
        }
        Ok(GroundCoordinates { labels, bounds })
    }

    pub fn dims(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[u64] {
        &self.bounds
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of lattice points, `prod (B_i + 1)`, saturating at `u128::MAX`.
    pub fn domain_size(&self) -> u128 {
        self.bounds
            .iter()
            .fold(1u128, |acc, &b| acc.saturating_mul(b as u128 + 1))
    }

    /// Mixed-radix strides with coordinate 0 varying fastest.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = Vec::with_capacity(self.dims());
        let mut s = 1usize;
        for &b in &self.bounds {
            strides.push(s);
            s = s.saturating_mul(b as usize + 1);
        }
        strides
    }

    pub(crate) fn point_at(&self, mut index: usize) -> LatticePoint {
        let mut x = Vec::with_capacity(self.dims());
        for &b in &self.bounds {
            let radix = b as usize + 1;
            x.push((index % radix) as u64);
            index /= radix;
        }
        LatticePoint(x)
    }

    /// Iterates every lattice point in mixed-radix order.
    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        let n = usize::try_from(self.domain_size()).unwrap_or(usize::MAX);
        (0..n).map(move |i| self.point_at(i))
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        x.len() == self.dims() && x.iter().zip(&self.bounds).all(|(v, b)| v <= b)
    }

    pub fn top(&self) -> LatticePoint {
        LatticePoint(self.bounds.clone())
    }

    pub fn origin(&self) -> LatticePoint {
        LatticePoint::zeros(self.dims())
    }
}

/// A nonnegative integer vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(pub Vec<u64>);

impl LatticePoint {
    pub fn zeros(n: usize) -> Self {
        LatticePoint(vec![0; n])
    }

    /// `x + chi_i`.
    pub fn increment(&self, i: usize) -> Self {
        let mut x = self.0.clone();
        x[i] += 1;
        LatticePoint(x)
    }

    pub fn join(&self, other: &Self) -> Self {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn meet(&self, other: &Self) -> Self {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// Coordinatewise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl Deref for LatticePoint {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.0
    }
}

impl From<Vec<u64>> for LatticePoint {
    fn from(v: Vec<u64>) -> Self {
        LatticePoint(v)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A deterministic evaluator `Z_+^n -> R_+`.
pub trait Evaluate: Send + Sync {
    fn dims(&self) -> usize;
    fn evaluate(&self, x: &[u64]) -> f64;
    fn describe(&self) -> String {
        format!("evaluator on {} coordinates", self.dims())
    }
}

struct FnEvaluator<F> {
    dims: usize,
    func: F,
}

impl<F> Evaluate for FnEvaluator<F>
where
    F: Fn(&[u64]) -> f64 + Send + Sync,
{
    fn dims(&self) -> usize {
        self.dims
    }

    fn evaluate(&self, x: &[u64]) -> f64 {
        (self.func)(x)
    }

    fn describe(&self) -> String {
        format!("closure on {} coordinates", self.dims)
    }
}

/// Evaluator plus declared metadata and an oracle-call counter.
///
/// Every call to [`LatticeFunction::eval`] increments the counter by exactly
/// one; the counter is atomic so shared references can be evaluated from
/// several threads.
pub struct LatticeFunction {
    evaluator: Box<dyn Evaluate>,
    monotone: bool,
    exact: bool,
    calls: AtomicU64,
}

impl LatticeFunction {
    pub fn new(evaluator: impl Evaluate + 'static, monotone: bool, exact: bool) -> Self {
        LatticeFunction {
            evaluator: Box::new(evaluator),
            monotone,
            exact,
            calls: AtomicU64::new(0),
        }
    }

    /// Wraps a closure. `exact` declares that every value is an integer
    /// representable without rounding, which switches validators to a zero
    /// tolerance.
    pub fn from_fn<F>(dims: usize, monotone: bool, exact: bool, func: F) -> Self
    where
        F: Fn(&[u64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(FnEvaluator { dims, func }, monotone, exact)
    }

    /// Replaces the declared monotone flag.
    pub fn with_declared_monotone(mut self, monotone: bool) -> Self {
        self.monotone = monotone;
        self
    }

    pub fn eval(&self, x: &[u64]) -> f64 {
        debug_assert_eq!(x.len(), self.evaluator.dims());
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.evaluator.evaluate(x)
    }

    pub fn dims(&self) -> usize {
        self.evaluator.dims()
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset_calls(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }

    pub fn describe(&self) -> String {
        self.evaluator.describe()
    }
}

impl fmt::Debug for LatticeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeFunction")
            .field("evaluator", &self.evaluator.describe())
            .field("monotone", &self.monotone)
            .field("exact", &self.exact)
            .field("calls", &self.calls())
            .finish()
    }
}

/// Comparison slack: zero for exact families, `1e-9 * max(1, range)` otherwise.
pub fn tolerance(exact: bool, range: f64) -> f64 {
    if exact {
        0.0
    } else {
        1e-9 * range.abs().max(1.0)
    }
}
