//! Families of lattice functions with known diminishing-returns behavior.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::validate::{check_dr, check_monotone};
use super::{Evaluate, GroundCoordinates, LatticeFunction};
use crate::error::{Error, Result};

/// Scalar shape applied to a nonnegative linear form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Sqrt,
    Log1p,
    MinCap(f64),
    /// `s^2`; convex, only accepted by [`make_custom_linear`].
    Square,
}

impl Shape {
    pub fn apply(self, s: f64) -> f64 {
        match self {
            Shape::Sqrt => s.sqrt(),
            Shape::Log1p => s.ln_1p(),
            Shape::MinCap(theta) => s.min(theta),
            Shape::Square => s * s,
        }
    }

    pub fn is_concave(self) -> bool {
        !matches!(self, Shape::Square)
    }

    fn is_integral(self) -> bool {
        matches!(self, Shape::MinCap(t) if t.fract() == 0.0)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Sqrt => write!(f, "sqrt"),
            Shape::Log1p => write!(f, "log1p"),
            Shape::MinCap(t) => write!(f, "min-cap({t})"),
            Shape::Square => write!(f, "square"),
        }
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "sqrt" => return Ok(Shape::Sqrt),
            "log1p" => return Ok(Shape::Log1p),
            "square" => return Ok(Shape::Square),
            _ => {}
        }
        let inner = s
            .strip_prefix("min-cap(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("unknown shape `{s}`")))?;
        let theta: f64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad min-cap parameter `{inner}`")))?;
        if !theta.is_finite() || theta < 0.0 {
            return Err(Error::Parse(format!(
                "min-cap parameter must be finite and >= 0, got {theta}"
            )));
        }
        Ok(Shape::MinCap(theta))
    }
}

/// `x -> sum_j w_j * shape(<c_j, x>)`.
#[derive(Debug, Clone)]
struct ShapedLinear {
    dims: usize,
    weights: Vec<f64>,
    directions: Vec<Vec<u64>>,
    shape: Shape,
}

impl ShapedLinear {
    fn new(weights: Vec<f64>, directions: Vec<Vec<u64>>, shape: Shape) -> Result<Self> {
        if weights.len() != directions.len() {
            return Err(Error::DimensionMismatch {
                expected: weights.len(),
                actual: directions.len(),
            });
        }
        let dims = directions
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidArgument("at least one term is required".into()))?;
        if dims == 0 {
            return Err(Error::InvalidArgument("directions must be nonempty".into()));
        }
        if let Some(c) = directions.iter().find(|c| c.len() != dims) {
            return Err(Error::DimensionMismatch {
                expected: dims,
                actual: c.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument(
                "weights must be finite and nonnegative".into(),
            ));
        }
        Ok(ShapedLinear {
            dims,
            weights,
            directions,
            shape,
        })
    }

    fn exact(&self) -> bool {
        self.shape.is_integral() && self.weights.iter().all(|w| w.fract() == 0.0)
    }
}

impl Evaluate for ShapedLinear {
    fn dims(&self) -> usize {
        self.dims
    }

    fn evaluate(&self, x: &[u64]) -> f64 {
        self.weights
            .iter()
            .zip(&self.directions)
            .map(|(w, c)| {
                let s: u64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
                w * self.shape.apply(s as f64)
            })
            .sum()
    }

    fn describe(&self) -> String {
        format!(
            "{} terms of {} on {} coordinates",
            self.weights.len(),
            self.shape,
            self.dims
        )
    }
}

/// Monotone DR-submodular `f(x) = sum_j w_j * phi(<c_j, x>)` with concave `phi`.
pub fn make_concave_linear(
    weights: Vec<f64>,
    directions: Vec<Vec<u64>>,
    shape: Shape,
) -> Result<LatticeFunction> {
    if !shape.is_concave() {
        return Err(Error::InvalidArgument(format!("shape {shape} is not concave")));
    }
    let inner = ShapedLinear::new(weights, directions, shape)?;
    let exact = inner.exact();
    Ok(LatticeFunction::new(inner, true, exact))
}

/// Same form as [`make_concave_linear`] but any shape and a caller-declared
/// monotone flag. Nothing is certified.
pub fn make_custom_linear(
    weights: Vec<f64>,
    directions: Vec<Vec<u64>>,
    shape: Shape,
    monotone: bool,
) -> Result<LatticeFunction> {
    let inner = ShapedLinear::new(weights, directions, shape)?;
    let exact = inner.exact();
    Ok(LatticeFunction::new(inner, monotone, exact))
}

/// Random monotone concave-linear instance on `gc`. Integer weights with a
/// `MinCap` of integral cap give an exact family.
pub fn random_concave_linear(seed: u64, dims: usize, shape: Shape) -> Result<LatticeFunction> {
    if dims == 0 {
        return Err(Error::InvalidArgument("dims must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = dims + 1;
    let integral = shape.is_integral();
    let mut weights = Vec::with_capacity(terms);
    let mut directions = Vec::with_capacity(terms);
    for _ in 0..terms {
        weights.push(if integral {
            rng.gen_range(1..=3) as f64
        } else {
            rng.gen_range(0.5..2.0)
        });
        directions.push(random_direction(&mut rng, dims));
    }
    make_concave_linear(weights, directions, shape)
}

fn random_direction(rng: &mut ChaCha8Rng, dims: usize) -> Vec<u64> {
    loop {
        let c: Vec<u64> = (0..dims).map(|_| rng.gen_range(0..=2)).collect();
        if c.iter().any(|&v| v > 0) {
            return c;
        }
    }
}

/// Concave-linear part plus separable concave quadratics and a constant shift.
#[derive(Debug, Clone)]
struct NonmonotoneDr {
    linear: ShapedLinear,
    second: Option<ShapedLinear>,
    slope: Vec<f64>,
    curvature: Vec<f64>,
    shift: f64,
    seed: u64,
}

impl Evaluate for NonmonotoneDr {
    fn dims(&self) -> usize {
        self.linear.dims
    }

    fn evaluate(&self, x: &[u64]) -> f64 {
        let mut v = self.linear.evaluate(x) + self.shift;
        if let Some(s) = &self.second {
            v += s.evaluate(x);
        }
        for ((&xi, a), b) in x.iter().zip(&self.slope).zip(&self.curvature) {
            let xi = xi as f64;
            v += a * xi - b * xi * xi;
        }
        v
    }

    fn describe(&self) -> String {
        format!(
            "nonmonotone DR instance (seed {}) on {} coordinates",
            self.seed, self.linear.dims
        )
    }
}

const MAX_GENERATOR_ATTEMPTS: u64 = 16;

/// Seeded non-monotone DR-submodular instance on `gc`.
///
/// The result is `sum_j w_j phi_j(<c_j, x>) + sum_i (a_i x_i - b_i x_i^2) + shift`,
/// with one coordinate's quadratic steep enough that `f` decreases at its top,
/// and `shift` chosen so `f >= 0` on the box. Every candidate is certified by
/// the exhaustive DR check before it is returned.
pub fn make_nonmonotone_dr(seed: u64, gc: &GroundCoordinates) -> Result<LatticeFunction> {
    let size = gc.domain_size();
    if size > super::DEFAULT_MAX_POINTS {
        return Err(Error::too_large(
            "lattice domain",
            size,
            super::DEFAULT_MAX_POINTS,
        ));
    }
    for attempt in 0..MAX_GENERATOR_ATTEMPTS {
        let sub_seed = seed ^ attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let candidate = nonmonotone_candidate(sub_seed, gc)?;
        let f = LatticeFunction::new(candidate, false, false);
        if !check_dr(&f, gc)?.passed {
            log::warn!("nonmonotone candidate {sub_seed} failed certification; retrying");
            continue;
        }
        if gc.bounds().iter().any(|&b| b > 0) && check_monotone(&f, gc)?.passed {
            log::warn!("nonmonotone candidate {sub_seed} turned out monotone; retrying");
            continue;
        }
        f.reset_calls();
        return Ok(f);
    }
    Err(Error::InvalidArgument(format!(
        "no certified nonmonotone instance for seed {seed}"
    )))
}

fn nonmonotone_candidate(seed: u64, gc: &GroundCoordinates) -> Result<NonmonotoneDr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = gc.dims();
    let terms = |shape: Shape, rng: &mut ChaCha8Rng| -> Result<ShapedLinear> {
        let k = rng.gen_range(1..=n);
        let weights = (0..k).map(|_| rng.gen_range(0.5..2.0)).collect();
        let directions = (0..k).map(|_| random_direction(rng, n)).collect();
        ShapedLinear::new(weights, directions, shape)
    };
    let linear = terms(Shape::Sqrt, &mut rng)?;
    let second = if rng.gen_bool(0.5) {
        Some(terms(Shape::Log1p, &mut rng)?)
    } else {
        None
    };
    let mut slope: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.5)).collect();
    let mut curvature: Vec<f64> = (0..n).map(|_| rng.gen_range(0.02..0.3)).collect();

    // Force a strictly negative top marginal on one coordinate with a nonzero
    // bound. The concave part's marginal in coordinate i never exceeds
    // sum_j w_j phi(c_ji), its value at the origin.
    let candidates: Vec<usize> = (0..n).filter(|&i| gc.bounds()[i] > 0).collect();
    if !candidates.is_empty() {
        let i0 = candidates[rng.gen_range(0..candidates.len())];
        let b = gc.bounds()[i0] as f64;
        let mut lift = unit_marginal_bound(&linear, i0);
        if let Some(s) = &second {
            lift += unit_marginal_bound(s, i0);
        }
        slope[i0] = slope[i0].min(1.0);
        curvature[i0] = (slope[i0] + lift + 0.25) / (2.0 * b - 1.0);
    }

    // a x - b x^2 is concave with value 0 at x = 0, so its minimum over
    // [0, B] is at an endpoint.
    let shift = gc
        .bounds()
        .iter()
        .zip(slope.iter().zip(&curvature))
        .map(|(&bound, (a, c))| {
            let top = bound as f64;
            -(a * top - c * top * top).min(0.0)
        })
        .sum();
    Ok(NonmonotoneDr {
        linear,
        second,
        slope,
        curvature,
        shift,
        seed,
    })
}

fn unit_marginal_bound(s: &ShapedLinear, i: usize) -> f64 {
    s.weights
        .iter()
        .zip(&s.directions)
        .map(|(w, c)| w * s.shape.apply(c[i] as f64))
        .sum()
}
