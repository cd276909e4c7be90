use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FractionalPoint;
use crate::error::{Error, Result};
use crate::reduction::{tabulate, ReducedInstance};

/// Largest `|E'|` for which the extension is computed by enumeration.
pub const MAX_EXACT_ELEMENTS: usize = 20;

/// `g` tabulated on every subset of `E'`; supports exact evaluation of the
/// multilinear extension and its partial derivatives.
#[derive(Debug, Clone)]
pub struct SubsetTable {
    m: usize,
    values: Vec<f64>,
}

impl SubsetTable {
    /// Costs `2^|E'|` evaluations of `f`.
    pub fn build(ri: &ReducedInstance<'_>) -> Result<Self> {
        check_exact(ri.len())?;
        Ok(SubsetTable {
            m: ri.len(),
            values: tabulate(ri),
        })
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let m = values.len().trailing_zeros() as usize;
        if values.len() != 1 << m {
            return Err(Error::InvalidArgument(
                "table length must be a power of two".into(),
            ));
        }
        Ok(SubsetTable { m, values })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn value_at(&self, mask: u64) -> f64 {
        self.values[mask as usize]
    }

    /// `G(y) = sum_S g(S) prod_{e in S} y_e prod_{e not in S} (1 - y_e)`.
    pub fn extension(&self, y: &[f64]) -> f64 {
        debug_assert_eq!(y.len(), self.m);
        product_weights(y)
            .iter()
            .zip(&self.values)
            .map(|(p, v)| p * v)
            .sum()
    }

    /// `dG/dy_e = E[g(R + e) - g(R - e)]` for every `e`.
    pub fn gradient(&self, y: &[f64]) -> Vec<f64> {
        let mut probe = y.to_vec();
        (0..self.m)
            .map(|e| {
                probe[e] = 0.0;
                let weights = product_weights(&probe);
                probe[e] = y[e];
                let bit = 1usize << e;
                weights
                    .iter()
                    .enumerate()
                    .filter(|(mask, _)| mask & bit == 0)
                    .map(|(mask, p)| p * (self.values[mask | bit] - self.values[mask]))
                    .sum()
            })
            .collect()
    }
}

/// Probability of every subset under independent inclusion with `y`.
fn product_weights(y: &[f64]) -> Vec<f64> {
    let mut w = Vec::with_capacity(1 << y.len());
    w.push(1.0);
    for &p in y {
        let len = w.len();
        for k in 0..len {
            let base = w[k];
            w[k] = base * (1.0 - p);
            w.push(base * p);
        }
    }
    w
}

fn check_exact(m: usize) -> Result<()> {
    if m > MAX_EXACT_ELEMENTS {
        return Err(Error::too_large(
            "lifted ground set",
            m as u128,
            MAX_EXACT_ELEMENTS as u128,
        ));
    }
    Ok(())
}

/// Exact multilinear extension by enumeration (`2^|E'|` evaluations).
pub fn multilinear_exact(ri: &ReducedInstance<'_>, y: &FractionalPoint) -> Result<f64> {
    check_len(ri, y)?;
    Ok(SubsetTable::build(ri)?.extension(y))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Monte Carlo estimate of `G(y)` from `samples` independent draws of `R(y)`.
pub fn multilinear_sample(
    ri: &ReducedInstance<'_>,
    y: &FractionalPoint,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    check_len(ri, y)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = vec![false; ri.len()];
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    let mut first = None;
    for _ in 0..samples {
        for (s, &p) in set.iter_mut().zip(y.iter()) {
            *s = rng.gen::<f64>() < p;
        }
        let v = ri.eval_g(&set);
        // Shifted accumulation keeps the variance exact for constant samples.
        let base = *first.get_or_insert(v);
        sum += v - base;
        sum_sq += (v - base) * (v - base);
    }
    let n = samples as f64;
    let base = first.unwrap_or(0.0);
    let mean_shift = sum / n;
    let var = if samples > 1 {
        ((sum_sq - n * mean_shift * mean_shift) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(Estimate {
        mean: base + mean_shift,
        stderr: (var / n).sqrt(),
        samples,
    })
}

/// Sampled estimate of `w_e = E[g(R + e) - g(R)]` for every `e`.
pub(crate) fn sampled_marginals(
    ri: &ReducedInstance<'_>,
    y: &[f64],
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let m = ri.len();
    let mut acc = vec![0.0; m];
    let mut set = vec![false; m];
    for _ in 0..samples {
        for (s, &p) in set.iter_mut().zip(y) {
            *s = rng.gen::<f64>() < p;
        }
        let mut x = ri.map_back(&set).0;
        let base = ri.eval_image(&x);
        for (k, e) in ri.elements().iter().enumerate() {
            if set[k] {
                continue;
            }
            x[e.coordinate] += e.value;
            acc[k] += ri.eval_image(&x) - base;
            x[e.coordinate] -= e.value;
        }
    }
    acc.iter().map(|a| a / samples as f64).collect()
}

fn check_len(ri: &ReducedInstance<'_>, y: &FractionalPoint) -> Result<()> {
    if y.len() != ri.len() {
        return Err(Error::DimensionMismatch {
            expected: ri.len(),
            actual: y.len(),
        });
    }
    Ok(())
}
