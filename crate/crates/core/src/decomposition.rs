//! Subset-sum-complete decompositions of a positive integer budget.
//!
//! A decomposition of `n` is a multiset of positive parts summing to `n` such
//! that every `q` in `0..=n` is the sum of some sub-multiset. The binary
//! construction uses at most `2 * floor(log2 n) + 1` parts; the refined
//! variant additionally caps every part at `floor(eps * n)`.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Rational accuracy parameter in `(0, 1]`.
pub type Epsilon = Ratio<u64>;

/// Default largest target accepted by [`verify_completeness`].
pub const DEFAULT_COMPLETENESS_BOUND: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionKind {
    /// Binary construction: `1, 2^0, ..., 2^(m-1)` followed by one part per set
    /// bit of the target below the leading bit.
    Exact,
    /// Binary construction with every part split down to at most `cap`.
    Refined { epsilon: Option<Epsilon>, cap: u64 },
    /// `n` copies of `1`; the naive reduction.
    Unary,
    /// Caller-supplied parts with no structural guarantee.
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    target: u64,
    parts: Vec<u64>,
    kind: DecompositionKind,
}

/// `2 * floor(log2 n) + 1`, the part-count bound of the binary construction.
pub fn exact_part_bound(n: u64) -> usize {
    assert!(n >= 1);
    2 * floor_log2(n) as usize + 1
}

/// Part-count bound of the refined construction: the exact bound plus `ceil(1/eps)`.
pub fn refined_part_bound(n: u64, epsilon: Epsilon) -> usize {
    let inv = Ratio::new(*epsilon.denom(), *epsilon.numer()).ceil().to_integer();
    exact_part_bound(n) + inv as usize
}

fn floor_log2(n: u64) -> u32 {
    63 - n.leading_zeros()
}

/// Binary subset-sum-complete decomposition of `n`.
pub fn decompose(n: u64) -> Result<Decomposition> {
    if n == 0 {
        return Err(Error::ZeroTarget);
    }
    let m = floor_log2(n);
    let mut parts = Vec::with_capacity(2 * m as usize + 1);
    parts.push(1);
    parts.extend((0..m).map(|i| 1u64 << i));
    parts.extend((0..m).filter(|c| n >> c & 1 == 1).map(|c| 1u64 << c));
    Ok(Decomposition {
        target: n,
        parts,
        kind: DecompositionKind::Exact,
    })
}

/// Refined decomposition whose parts are all at most `floor(eps * n)`.
pub fn decompose_refined(n: u64, epsilon: Epsilon) -> Result<Decomposition> {
    if n == 0 {
        return Err(Error::ZeroTarget);
    }
    check_epsilon(epsilon)?;
    let scaled = epsilon * Ratio::from_integer(n);
    if scaled < Ratio::from_integer(1) {
        return Err(Error::EpsilonTooSmall {
            target: n,
            epsilon: epsilon.to_string(),
        });
    }
    let cap = scaled.floor().to_integer();
    let mut d = refine_with_cap(decompose(n)?, cap)?;
    d.kind = DecompositionKind::Refined {
        epsilon: Some(epsilon),
        cap,
    };
    Ok(d)
}

/// Splits every part above `cap` into `(a - cap, cap)` until none remain.
///
/// Splitting `a` into `a - cap` and `cap` keeps the multiset complete: any
/// subset using `a` can use both halves instead.
pub fn refine_with_cap(base: Decomposition, cap: u64) -> Result<Decomposition> {
    if cap == 0 {
        return Err(Error::InvalidArgument("part cap must be at least 1".into()));
    }
    let mut parts = base.parts;
    let mut i = 0;
    while i < parts.len() {
        if parts[i] > cap {
            parts[i] -= cap;
            parts.push(cap);
        } else {
            i += 1;
        }
    }
    Ok(Decomposition {
        target: base.target,
        parts,
        kind: DecompositionKind::Refined { epsilon: None, cap },
    })
}

/// `n` unit parts.
pub fn unary(n: u64) -> Result<Decomposition> {
    if n == 0 {
        return Err(Error::ZeroTarget);
    }
    Ok(Decomposition {
        target: n,
        parts: vec![1; n as usize],
        kind: DecompositionKind::Unary,
    })
}

fn check_epsilon(epsilon: Epsilon) -> Result<()> {
    if *epsilon.numer() == 0 || epsilon > Ratio::from_integer(1) {
        return Err(Error::EpsilonOutOfRange(epsilon.to_string()));
    }
    Ok(())
}

impl Decomposition {
    /// Wraps arbitrary parts. Parts must be positive and sum to `target`.
    pub fn from_parts(target: u64, parts: Vec<u64>) -> Result<Self> {
        if target == 0 {
            return Err(Error::ZeroTarget);
        }
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("parts must be positive".into()));
        }
        let sum = parts
            .iter()
            .try_fold(0u64, |acc, &a| acc.checked_add(a))
            .ok_or_else(|| Error::InvalidArgument("part sum overflows".into()))?;
        if sum != target {
            return Err(Error::InvalidArgument(format!(
                "parts sum to {sum}, expected {target}"
            )));
        }
        Ok(Decomposition {
            target,
            parts,
            kind: DecompositionKind::Custom,
        })
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn kind(&self) -> &DecompositionKind {
        &self.kind
    }

    pub fn max_part(&self) -> u64 {
        self.parts.iter().copied().max().unwrap_or(0)
    }

    /// Indices of a sub-multiset of parts summing to exactly `q`.
    ///
    /// Exact decompositions use the constructive binary certificate; other
    /// kinds fall back to a subset-sum table.
    pub fn subset_for(&self, q: u64) -> Result<Vec<usize>> {
        if q > self.target {
            return Err(Error::QueryOutOfRange {
                query: q as i128,
                target: self.target,
            });
        }
        if q == 0 {
            return Ok(Vec::new());
        }
        if q == self.target {
            return Ok((0..self.parts.len()).collect());
        }
        match self.kind {
            DecompositionKind::Exact => Ok(self.binary_certificate(q)),
            DecompositionKind::Unary => Ok((0..q as usize).collect()),
            _ => self.table_certificate(q),
        }
    }

    fn binary_certificate(&self, q: u64) -> Vec<usize> {
        let n = self.target;
        let m = floor_log2(n);
        if q == 1 {
            return vec![0];
        }
        // Highest bit set in n but clear in q; it exists because q < n.
        let j = floor_log2(n & !q);
        // Parts 0..=m sum to 2^m; bits of n in [j, m) come from the tail.
        let mut chosen = vec![true; m as usize + 1];
        let mut tail = Vec::new();
        let mut slot = m as usize + 1;
        for c in 0..m {
            if n >> c & 1 == 1 {
                if c >= j {
                    tail.push(slot);
                }
                slot += 1;
            }
        }
        let r = (n >> j) << j;
        let excess = r - q;
        debug_assert!(excess < 1 << m);
        // Part k (1 <= k <= m) is 2^(k-1); drop the bits of r - q.
        for b in 0..m {
            if excess >> b & 1 == 1 {
                chosen[b as usize + 1] = false;
            }
        }
        let mut out: Vec<usize> = chosen
            .iter()
            .enumerate()
            .filter_map(|(k, &keep)| keep.then_some(k))
            .collect();
        out.extend(tail);
        out
    }

    fn table_certificate(&self, q: u64) -> Result<Vec<usize>> {
        let q_usize = q as usize;
        let mut from = vec![u32::MAX; q_usize + 1];
        let mut reach = vec![false; q_usize + 1];
        reach[0] = true;
        for (idx, &a) in self.parts.iter().enumerate() {
            let a = a as usize;
            if a > q_usize {
                continue;
            }
            for s in (a..=q_usize).rev() {
                if reach[s - a] && !reach[s] {
                    reach[s] = true;
                    from[s] = idx as u32;
                }
            }
            if reach[q_usize] {
                break;
            }
        }
        if !reach[q_usize] {
            return Err(Error::Unreachable(q));
        }
        let mut out = Vec::new();
        let mut s = q_usize;
        while s > 0 {
            let idx = from[s] as usize;
            out.push(idx);
            s -= self.parts[idx] as usize;
        }
        out.reverse();
        Ok(out)
    }
}

/// Outcome of the exhaustive subset-sum check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessReport {
    pub target: u64,
    pub complete: bool,
    /// Smallest `q` in `0..=target` with no certificate.
    pub first_missing: Option<u64>,
}

pub fn verify_completeness(d: &Decomposition) -> Result<CompletenessReport> {
    verify_completeness_bounded(d, DEFAULT_COMPLETENESS_BOUND)
}

/// Subset-sum reachability over `0..=target` using a shifted bitset.
pub fn verify_completeness_bounded(d: &Decomposition, bound: u64) -> Result<CompletenessReport> {
    let n = d.target;
    if n > bound {
        return Err(Error::too_large("decomposition target", n as u128, bound as u128));
    }
    let bits = n as usize + 1;
    let words = bits.div_ceil(64);
    let mut reach = vec![0u64; words];
    reach[0] = 1;
    for &a in &d.parts {
        if a > n {
            continue;
        }
        shift_or(&mut reach, a as usize);
    }
    let first_missing = (0..bits).find(|&q| reach[q / 64] >> (q % 64) & 1 == 0);
    Ok(CompletenessReport {
        target: n,
        complete: first_missing.is_none(),
        first_missing: first_missing.map(|q| q as u64),
    })
}

fn shift_or(set: &mut [u64], shift: usize) {
    let (word_shift, bit_shift) = (shift / 64, shift % 64);
    for w in (word_shift..set.len()).rev() {
        let src = w - word_shift;
        let mut v = set[src] << bit_shift;
        if bit_shift > 0 && src > 0 {
            v |= set[src - 1] >> (64 - bit_shift);
        }
        set[w] |= v;
    }
}
