//! Reference oracles for the drlift test suites.
//!
//! Everything here is written from the definitions, by enumeration, and
//! shares no code with the algorithms it checks. It is meant for boxes and
//! ground sets small enough that exponential work is fine.

pub mod desk;
pub mod lp;

use std::collections::BTreeSet;

/// Every sub-multiset sum of `parts`, by growing a set one part at a time.
pub fn reachable_sums(parts: &[u64]) -> BTreeSet<u64> {
    let mut sums = BTreeSet::from([0u64]);
    for &p in parts {
        let shifted: Vec<u64> = sums.iter().map(|s| s + p).collect();
        sums.extend(shifted);
    }
    sums
}

/// The binary construction read off the base-2 string of `n`: a one, every
/// power of two below the leading bit, then one part per lower set bit.
pub fn binary_parts_reference(n: u64) -> Vec<u64> {
    let digits = format!("{n:b}");
    let m = digits.len() - 1;
    let mut parts = vec![1u64];
    parts.extend((0..m).map(|k| 2u64.pow(k as u32)));
    for (pos, ch) in digits.chars().rev().enumerate().take(m) {
        if ch == '1' {
            parts.push(2u64.pow(pos as u32));
        }
    }
    parts
}

/// All points of the box `0..=bounds`, in odometer order (last coordinate fastest).
pub fn box_points(bounds: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn leq(x: &[u64], y: &[u64]) -> bool {
    x.iter().zip(y).all(|(a, b)| a <= b)
}

fn bump(x: &[u64], i: usize) -> Vec<u64> {
    let mut y = x.to_vec();
    y[i] += 1;
    y
}

/// Diminishing returns straight from the definition: all comparable pairs
/// `x <= y` and every `i` with `y_i < B_i`. Returns the first violation.
pub fn dr_violation<F: Fn(&[u64]) -> f64>(
    f: F,
    bounds: &[u64],
    tol: f64,
) -> Option<(Vec<u64>, Vec<u64>, usize)> {
    let pts = box_points(bounds);
    for x in &pts {
        for y in pts.iter().filter(|y| leq(x, y)) {
            for i in 0..bounds.len() {
                if y[i] >= bounds[i] {
                    continue;
                }
                let dx = f(&bump(x, i)) - f(x);
                let dy = f(&bump(y, i)) - f(y);
                if dx < dy - tol {
                    return Some((x.clone(), y.clone(), i));
                }
            }
        }
    }
    None
}

/// `f(x) + f(y) >= f(x v y) + f(x ^ y)` over all pairs of the box.
pub fn lattice_violation<F: Fn(&[u64]) -> f64>(
    f: F,
    bounds: &[u64],
    tol: f64,
) -> Option<(Vec<u64>, Vec<u64>)> {
    let pts = box_points(bounds);
    for x in &pts {
        for y in &pts {
            let join: Vec<u64> = x.iter().zip(y).map(|(a, b)| *a.max(b)).collect();
            let meet: Vec<u64> = x.iter().zip(y).map(|(a, b)| *a.min(b)).collect();
            if f(x) + f(y) < f(&join) + f(&meet) - tol {
                return Some((x.clone(), y.clone()));
            }
        }
    }
    None
}

/// Set submodularity of a table over `m` elements, from
/// `g(S) + g(T) >= g(S | T) + g(S & T)` for every pair of subsets.
pub fn set_submodular_violation(table: &[f64], tol: f64) -> Option<(usize, usize)> {
    let n = table.len();
    for s in 0..n {
        for t in 0..n {
            if table[s] + table[t] < table[s | t] + table[s & t] - tol {
                return Some((s, t));
            }
        }
    }
    None
}

/// Largest `f` over the feasible points of the box.
pub fn lattice_max<F: Fn(&[u64]) -> f64, P: Fn(&[u64]) -> bool>(f: F, bounds: &[u64], feasible: P) -> f64 {
    box_points(bounds)
        .iter()
        .filter(|x| feasible(x))
        .map(|x| f(x))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `G(y) = sum_S g(S) prod_{e in S} y_e prod_{e notin S} (1 - y_e)`.
pub fn multilinear_reference(table: &[f64], y: &[f64]) -> f64 {
    (0..table.len())
        .map(|s| {
            let p: f64 = y
                .iter()
                .enumerate()
                .map(|(e, &ye)| if s >> e & 1 == 1 { ye } else { 1.0 - ye })
                .product();
            p * table[s]
        })
        .sum()
}

/// `H(v) = E[f(z + R(v))]` with independent coordinate rounding.
pub fn residual_reference<F: Fn(&[u64]) -> f64>(f: F, z: &[u64], v: &[f64]) -> f64 {
    let n = z.len();
    (0..(1usize << n))
        .map(|s| {
            let mut p = 1.0;
            let mut x = z.to_vec();
            for i in 0..n {
                if s >> i & 1 == 1 {
                    p *= v[i];
                    x[i] += 1;
                } else {
                    p *= 1.0 - v[i];
                }
            }
            if p == 0.0 {
                0.0
            } else {
                p * f(&x)
            }
        })
        .sum()
}

/// Whether `sum_{i in S} x_i <= rank(S) + tol` for every `S`.
pub fn in_polymatroid<R: Fn(u64) -> u64>(x: &[f64], rank: R, tol: f64) -> bool {
    let n = x.len();
    (0..(1u64 << n)).all(|s| {
        let load: f64 = (0..n).filter(|i| s >> i & 1 == 1).map(|i| x[i]).sum();
        load <= rank(s) as f64 + tol
    })
}

/// Lifted element data: `(coordinate, part value)` per element of `E'`.
pub type Lifted = Vec<(usize, u64)>;

/// `x_i = sum_{e on i} a_e y_e`.
pub fn image(lifted: &Lifted, dims: usize, y: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; dims];
    for (&(i, a), ye) in lifted.iter().zip(y) {
        x[i] += a as f64 * ye;
    }
    x
}

/// Maximum of the multilinear extension of `table` over
/// `{y in [0,1]^E' : M(y) in P}`.
///
/// With `u_e = a_e y_e` the region is an integral polymatroid (the rank
/// composed with the element-to-coordinate map, cut by `u_e <= a_e`), and
/// the extension is linear in each `u_e` and convex along every `u_e - u_f`.
/// Pipage moves therefore reach an integral `u` without loss, so the maximum
/// is attained on the finite grid `y_e in {0, 1/a_e, ..., 1}`, which is
/// enumerated here.
pub fn opt_frac_reference<R: Fn(u64) -> u64>(
    table: &[f64],
    lifted: &Lifted,
    dims: usize,
    rank: R,
) -> (f64, Vec<f64>) {
    let steps: Vec<u64> = lifted.iter().map(|&(_, a)| a).collect();
    let mut best = (f64::NEG_INFINITY, vec![0.0; lifted.len()]);
    for u in box_points(&steps) {
        let y: Vec<f64> = u.iter().zip(&steps).map(|(&k, &a)| k as f64 / a as f64).collect();
        if !in_polymatroid(&image(lifted, dims, &y), &rank, 1e-12) {
            continue;
        }
        let v = multilinear_reference(table, &y);
        if v > best.0 {
            best = (v, y);
        }
    }
    best
}

/// A feasible point of `{y in [0,1]^E' : M(y) in P}`: a box point (with
/// some coordinates pinned at 0 or 1) scaled by the largest factor that
/// keeps every rank inequality.
pub fn random_feasible<R: Fn(u64) -> u64>(
    rng: &mut impl rand::Rng,
    lifted: &Lifted,
    dims: usize,
    rank: R,
) -> Vec<f64> {
    let y: Vec<f64> = lifted
        .iter()
        .map(|_| match rng.gen_range(0..6) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.gen(),
        })
        .collect();
    let x = image(lifted, dims, &y);
    let mut lambda: f64 = 1.0;
    for s in 1..(1u64 << dims) {
        let load: f64 = (0..dims).filter(|i| s >> i & 1 == 1).map(|i| x[i]).sum();
        if load > 0.0 {
            lambda = lambda.min(rank(s) as f64 / load);
        }
    }
    let y: Vec<f64> = y.iter().map(|v| v * lambda * (1.0 - 1e-12)).collect();
    assert!(in_polymatroid(&image(lifted, dims, &y), &rank, 1e-9));
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_parts_match_hand_examples() {
        assert_eq!(binary_parts_reference(1), vec![1]);
        assert_eq!(binary_parts_reference(5), vec![1, 1, 2, 1]);
        assert_eq!(binary_parts_reference(7), vec![1, 1, 2, 1, 2]);
        assert_eq!(binary_parts_reference(8), vec![1, 1, 2, 4]);
    }

    #[test]
    fn sums_and_points() {
        assert_eq!(reachable_sums(&[1, 3]), BTreeSet::from([0, 1, 3, 4]));
        assert_eq!(box_points(&[1, 2]).len(), 6);
    }

    #[test]
    fn definition_checks_on_textbook_functions() {
        assert!(dr_violation(|x| (x[0] as f64).sqrt(), &[4], 0.0).is_none());
        assert_eq!(
            dr_violation(|x| (x[0] * x[0]) as f64, &[3], 0.0),
            Some((vec![0], vec![1], 0))
        );
        assert!(lattice_violation(|x| (x[0] * x[1]) as f64, &[2, 2], 0.0).is_some());
        // coverage of {a}, {a, b}
        let cov = [0.0, 1.0, 2.0, 2.0];
        assert!(set_submodular_violation(&cov, 0.0).is_none());
        assert!(set_submodular_violation(&[0.0, 1.0, 1.0, 3.0], 0.0).is_some());
    }

    #[test]
    fn extension_and_residual_by_hand() {
        // modular: g = 1 + 2[0] + 5[1]
        let t = [1.0, 3.0, 6.0, 8.0];
        assert!((multilinear_reference(&t, &[0.5, 0.5]) - 4.5).abs() < 1e-12);
        let h = residual_reference(|x| (x[0] * 10 + x[1]) as f64, &[1, 0], &[0.5, 0.25]);
        assert!((h - 15.25).abs() < 1e-12);
    }

    #[test]
    fn opt_frac_of_modular_under_budget() {
        // Two unit elements on one coordinate with rank 1: best is one of them.
        let t = [0.0, 2.0, 3.0, 5.0];
        let lifted = vec![(0, 1), (0, 1)];
        let (v, _) = opt_frac_reference(&t, &lifted, 1, |s| if s == 0 { 0 } else { 1 });
        assert!((v - 3.0).abs() < 1e-12);
    }
}
