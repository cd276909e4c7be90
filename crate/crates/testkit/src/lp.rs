//! Linear programs by vertex enumeration.

use nalgebra::{DMatrix, DVector};

/// `max <w, y>` over `{y : A y <= b}` for a bounded, nonempty polytope in
/// `R^m`, by solving every `m`-subset of constraints as equalities and keeping
/// the feasible solutions. Exponential; meant for `m` up to about 8.
pub fn lp_max_by_vertices(a: &[Vec<f64>], b: &[f64], w: &[f64]) -> (f64, Vec<f64>) {
    let m = w.len();
    let rows = a.len();
    let mut best = (f64::NEG_INFINITY, vec![0.0; m]);
    let mut pick: Vec<usize> = (0..m).collect();
    loop {
        let mat = DMatrix::from_fn(m, m, |r, c| a[pick[r]][c]);
        let rhs = DVector::from_iterator(m, pick.iter().map(|&r| b[r]));
        if let Some(y) = mat.lu().solve(&rhs) {
            let feasible = a
                .iter()
                .zip(b)
                .all(|(row, &br)| row.iter().zip(y.iter()).map(|(p, q)| p * q).sum::<f64>() <= br + 1e-9);
            if feasible && y.iter().all(|v| v.is_finite()) {
                let val: f64 = w.iter().zip(y.iter()).map(|(p, q)| p * q).sum();
                if val > best.0 {
                    best = (val, y.iter().copied().collect());
                }
            }
        }
        // next m-combination of 0..rows
        let mut k = m;
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            if pick[k] < rows - m + k {
                pick[k] += 1;
                for j in k + 1..m {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Constraint rows for `{y in [0,1]^E' : M(y) in P}`: the box, then one row
/// `sum_{e on S} a_e y_e <= rank(S)` per nonempty `S`.
pub fn lifted_polytope<R: Fn(u64) -> u64>(
    lifted: &crate::Lifted,
    dims: usize,
    rank: R,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let m = lifted.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for e in 0..m {
        let mut lo = vec![0.0; m];
        lo[e] = -1.0;
        a.push(lo);
        b.push(0.0);
        let mut hi = vec![0.0; m];
        hi[e] = 1.0;
        a.push(hi);
        b.push(1.0);
    }
    for s in 1..(1u64 << dims) {
        a.push(
            lifted
                .iter()
                .map(|&(i, v)| if s >> i & 1 == 1 { v as f64 } else { 0.0 })
                .collect(),
        );
        b.push(rank(s) as f64);
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_with_cut() {
        // max y0 + 2 y1 s.t. box, y0 + y1 <= 1.5
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (row, rhs) in [
            (vec![-1.0, 0.0], 0.0),
            (vec![1.0, 0.0], 1.0),
            (vec![0.0, -1.0], 0.0),
            (vec![0.0, 1.0], 1.0),
            (vec![1.0, 1.0], 1.5),
        ] {
            a.push(row);
            b.push(rhs);
        }
        let (v, y) = lp_max_by_vertices(&a, &b, &[1.0, 2.0]);
        assert!((v - 2.5).abs() < 1e-12);
        assert!((y[0] - 0.5).abs() < 1e-12 && (y[1] - 1.0).abs() < 1e-12);
    }
}
