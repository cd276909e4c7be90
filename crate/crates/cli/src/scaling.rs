//! Least-squares fits for the oracle-call scaling study.

use crate::record::ExperimentRecord;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// `1 - SS_res / SS_tot` with `SS_tot` taken around the mean of `y`.
    pub r_squared: f64,
}

fn r_squared(xs: &[f64], ys: &[f64], slope: f64, intercept: f64) -> f64 {
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    if ss_tot == 0.0 {
        if ss_res == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    }
}

/// Ordinary least squares for `y = slope * x + intercept`.
pub fn fit_affine(xs: &[f64], ys: &[f64]) -> Option<Fit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    Some(Fit {
        slope,
        intercept,
        r_squared: r_squared(xs, ys, slope, intercept),
    })
}

/// Least squares for `y = slope * x` (no intercept).
pub fn fit_proportional(xs: &[f64], ys: &[f64]) -> Option<Fit> {
    if xs.len() != ys.len() || xs.is_empty() {
        return None;
    }
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = xs.iter().zip(ys).map(|(x, y)| x * y).sum::<f64>() / sxx;
    Some(Fit {
        slope,
        intercept: 0.0,
        r_squared: r_squared(xs, ys, slope, 0.0),
    })
}

/// Fits of the comparison records: log-reduction calls against `log2 B`
/// (affine), naive-copies calls against `B` (proportional).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingSummary {
    pub log_fit: Option<Fit>,
    pub naive_fit: Option<Fit>,
    /// Log-mode calls over naive-mode calls at the largest budget.
    pub ratio_at_max: Option<f64>,
}

pub fn summarize(points: &[(u64, ExperimentRecord)]) -> ScalingSummary {
    let series = |mode: &str| -> Vec<(u64, f64)> {
        points
            .iter()
            .filter(|(_, r)| r.mode == mode)
            .map(|(b, r)| (*b, r.oracle_calls as f64))
            .collect()
    };
    let log = series("exact-log");
    let naive = series("naive-copies");
    let (lx, ly): (Vec<f64>, Vec<f64>) = log.iter().map(|(b, c)| ((*b as f64).log2(), *c)).unzip();
    let (nx, ny): (Vec<f64>, Vec<f64>) = naive.iter().map(|(b, c)| (*b as f64, *c)).unzip();
    let max_b = points.iter().map(|(b, _)| *b).max();
    let at = |s: &[(u64, f64)]| s.iter().find(|(b, _)| Some(*b) == max_b).map(|(_, c)| *c);
    let ratio_at_max = match (at(&log), at(&naive)) {
        (Some(l), Some(n)) if n > 0.0 => Some(l / n),
        _ => None,
    };
    ScalingSummary {
        log_fit: fit_affine(&lx, &ly),
        naive_fit: fit_proportional(&nx, &ny),
        ratio_at_max,
    }
}

impl std::fmt::Display for ScalingSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.log_fit {
            Some(fit) => writeln!(
                f,
                "exact-log: calls = {:.3} * log2(B) + {:.3}, R^2 = {:.6}",
                fit.slope, fit.intercept, fit.r_squared
            )?,
            None => writeln!(f, "exact-log: not enough budgets to fit")?,
        }
        match self.naive_fit {
            Some(fit) => writeln!(
                f,
                "naive-copies: calls = {:.3} * B, R^2 = {:.6}",
                fit.slope, fit.r_squared
            )?,
            None => writeln!(f, "naive-copies: not enough budgets to fit")?,
        }
        if let Some(r) = self.ratio_at_max {
            writeln!(f, "log/naive calls at largest budget: {:.6}", r)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_lines_have_unit_r_squared() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.0).collect();
        let f = fit_affine(&xs, &ys).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x).collect();
        let f = fit_proportional(&xs, &ys).unwrap();
        assert!((f.slope - 2.5).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noisy_fit_by_hand() {
        // y = (1, 3, 2): slope 0.5, intercept 1.5, residuals (-0.5, 1, -0.5).
        let f = fit_affine(&[0.0, 1.0, 2.0], &[1.0, 3.0, 2.0]).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-12 && (f.intercept - 1.5).abs() < 1e-12);
        assert!((f.r_squared - 0.25).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_affine(&[1.0], &[1.0]).is_none());
        assert!(fit_affine(&[2.0, 2.0], &[1.0, 3.0]).is_none());
        assert!(fit_proportional(&[0.0], &[1.0]).is_none());
    }
}
