//! Small statistics helpers shared by the experiments.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Welford accumulator. Feeding the same values in the same order gives
/// bit-identical results.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        (self.variance() / self.count as f64).sqrt()
    }
}

impl FromIterator<f64> for RunningMoments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = RunningMoments::default();
        for x in iter {
            m.push(x);
        }
        m
    }
}

/// Empirical quantile with linear interpolation between order statistics.
/// `sorted` must be ascending and nonempty.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Pearson statistic for `observed` counts against cell probabilities.
/// Cells with zero probability must have zero observations (else +inf).
pub fn chi_square_statistic(observed: &[u64], probs: &[f64]) -> f64 {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let mut stat = 0.0;
    for (&o, &p) in observed.iter().zip(probs) {
        let e = p * total as f64;
        if e == 0.0 {
            if o > 0 {
                return f64::INFINITY;
            }
            continue;
        }
        let d = o as f64 - e;
        stat += d * d / e;
    }
    stat
}

/// Upper-`alpha` critical value of the chi-square law with `df` degrees of
/// freedom.
pub fn chi_square_critical(df: usize, alpha: f64) -> f64 {
    let dist = ChiSquared::new(df as f64).expect("df > 0");
    dist.inverse_cdf(1.0 - alpha)
}

/// Result of a chi-square goodness-of-fit test after pooling sparse cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub df: usize,
    pub critical: f64,
    pub pass: bool,
}

/// Goodness-of-fit at level `alpha`. Adjacent cells are merged left to right
/// until each pooled cell expects at least `min_expected` observations.
pub fn chi_square_test(
    observed: &[u64],
    probs: &[f64],
    alpha: f64,
    min_expected: f64,
) -> ChiSquareTest {
    let total: u64 = observed.iter().sum();
    let mut pooled_o = Vec::new();
    let mut pooled_p = Vec::new();
    let (mut acc_o, mut acc_p) = (0u64, 0.0f64);
    for (&o, &p) in observed.iter().zip(probs) {
        acc_o += o;
        acc_p += p;
        if acc_p * total as f64 >= min_expected {
            pooled_o.push(acc_o);
            pooled_p.push(acc_p);
            acc_o = 0;
            acc_p = 0.0;
        }
    }
    if acc_o > 0 || acc_p > 0.0 {
        match (pooled_o.last_mut(), pooled_p.last_mut()) {
            (Some(lo), Some(lp)) => {
                *lo += acc_o;
                *lp += acc_p;
            }
            _ => {
                pooled_o.push(acc_o);
                pooled_p.push(acc_p);
            }
        }
    }
    let df = pooled_o.len().saturating_sub(1).max(1);
    let statistic = chi_square_statistic(&pooled_o, &pooled_p);
    let critical = chi_square_critical(df, alpha);
    ChiSquareTest {
        statistic,
        df,
        critical,
        pass: statistic <= critical,
    }
}

/// Least-squares slope and intercept of `ln y` against `ln x`.
pub fn log_log_fit(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments() {
        let m: RunningMoments = [1.0, 2.0, 3.0, 4.0].into_iter().collect();
        assert_eq!(m.mean(), 2.5);
        assert!((m.variance() - 5.0 / 3.0).abs() < 1e-15);
        assert!((m.stderr() - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile(&v, 0.5), 3.0);
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 0.125), 1.5);
    }

    #[test]
    fn chi_square_critical_values() {
        // Tabulated: χ²_{0.999}(1) = 10.828, χ²_{0.999}(5) = 20.515.
        assert!((chi_square_critical(1, 0.001) - 10.828).abs() < 1e-3);
        assert!((chi_square_critical(5, 0.001) - 20.515).abs() < 1e-3);
    }

    #[test]
    fn pooling() {
        let t = chi_square_test(&[50, 50, 0, 0], &[0.5, 0.49, 0.005, 0.005], 0.001, 5.0);
        assert_eq!(t.df, 1);
        assert!(t.pass);
    }

    #[test]
    fn slope() {
        let pts: Vec<(f64, f64)> = (1..6)
            .map(|i| (i as f64, 3.0 * (i as f64).powf(1.5)))
            .collect();
        let (s, c) = log_log_fit(&pts).unwrap();
        assert!((s - 1.5).abs() < 1e-12);
        assert!((c - 3f64.ln()).abs() < 1e-12);
    }
}
