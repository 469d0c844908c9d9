//! Law of the j-th smallest element of a uniform k-subset of `1..=N`:
//!
//! `P(X_j = r) = C(r−1, j−1)·C(N−r, k−j) / C(N, k)`, `r ∈ j..=N−k+j`.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::logvalue::ln_binomial;
use crate::error::{Error, Result};

/// Pmf of the j-th selected position; `pmf[i]` is `P(X_j = support_start + i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionLaw {
    pub n_total: usize,
    pub k: usize,
    pub j: usize,
    pub support_start: usize,
    pub pmf: Vec<f64>,
}

impl PositionLaw {
    pub fn support_end(&self) -> usize {
        self.support_start + self.pmf.len() - 1
    }

    /// `P(X_j = r)`, zero off the support.
    pub fn prob(&self, r: usize) -> f64 {
        r.checked_sub(self.support_start)
            .and_then(|i| self.pmf.get(i).copied())
            .unwrap_or(0.0)
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.pmf.iter().map(|p| p * p).sum()
    }

    pub fn argmax(&self) -> (usize, f64) {
        let (i, p) =
            self.pmf.iter().enumerate().fold(
                (0, f64::MIN),
                |best, (i, &p)| if p > best.1 { (i, p) } else { best },
            );
        (self.support_start + i, p)
    }
}

pub(crate) fn check_njk(n_total: usize, k: usize, j: usize) -> Result<()> {
    if !(1 <= j && j <= k && k <= n_total) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= j <= k <= N, got N = {n_total}, k = {k}, j = {j}"
        )));
    }
    Ok(())
}

/// ln P(X_j = r) via log-gamma.
pub fn ln_position_prob(n_total: usize, k: usize, j: usize, r: usize) -> f64 {
    if r < j || r + k > n_total + j {
        return f64::NEG_INFINITY;
    }
    let (nf, kf, jf, rf) = (n_total as f64, k as f64, j as f64, r as f64);
    ln_binomial(rf - 1.0, jf - 1.0) + ln_binomial(nf - rf, kf - jf) - ln_binomial(nf, kf)
}

/// `P(X_{j} = r+1) / P(X_{j} = r)`.
fn step_ratio(nf: f64, kf: f64, jf: f64, r: usize) -> f64 {
    let rf = r as f64;
    rf * (nf - rf - kf + jf) / ((rf - jf + 1.0) * (nf - rf))
}

/// The full pmf. Relative weights come from the ratio recurrence walked
/// outwards from the mode and are normalized by their sum, which avoids the
/// ~1e-13 error of differencing log-gammas.
pub fn insertion_position_pmf(n_total: usize, k: usize, j: usize) -> Result<PositionLaw> {
    check_njk(n_total, k, j)?;
    let lo = j;
    let hi = n_total - k + j;
    let mode = mode_of(n_total, k, j).clamp(lo, hi);
    let (nf, kf, jf) = (n_total as f64, k as f64, j as f64);
    let mut w = vec![0.0; hi - lo + 1];
    w[mode - lo] = 1.0;
    for r in mode..hi {
        w[r + 1 - lo] = w[r - lo] * step_ratio(nf, kf, jf, r);
    }
    for r in (lo..mode).rev() {
        w[r - lo] = w[r + 1 - lo] / step_ratio(nf, kf, jf, r);
    }
    let total: f64 = w.iter().sum();
    let pmf = w.into_iter().map(|x| x / total).collect();
    Ok(PositionLaw {
        n_total,
        k,
        j,
        support_start: j,
        pmf,
    })
}

/// The pmf as exact rationals, indexed like [`PositionLaw::pmf`].
pub fn insertion_position_pmf_exact(
    n_total: usize,
    k: usize,
    j: usize,
) -> Result<Vec<BigRational>> {
    check_njk(n_total, k, j)?;
    let c = |a: usize, b: usize| BigInt::from(binomial(BigUint::from(a), BigUint::from(b)));
    let total = c(n_total, k);
    Ok((j..=n_total - k + j)
        .map(|r| BigRational::new(c(r - 1, j - 1) * c(n_total - r, k - j), total.clone()))
        .collect())
}

/// Σ_r P(X_j = r)². Starts at the mode and walks outwards with the ratio
/// `P(r+1)/P(r) = r(N−r−k+j) / ((r−j+1)(N−r))`, stopping once terms fall
/// below `1e-20` of the peak; the law is unimodal so both tails only shrink.
/// Weights are normalized by their own sum.
pub fn sum_sq_position_pmf(n_total: usize, k: usize, j: usize) -> f64 {
    let lo = j;
    let hi = n_total - k + j;
    let mode = mode_of(n_total, k, j).clamp(lo, hi);
    let (nf, kf, jf) = (n_total as f64, k as f64, j as f64);
    let cutoff = 1e-20;
    let (mut sum, mut sum_sq) = (1.0, 1.0);

    let mut w = 1.0;
    for r in mode..hi {
        w *= step_ratio(nf, kf, jf, r);
        if w < cutoff {
            break;
        }
        sum += w;
        sum_sq += w * w;
    }
    let mut w = 1.0;
    for r in (lo..mode).rev() {
        w /= step_ratio(nf, kf, jf, r);
        if w < cutoff {
            break;
        }
        sum += w;
        sum_sq += w * w;
    }
    sum_sq / (sum * sum)
}

fn mode_of(n_total: usize, k: usize, j: usize) -> usize {
    if j == 1 {
        1
    } else {
        h_argmax_unchecked(n_total, k, j)
    }
}

/// Maximizer of `H(r) = C(r−1, j−1)·C(N−r, k−j)`. The real solution of
/// `H(r)/H(r−1) = 1` is `1 + (j−1)N/(k−1)`, so the integer maximum sits in
/// `[(j−1)N/(k−1), (j−1)N/(k−1) + 2]`; the candidates there are compared
/// directly. `j = 1` gives `r0 = 1`. Ties resolve to the smaller `r`.
pub fn h_argmax(n_total: usize, k: usize, j: usize) -> Result<usize> {
    check_njk(n_total, k, j)?;
    Ok(mode_of(n_total, k, j))
}

fn h_argmax_unchecked(n_total: usize, k: usize, j: usize) -> usize {
    let x = (j - 1) as f64 * n_total as f64 / (k - 1) as f64;
    let lo = (x.floor() as usize).max(j);
    let hi = ((x + 2.0).ceil() as usize).min(n_total - k + j);
    let ln_h = |r: usize| {
        ln_binomial((r - 1) as f64, (j - 1) as f64)
            + ln_binomial((n_total - r) as f64, (k - j) as f64)
    };
    let mut best = lo.min(hi);
    let mut best_v = ln_h(best);
    for r in best + 1..=hi {
        let v = ln_h(r);
        if v > best_v {
            best = r;
            best_v = v;
        }
    }
    best
}

/// Joint law of `(X_i, X_j)` for `i < j`, dense over `r, r' ∈ 1..=N`
/// (zero unless `r < r'`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointLaw {
    pub n_total: usize,
    pub k: usize,
    pub i: usize,
    pub j: usize,
    /// Row-major `(r−1)·N + (r'−1)`.
    pub probs: Vec<f64>,
}

impl JointLaw {
    pub fn prob(&self, r: usize, r2: usize) -> f64 {
        if r == 0 || r2 == 0 || r > self.n_total || r2 > self.n_total {
            return 0.0;
        }
        self.probs[(r - 1) * self.n_total + (r2 - 1)]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Σ_{r'} P(X_i = r, X_j = r') for each `r ∈ 1..=N`.
    pub fn marginal_first(&self) -> Vec<f64> {
        self.probs
            .chunks(self.n_total)
            .map(|row| row.iter().sum())
            .collect()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.probs.iter().map(|p| p * p).sum()
    }
}

/// `P(X_i = r, X_j = r') = C(r−1,i−1)·C(r'−r−1,j−i−1)·C(N−r',k−j)/C(N,k)`.
pub fn joint_position_pmf(n_total: usize, k: usize, i: usize, j: usize) -> Result<JointLaw> {
    check_njk(n_total, k, j)?;
    if !(1 <= i && i < j) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= i < j, got i = {i}, j = {j}"
        )));
    }
    let n = n_total;
    let mut probs = vec![0.0; n * n];
    let ln_total = ln_binomial(n as f64, k as f64);
    for r in i..=n {
        let a = ln_binomial((r - 1) as f64, (i - 1) as f64);
        if a == f64::NEG_INFINITY {
            continue;
        }
        for r2 in r + 1..=n {
            let b = ln_binomial((r2 - r - 1) as f64, (j - i - 1) as f64);
            let c = ln_binomial((n - r2) as f64, (k - j) as f64);
            let ln_p = a + b + c - ln_total;
            if ln_p > f64::NEG_INFINITY {
                probs[(r - 1) * n + (r2 - 1)] = ln_p.exp();
            }
        }
    }
    Ok(JointLaw {
        n_total,
        k,
        i,
        j,
        probs,
    })
}

/// Largest point mass of the j-th position law against the scale
/// `k / (min(j, k−j+1)^{1/2} · N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub n_total: usize,
    pub k: usize,
    pub j: usize,
    pub argmax: usize,
    pub max_pmf: f64,
    pub bound_scale: f64,
    pub ratio: f64,
}

pub fn pmf_bound_check(n_total: usize, k: usize, j: usize) -> Result<BoundCheck> {
    check_njk(n_total, k, j)?;
    // By the reflection r -> N+1-r the law for j matches the one for k-j+1;
    // scanning from the side with the smaller rank keeps j = 1 exact.
    let (jj, reflected) = if k - j + 1 < j {
        (k - j + 1, true)
    } else {
        (j, false)
    };
    let r0 = mode_of(n_total, k, jj);
    let max_pmf = if jj == 1 {
        k as f64 / n_total as f64
    } else {
        ln_position_prob(n_total, k, jj, r0).exp()
    };
    let argmax = if reflected { n_total + 1 - r0 } else { r0 };
    let bound_scale = k as f64 / ((jj as f64).sqrt() * n_total as f64);
    Ok(BoundCheck {
        n_total,
        k,
        j,
        argmax,
        max_pmf,
        bound_scale,
        ratio: max_pmf / bound_scale,
    })
}
