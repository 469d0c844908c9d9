//! Exact first and second moments of the matched-rank count
//! `T̂ = Σ_{j∈W} 1{X_j = Y_j}` over the middle window
//! `W = ⌊k/4⌋+1 ..= ⌊3k/4⌋−1`, where `X` and `Y` are independent uniform
//! k-subsets of `1..=N`.

use num_rational::BigRational;
use num_traits::Zero;

use super::logvalue::ln_factorial;
use super::position::{insertion_position_pmf_exact, sum_sq_position_pmf};
use crate::error::{Error, Result};
use crate::exec::{map_slice, Execution};

/// Largest `N` accepted by [`exact_second_moment_that`]; the joint-law sum
/// costs `O(|W|²·N²)`.
pub const SECOND_MOMENT_MAX_N: usize = 400;

/// The rank window of `T̂`, or `None` when it is empty (`k ≤ 2`).
pub fn that_window(k: usize) -> Option<(usize, usize)> {
    let lo = k / 4 + 1;
    let hi = (3 * k / 4).checked_sub(1)?;
    (hi >= lo).then_some((lo, hi))
}

fn check(n_total: usize, k: usize) -> Result<()> {
    if k > n_total || n_total == 0 {
        return Err(Error::InvalidParameter(format!(
            "need k <= N, N >= 1; got N = {n_total}, k = {k}"
        )));
    }
    Ok(())
}

/// `E T̂ = Σ_{j∈W} Σ_r P(X_j = r)²`; zero for an empty window.
pub fn exact_expected_that(n_total: usize, k: usize, exec: Execution) -> Result<f64> {
    check(n_total, k)?;
    let Some((lo, hi)) = that_window(k) else {
        return Ok(0.0);
    };
    let js: Vec<usize> = (lo..=hi).collect();
    let terms = map_slice(exec, &js, |&j| sum_sq_position_pmf(n_total, k, j));
    Ok(terms.iter().sum())
}

/// `E T̂` in exact rational arithmetic.
pub fn exact_expected_that_rational(n_total: usize, k: usize) -> Result<BigRational> {
    check(n_total, k)?;
    let Some((lo, hi)) = that_window(k) else {
        return Ok(BigRational::zero());
    };
    let mut total = BigRational::zero();
    for j in lo..=hi {
        for p in insertion_position_pmf_exact(n_total, k, j)? {
            total += &p * &p;
        }
    }
    Ok(total)
}

/// `E T̂² = E T̂ + 2 Σ_{i<j∈W} Σ_{r<r'} P(X_i = r, X_j = r')²`.
pub fn exact_second_moment_that(n_total: usize, k: usize, exec: Execution) -> Result<f64> {
    check(n_total, k)?;
    if n_total > SECOND_MOMENT_MAX_N {
        return Err(Error::OverBudget {
            n: n_total,
            budget: SECOND_MOMENT_MAX_N,
        });
    }
    let first = exact_expected_that(n_total, k, exec)?;
    let Some((lo, hi)) = that_window(k) else {
        return Ok(0.0);
    };
    let ln_fact: Vec<f64> = (0..=n_total).map(|m| ln_factorial(m as f64)).collect();
    let ln_c = |a: usize, b: usize| ln_fact[a] - ln_fact[b] - ln_fact[a - b];
    let ln_total = ln_c(n_total, k);
    let pairs: Vec<(usize, usize)> = (lo..=hi)
        .flat_map(|i| (i + 1..=hi).map(move |j| (i, j)))
        .collect();
    let cross = map_slice(exec, &pairs, |&(i, j)| {
        let mut s = 0.0;
        for r in i..=n_total - k + i {
            let a = ln_c(r - 1, i - 1);
            // r' ranges so that r'−r−1 ≥ j−i−1 and N−r' ≥ k−j
            for r2 in r + (j - i)..=n_total - k + j {
                let ln_p = a + ln_c(r2 - r - 1, j - i - 1) + ln_c(n_total - r2, k - j) - ln_total;
                let p = ln_p.exp();
                s += p * p;
            }
        }
        s
    });
    Ok(first + 2.0 * cross.iter().sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::position::joint_position_pmf;
    use num_traits::ToPrimitive;

    #[test]
    fn windows() {
        assert_eq!(that_window(0), None);
        assert_eq!(that_window(1), None);
        assert_eq!(that_window(2), None);
        assert_eq!(that_window(3), Some((1, 1)));
        assert_eq!(that_window(7), Some((2, 4)));
        assert_eq!(that_window(8), Some((3, 5)));
        assert_eq!(that_window(16), Some((5, 11)));
    }

    #[test]
    fn empty_window_is_zero() {
        assert_eq!(
            exact_expected_that(4, 2, Execution::Sequential).unwrap(),
            0.0
        );
        assert_eq!(
            exact_second_moment_that(4, 2, Execution::Sequential).unwrap(),
            0.0
        );
        assert!(exact_expected_that_rational(4, 2).unwrap().is_zero());
    }

    #[test]
    fn float_matches_rational() {
        for &(n, k) in &[(12usize, 8usize), (30, 11), (60, 24)] {
            let f = exact_expected_that(n, k, Execution::Parallel).unwrap();
            let r = exact_expected_that_rational(n, k)
                .unwrap()
                .to_f64()
                .unwrap();
            assert!(((f - r) / r).abs() < 1e-12);
        }
    }

    #[test]
    fn second_moment_uses_joint_law() {
        let (n, k) = (14, 9);
        let (lo, hi) = that_window(k).unwrap();
        let mut cross = 0.0;
        for i in lo..=hi {
            for j in i + 1..=hi {
                cross += joint_position_pmf(n, k, i, j).unwrap().sum_of_squares();
            }
        }
        let first = exact_expected_that(n, k, Execution::Sequential).unwrap();
        let second = exact_second_moment_that(n, k, Execution::Parallel).unwrap();
        assert!((second - (first + 2.0 * cross)).abs() < 1e-12);
        assert!(second >= first * first);
        assert!(matches!(
            exact_second_moment_that(401, 10, Execution::Sequential),
            Err(Error::OverBudget { .. })
        ));
    }
}
