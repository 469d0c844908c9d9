//! P(Z_{n,⌊c√n⌋} = 0) = P(L_n < ⌊c√n⌋), estimated from LIS lengths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::lis::lis_length;
use crate::perm::sample_uniform_permutation;
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRow {
    pub c: f64,
    pub k: usize,
    pub p_zero: f64,
    pub stderr: f64,
}

/// All `c` values share the same `trials` uniform permutations (trial `i` on
/// stream `(master_seed, i)`). Here `k = ⌊c√n⌋` without a floor of one, so
/// `c = 0` gives `k = 0` and probability zero.
pub fn zero_probability_sweep(
    n: usize,
    c_list: &[f64],
    trials: u64,
    master_seed: u64,
    exec: Execution,
) -> Result<Vec<ZeroRow>> {
    if trials < 2 {
        return Err(Error::InvalidParameter("need at least 2 trials".into()));
    }
    if c_list.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
        return Err(Error::InvalidParameter(
            "c values must be finite and nonnegative".into(),
        ));
    }
    let lis: Vec<usize> = map_indexed(exec, trials, |i| {
        sample_uniform_permutation(n, RngStream::new(master_seed, i)).map(|p| lis_length(&p))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let rows = c_list
        .iter()
        .map(|&c| {
            let k = (c * (n as f64).sqrt()).floor() as usize;
            let zeros = lis.iter().filter(|&&l| l < k).count() as f64;
            let p = zeros / trials as f64;
            ZeroRow {
                c,
                k,
                p_zero: p,
                stderr: (p * (1.0 - p) / trials as f64).sqrt(),
            }
        })
        .collect();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_zero_is_exactly_zero() {
        let rows = zero_probability_sweep(100, &[0.0, 1.0, 4.0, 20.0], 200, 9, Execution::Parallel)
            .unwrap();
        assert_eq!(rows[0].k, 0);
        assert_eq!(rows[0].p_zero, 0.0);
        assert_eq!(rows[3].p_zero, 1.0);
        assert!(rows.windows(2).all(|w| w[0].p_zero <= w[1].p_zero));
    }
}
