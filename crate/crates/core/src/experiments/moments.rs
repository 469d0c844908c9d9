use serde::{Deserialize, Serialize};

use super::card::matched_only;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::rng::RngStream;
use crate::stats::RunningMoments;

/// Monte Carlo first and second moments of `T̂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub s: usize,
    pub k: usize,
    pub n_total: usize,
    pub trials: u64,
    pub mean: f64,
    pub mean_stderr: f64,
    pub second_moment: f64,
    pub second_stderr: f64,
}

/// Trial `i` runs on stream `(master_seed, i)` with the same draws as the
/// card experiment.
pub fn estimate_that_moments(
    s: usize,
    k: usize,
    trials: u64,
    master_seed: u64,
    exec: Execution,
) -> Result<MomentEstimate> {
    if trials < 2 {
        return Err(Error::InvalidParameter("need at least 2 trials".into()));
    }
    if s + k == 0 {
        return Err(Error::InvalidParameter("s + k must be at least 1".into()));
    }
    let draws = map_indexed(exec, trials, |i| {
        matched_only(s, k, RngStream::new(master_seed, i))
    });
    let mut first = RunningMoments::default();
    let mut second = RunningMoments::default();
    for d in draws {
        let t_hat = d?.1 as f64;
        first.push(t_hat);
        second.push(t_hat * t_hat);
    }
    Ok(MomentEstimate {
        s,
        k,
        n_total: s + k,
        trials,
        mean: first.mean(),
        mean_stderr: first.stderr(),
        second_moment: second.mean(),
        second_stderr: second.stderr(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_k_has_empty_window() {
        let m = estimate_that_moments(20, 2, 500, 1, Execution::Parallel).unwrap();
        assert_eq!((m.mean, m.second_moment, m.mean_stderr), (0.0, 0.0, 0.0));
        assert!(estimate_that_moments(20, 2, 1, 1, Execution::Parallel).is_err());
    }
}
