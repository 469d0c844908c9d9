//! L_n under the uniform measure against L_n under μ_{n;k}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::lis::lis_length;
use crate::measures::{sample_mu_with, AdulterationSpec};
use crate::perm::sample_uniform_permutation_with;
use crate::rng::RngStream;
use crate::stats::{quantile, RunningMoments};

pub const REPORTED_QUANTILES: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LisSummary {
    pub mean: f64,
    pub stderr: f64,
    pub min: usize,
    pub max: usize,
    /// Paired with [`REPORTED_QUANTILES`].
    pub quantiles: Vec<f64>,
}

impl LisSummary {
    fn from_samples(samples: &[usize]) -> Self {
        let moments: RunningMoments = samples.iter().map(|&l| l as f64).collect();
        let mut sorted: Vec<f64> = samples.iter().map(|&l| l as f64).collect();
        sorted.sort_by(f64::total_cmp);
        Self {
            mean: moments.mean(),
            stderr: moments.stderr(),
            min: samples.iter().copied().min().unwrap_or(0),
            max: samples.iter().copied().max().unwrap_or(0),
            quantiles: REPORTED_QUANTILES
                .iter()
                .map(|&q| quantile(&sorted, q))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceedanceRow {
    pub c: f64,
    /// `2√n + c·n^{1/6}`
    pub threshold: f64,
    /// Frequency of `L_n > threshold` under each measure.
    pub uniform: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LisShiftReport {
    pub n: usize,
    pub k: usize,
    pub trials: u64,
    pub uniform: LisSummary,
    pub mu: LisSummary,
    pub exceedance: Vec<ExceedanceRow>,
    /// Misclassification rate of the rule "adulterated iff L_n ≥ k" with
    /// equal numbers of samples from both measures.
    pub classifier_error: f64,
    /// Count of μ samples with `L_n < k`; always zero.
    pub mu_below_k: u64,
}

/// Trial `i` draws its uniform sample from stream `(seed, 2i)` and its
/// μ sample from `(seed, 2i + 1)`.
pub fn lis_shift_experiment(
    n: usize,
    k: usize,
    trials: u64,
    master_seed: u64,
    c_grid: &[f64],
    exec: Execution,
) -> Result<LisShiftReport> {
    if trials < 2 {
        return Err(Error::InvalidParameter("need at least 2 trials".into()));
    }
    let spec = AdulterationSpec::new(n, k)?;
    let pairs = map_indexed(exec, trials, |i| -> Result<(usize, usize)> {
        let mut rng_u = RngStream::new(master_seed, 2 * i).rng();
        let mut rng_mu = RngStream::new(master_seed, 2 * i + 1).rng();
        let u = lis_length(&sample_uniform_permutation_with(n, &mut rng_u)?);
        let m = lis_length(&sample_mu_with(spec, &mut rng_mu));
        Ok((u, m))
    });
    let mut lu = Vec::with_capacity(trials as usize);
    let mut lm = Vec::with_capacity(trials as usize);
    for p in pairs {
        let (u, m) = p?;
        lu.push(u);
        lm.push(m);
    }
    let nf = n as f64;
    let exceedance = c_grid
        .iter()
        .map(|&c| {
            let threshold = 2.0 * nf.sqrt() + c * nf.powf(1.0 / 6.0);
            let freq = |v: &[usize]| {
                v.iter().filter(|&&l| l as f64 > threshold).count() as f64 / trials as f64
            };
            ExceedanceRow {
                c,
                threshold,
                uniform: freq(&lu),
                mu: freq(&lm),
            }
        })
        .collect();
    let false_pos = lu.iter().filter(|&&l| l >= k).count();
    let false_neg = lm.iter().filter(|&&l| l < k).count();
    Ok(LisShiftReport {
        n,
        k,
        trials,
        uniform: LisSummary::from_samples(&lu),
        mu: LisSummary::from_samples(&lm),
        exceedance,
        classifier_error: (false_pos + false_neg) as f64 / (2 * trials) as f64,
        mu_below_k: false_neg as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_dominates() {
        let rep =
            lis_shift_experiment(400, 60, 200, 3, &[-2.0, 0.0, 2.0], Execution::Parallel).unwrap();
        assert_eq!(rep.mu_below_k, 0);
        assert!(rep.mu.min >= 60);
        assert!(rep.mu.mean > rep.uniform.mean);
        for w in rep.exceedance.windows(2) {
            assert!(w[0].uniform >= w[1].uniform);
        }
    }
}
