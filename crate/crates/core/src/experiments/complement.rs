//! LIS of the complement values under a conditioned measure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::lis::{lis_length, lis_length_masked};
use crate::measures::sample_conditioned_with;
use crate::perm::sample_k_subset_with;
use crate::rng::RngStream;
use crate::stats::RunningMoments;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplementRow {
    pub gamma: f64,
    /// `2√r − γ·r^{1/6}`, `r = n − k`
    pub threshold: f64,
    /// Frequency of `L_{n;y} ≥ threshold`.
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplementReport {
    pub n: usize,
    pub k: usize,
    pub trials: u64,
    pub mean_complement_lis: f64,
    pub mean_full_lis: f64,
    pub rows: Vec<ComplementRow>,
    /// Trials where the complement LIS exceeded the full LIS; always zero.
    pub monotonicity_violations: u64,
}

/// Each trial draws a uniform value set `x` of size `k`, a permutation from
/// the measure conditioned on `x` being increasing, and measures the LIS
/// using only the other `r = n − k` values.
pub fn complement_lis_check(
    n: usize,
    k: usize,
    trials: u64,
    master_seed: u64,
    gammas: &[f64],
    exec: Execution,
) -> Result<ComplementReport> {
    if trials < 2 {
        return Err(Error::InvalidParameter("need at least 2 trials".into()));
    }
    if k >= n {
        return Err(Error::InvalidParameter(format!(
            "need k < n, got n = {n}, k = {k}"
        )));
    }
    let draws = map_indexed(exec, trials, |i| -> Result<(usize, usize)> {
        let mut rng = RngStream::new(master_seed, i).rng();
        let x = sample_k_subset_with(n, k, &mut rng)?;
        let p = sample_conditioned_with(n, &x.elements, &mut rng)?;
        let keep: Vec<bool> = x.mask().into_iter().map(|m| !m).collect();
        Ok((lis_length_masked(&p, &keep), lis_length(&p)))
    });
    let mut comp = Vec::with_capacity(trials as usize);
    let mut full = RunningMoments::default();
    let mut violations = 0;
    for d in draws {
        let (c, f) = d?;
        if c > f {
            violations += 1;
        }
        comp.push(c);
        full.push(f as f64);
    }
    let r = (n - k) as f64;
    let rows = gammas
        .iter()
        .map(|&gamma| {
            let threshold = 2.0 * r.sqrt() - gamma * r.powf(1.0 / 6.0);
            let hits = comp.iter().filter(|&&l| l as f64 >= threshold).count();
            ComplementRow {
                gamma,
                threshold,
                frequency: hits as f64 / trials as f64,
            }
        })
        .collect();
    let mean_c: RunningMoments = comp.iter().map(|&l| l as f64).collect();
    Ok(ComplementReport {
        n,
        k,
        trials,
        mean_complement_lis: mean_c.mean(),
        mean_full_lis: full.mean(),
        rows,
        monotonicity_violations: violations,
    })
}
