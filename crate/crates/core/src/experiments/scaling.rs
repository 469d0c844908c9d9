//! `E T̂` against the scale `k^{3/2}/N` over a grid of `N` with `k = ⌊N^λ⌋`.

use serde::{Deserialize, Serialize};

use super::moments::estimate_that_moments;
use crate::analytics::that::{exact_expected_that, exact_second_moment_that, SECOND_MOMENT_MAX_N};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rng::RngStream;
use crate::stats::log_log_fit;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub n_grid: Vec<usize>,
    pub lambdas: Vec<f64>,
    /// Trials per cell when the second moment is estimated by simulation.
    pub mc_trials: u64,
    pub master_seed: u64,
    /// Cells up to this `N` get the exact joint-law second moment.
    pub exact_second_max_n: usize,
}

impl ScalingConfig {
    pub fn new(n_grid: Vec<usize>, lambdas: Vec<f64>, mc_trials: u64, master_seed: u64) -> Self {
        Self {
            n_grid,
            lambdas,
            mc_trials,
            master_seed,
            exact_second_max_n: SECOND_MOMENT_MAX_N,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n_total: usize,
    pub lambda: f64,
    pub k: usize,
    pub s: usize,
    /// Exact `E T̂`.
    pub e_that: f64,
    /// `E T̂ / (k^{3/2}/N)`
    pub ratio: f64,
    pub second_moment: f64,
    /// Zero when exact.
    pub second_stderr: f64,
    pub second_exact: bool,
    /// `E T̂² · N² / k³`
    pub second_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Per `N`: slope of `ln E T̂` against `ln k` across the λ grid.
    pub slopes: Vec<(usize, f64)>,
    /// Per λ: `max ratio / min ratio` across the `N` grid.
    pub ratio_spread: Vec<(f64, f64)>,
    /// Largest `E T̂² · N² / k³` over all cells.
    pub max_second_ratio: f64,
}

pub fn scaling_study(config: &ScalingConfig, exec: Execution) -> Result<ScalingReport> {
    if config.n_grid.is_empty() || config.lambdas.is_empty() {
        return Err(Error::InvalidParameter("scaling grid is empty".into()));
    }
    let mut rows = Vec::new();
    let mut cell = 0u64;
    for &n in &config.n_grid {
        for &lambda in &config.lambdas {
            if !(lambda > 0.0 && lambda < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "λ = {lambda} outside (0, 1)"
                )));
            }
            let k = ((n as f64).powf(lambda).floor() as usize).clamp(1, n);
            let e_that = exact_expected_that(n, k, exec)?;
            let (second_moment, second_stderr, second_exact) = if n <= config.exact_second_max_n {
                (exact_second_moment_that(n, k, exec)?, 0.0, true)
            } else {
                let seed = RngStream::new(config.master_seed, cell).fork_seed();
                let m = estimate_that_moments(n - k, k, config.mc_trials, seed, exec)?;
                (m.second_moment, m.second_stderr, false)
            };
            let kf = k as f64;
            let nf = n as f64;
            rows.push(ScalingRow {
                n_total: n,
                lambda,
                k,
                s: n - k,
                e_that,
                ratio: e_that * nf / kf.powf(1.5),
                second_moment,
                second_stderr,
                second_exact,
                second_ratio: second_moment * nf * nf / (kf * kf * kf),
            });
            cell += 1;
        }
    }

    let slopes = config
        .n_grid
        .iter()
        .filter_map(|&n| {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.n_total == n)
                .map(|r| (r.k as f64, r.e_that))
                .collect();
            log_log_fit(&pts).map(|(slope, _)| (n, slope))
        })
        .collect();
    let ratio_spread = config
        .lambdas
        .iter()
        .map(|&l| {
            let rs: Vec<f64> = rows
                .iter()
                .filter(|r| r.lambda == l && r.ratio > 0.0)
                .map(|r| r.ratio)
                .collect();
            let hi = rs.iter().cloned().fold(f64::MIN, f64::max);
            let lo = rs.iter().cloned().fold(f64::MAX, f64::min);
            (l, if rs.is_empty() { f64::NAN } else { hi / lo })
        })
        .collect();
    let max_second_ratio = rows.iter().map(|r| r.second_ratio).fold(0.0, f64::max);
    Ok(ScalingReport {
        rows,
        slopes,
        ratio_spread,
        max_second_ratio,
    })
}
