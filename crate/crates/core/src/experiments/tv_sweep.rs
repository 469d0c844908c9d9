//! Total variation between μ_{n;k} and the uniform measure over an `(n, k)`
//! grid: exact up to the enumeration budget, Monte Carlo beyond.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::{k_from_rule, KRule};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::measures::{
    exact_tv_all_k, tv_monte_carlo, AdulterationSpec, TvEstimate, DEFAULT_ENUM_BUDGET,
};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvSweepConfig {
    pub n_grid: Vec<usize>,
    pub k_rules: Vec<KRule>,
    pub trials: u64,
    pub master_seed: u64,
    pub enum_budget: usize,
    /// Also run Monte Carlo on cells that are enumerated exactly.
    pub overlap: bool,
}

impl TvSweepConfig {
    pub fn new(n_grid: Vec<usize>, k_rules: Vec<KRule>, trials: u64, master_seed: u64) -> Self {
        Self {
            n_grid,
            k_rules,
            trials,
            master_seed,
            enum_budget: DEFAULT_ENUM_BUDGET,
            overlap: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvSweepRow {
    pub n: usize,
    pub k: usize,
    pub rule: KRule,
    pub exact: Option<TvEstimate>,
    pub monte_carlo: Option<TvEstimate>,
    /// `|mc − exact| ≤ 3·stderr` where both ran.
    pub agree_within_3se: Option<bool>,
}

impl TvSweepRow {
    /// The exact value when available, else the estimate.
    pub fn best(&self) -> &TvEstimate {
        self.exact
            .as_ref()
            .or(self.monte_carlo.as_ref())
            .expect("row has a value")
    }
}

/// Cell `c` (row-major over `n_grid × k_rules`) runs its Monte Carlo on
/// `RngStream(master_seed, c)`.
pub fn tv_sweep(config: &TvSweepConfig, exec: Execution) -> Result<Vec<TvSweepRow>> {
    if config.n_grid.is_empty() || config.k_rules.is_empty() {
        return Err(Error::InvalidParameter("tv sweep grid is empty".into()));
    }
    let mut exact_cache: BTreeMap<usize, Vec<TvEstimate>> = BTreeMap::new();
    let mut rows = Vec::new();
    let mut cell = 0u64;
    for &n in &config.n_grid {
        for &rule in &config.k_rules {
            let k = k_from_rule(rule, n)?;
            let spec = AdulterationSpec::new(n, k)?;
            let exact = if n <= config.enum_budget {
                if let Entry::Vacant(slot) = exact_cache.entry(n) {
                    let all = exact_tv_all_k(n, config.enum_budget, exec)?;
                    slot.insert(all.into_iter().map(|e| e.estimate).collect());
                }
                Some(exact_cache[&n][k].clone())
            } else {
                None
            };
            let monte_carlo = if exact.is_none() || config.overlap {
                Some(tv_monte_carlo(
                    spec,
                    config.trials,
                    RngStream::new(config.master_seed, cell),
                    exec,
                )?)
            } else {
                None
            };
            let agree_within_3se = match (&exact, &monte_carlo) {
                (Some(e), Some(m)) => Some((m.value - e.value).abs() <= 3.0 * m.stderr + 1e-15),
                _ => None,
            };
            rows.push(TvSweepRow {
                n,
                k,
                rule,
                exact,
                monte_carlo,
                agree_within_3se,
            });
            cell += 1;
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k1_cells_are_zero_and_overlap_agrees() {
        let mut cfg = TvSweepConfig::new(
            vec![5, 7, 12],
            vec![KRule::Explicit { k: 1 }, KRule::Power { c: 1.0, l: 0.5 }],
            3000,
            8,
        );
        cfg.overlap = true;
        let rows = tv_sweep(&cfg, Execution::Parallel).unwrap();
        assert_eq!(rows.len(), 6);
        for r in &rows {
            if r.k == 1 {
                assert_eq!(r.best().value, 0.0);
            }
            if let Some(ok) = r.agree_within_3se {
                assert!(ok, "{r:?}");
            }
        }
        assert!(rows[4].exact.is_none());
    }
}
