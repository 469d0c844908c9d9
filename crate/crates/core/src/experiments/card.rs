//! The two-row card experiment.
//!
//! Row one holds cards `1..=N` in order (`N = s + k`). Choose `k` places `X`
//! in row one and `k` places `Y` in row two, independently and uniformly. The
//! cards at `X` go to the places `Y` in increasing order; the other `s` cards
//! fill the remaining places of row two in increasing order. Wherever
//! `X_j = Y_j` the card `X_j` lands on its own index, and those fixed points
//! together with the `s` unselected cards form an increasing subsequence of
//! length `s + T`, `T = #{j : X_j = Y_j}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analytics::that::that_window;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::lis::lis_of_slice;
use crate::perm::{sample_k_subset_with, SubsetPositions};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardExperimentResult {
    pub s: usize,
    pub k: usize,
    pub n_total: usize,
    /// Places chosen in row one (equivalently, the selected cards).
    pub x: Vec<usize>,
    /// Places chosen in row two.
    pub y: Vec<usize>,
    /// `z_flags[j-1] = (X_j == Y_j)`
    pub z_flags: Vec<bool>,
    pub t: usize,
    pub t_hat: usize,
    /// Row two in one-line notation.
    pub row: Vec<usize>,
    pub verified_lis: usize,
}

/// Draws `(X, Y)` in a fixed order from `rng`.
fn draw_places<R: Rng + ?Sized>(
    n_total: usize,
    k: usize,
    rng: &mut R,
) -> Result<(SubsetPositions, SubsetPositions)> {
    let x = sample_k_subset_with(n_total, k, rng)?;
    let y = sample_k_subset_with(n_total, k, rng)?;
    Ok((x, y))
}

fn matched_counts(x: &[usize], y: &[usize], k: usize) -> (Vec<bool>, usize, usize) {
    let flags: Vec<bool> = x.iter().zip(y).map(|(a, b)| a == b).collect();
    let t = flags.iter().filter(|&&f| f).count();
    let t_hat = match that_window(k) {
        Some((lo, hi)) => flags[lo - 1..hi].iter().filter(|&&f| f).count(),
        None => 0,
    };
    (flags, t, t_hat)
}

/// One trial; fails with [`Error::ConstructionViolated`] if the row's LIS
/// is ever below `s + T`.
pub fn run_card_experiment(s: usize, k: usize, stream: RngStream) -> Result<CardExperimentResult> {
    let n_total = s + k;
    if n_total == 0 {
        return Err(Error::InvalidParameter("s + k must be at least 1".into()));
    }
    let mut rng = stream.rng();
    let (x, y) = draw_places(n_total, k, &mut rng)?;

    let mut row = vec![0usize; n_total];
    for (&place, &card) in y.elements.iter().zip(&x.elements) {
        row[place - 1] = card;
    }
    for (place, card) in y.complement().into_iter().zip(x.complement()) {
        row[place - 1] = card;
    }

    let (z_flags, t, t_hat) = matched_counts(&x.elements, &y.elements, k);
    let verified_lis = lis_of_slice(&row);
    if verified_lis < s + t {
        return Err(Error::ConstructionViolated {
            lis: verified_lis,
            bound: s + t,
        });
    }
    Ok(CardExperimentResult {
        s,
        k,
        n_total,
        x: x.elements,
        y: y.elements,
        z_flags,
        t,
        t_hat,
        row,
        verified_lis,
    })
}

/// `(T, T̂)` for the trial on `stream`, without building the row. Uses the
/// same draws as [`run_card_experiment`].
pub(crate) fn matched_only(s: usize, k: usize, stream: RngStream) -> Result<(usize, usize)> {
    let mut rng = stream.rng();
    let (x, y) = draw_places(s + k, k, &mut rng)?;
    let (_, t, t_hat) = matched_counts(&x.elements, &y.elements, k);
    Ok((t, t_hat))
}

/// `trials` runs on streams `(master_seed, 0..trials)`.
pub fn run_card_experiments(
    s: usize,
    k: usize,
    trials: u64,
    master_seed: u64,
    exec: Execution,
) -> Result<Vec<CardExperimentResult>> {
    map_indexed(exec, trials, |i| {
        run_card_experiment(s, k, RngStream::new(master_seed, i))
    })
    .into_iter()
    .collect()
}

/// Tally of a long run over mixed `(s, k)` shapes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CardSoakSummary {
    pub trials: u64,
    pub violations: u64,
    /// Smallest `verified_lis − (s + T)` seen.
    pub min_slack: usize,
    pub mean_t: f64,
}

/// Trial `i` uses shape `shapes[i % shapes.len()]` on stream `(seed, i)`.
pub fn card_soak(
    shapes: &[(usize, usize)],
    trials: u64,
    master_seed: u64,
    exec: Execution,
) -> Result<CardSoakSummary> {
    if shapes.is_empty() {
        return Err(Error::InvalidParameter("no shapes given".into()));
    }
    let outcomes = map_indexed(exec, trials, |i| {
        let (s, k) = shapes[(i % shapes.len() as u64) as usize];
        match run_card_experiment(s, k, RngStream::new(master_seed, i)) {
            Ok(r) => Ok((r.verified_lis - (s + r.t), r.t, false)),
            Err(Error::ConstructionViolated { .. }) => Ok((0, 0, true)),
            Err(e) => Err(e),
        }
    });
    let mut summary = CardSoakSummary {
        trials,
        violations: 0,
        min_slack: usize::MAX,
        mean_t: 0.0,
    };
    let mut sum_t = 0u64;
    for o in outcomes {
        let (slack, t, violated) = o?;
        if violated {
            summary.violations += 1;
        } else {
            summary.min_slack = summary.min_slack.min(slack);
        }
        sum_t += t as u64;
    }
    summary.mean_t = sum_t as f64 / trials.max(1) as f64;
    Ok(summary)
}

/// Empirical counts of `X_j = r` from the card experiment: `counts[j-1][r-1]`.
pub fn position_frequencies(
    s: usize,
    k: usize,
    trials: u64,
    master_seed: u64,
    exec: Execution,
) -> Result<Vec<Vec<u64>>> {
    let n_total = s + k;
    let draws = map_indexed(exec, trials, |i| {
        let mut rng = RngStream::new(master_seed, i).rng();
        draw_places(n_total, k, &mut rng).map(|(x, _)| x.elements)
    });
    let mut counts = vec![vec![0u64; n_total]; k];
    for d in draws {
        for (j, r) in d?.into_iter().enumerate() {
            counts[j][r - 1] += 1;
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_selected() {
        let r = run_card_experiment(0, 9, RngStream::new(1, 1)).unwrap();
        assert_eq!(r.x, (1..=9).collect::<Vec<_>>());
        assert_eq!(r.y, r.x);
        assert_eq!(r.t, 9);
        assert_eq!(r.row, r.x);
        assert_eq!(r.verified_lis, 9);
    }

    #[test]
    fn none_selected() {
        let r = run_card_experiment(7, 0, RngStream::new(1, 1)).unwrap();
        assert_eq!(r.row, (1..=7).collect::<Vec<_>>());
        assert_eq!((r.t, r.t_hat, r.verified_lis), (0, 0, 7));
        assert!(run_card_experiment(0, 0, RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn invariants_hold() {
        for i in 0..2000 {
            let (s, k) = (1 + (i % 13) as usize, 1 + (i % 17) as usize);
            let r = run_card_experiment(s, k, RngStream::new(3, i)).unwrap();
            assert!(r.t_hat <= r.t && r.t <= k);
            assert!(r.verified_lis >= s + r.t);
            let mut sorted = r.row.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (1..=s + k).collect::<Vec<_>>());
        }
    }

    #[test]
    fn matched_only_agrees() {
        for i in 0..50 {
            let r = run_card_experiment(8, 8, RngStream::new(5, i)).unwrap();
            assert_eq!(
                matched_only(8, 8, RngStream::new(5, i)).unwrap(),
                (r.t, r.t_hat)
            );
        }
    }

    #[test]
    fn deterministic_across_execution() {
        let a = run_card_experiments(8, 8, 200, 17, Execution::Sequential).unwrap();
        let b = crate::exec::with_threads(3, || {
            run_card_experiments(8, 8, 200, 17, Execution::Parallel)
        })
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn soak_small() {
        let s = card_soak(
            &[(3, 5), (10, 10), (0, 4), (6, 0)],
            4000,
            2,
            Execution::Parallel,
        )
        .unwrap();
        assert_eq!(s.violations, 0);
        assert_eq!(s.trials, 4000);
    }
}
