//! Counting and LIS against independent slow implementations.

use incseq::count::count_all_lengths_u64;
use incseq::perm::for_each_permutation;
use incseq::{
    count_bruteforce, count_increasing_subsequences, lis_length, lis_length_restricted, CountMode,
    CountValue, Permutation, RngStream,
};
use num_bigint::BigUint;
use proptest::prelude::*;

/// O(n²) DP over the number of increasing subsequences ending at each index.
fn quadratic_counts(seq: &[usize], k: usize) -> BigUint {
    if k == 0 {
        return BigUint::from(1u32);
    }
    let n = seq.len();
    let mut prev: Vec<BigUint> = vec![BigUint::from(1u32); n];
    for _ in 1..k {
        let mut next = vec![BigUint::from(0u32); n];
        for i in 0..n {
            for j in 0..i {
                if seq[j] < seq[i] {
                    next[i] += &prev[j];
                }
            }
        }
        prev = next;
    }
    prev.into_iter().sum()
}

fn quadratic_lis(seq: &[usize]) -> usize {
    let mut best = vec![1usize; seq.len()];
    for i in 0..seq.len() {
        for j in 0..i {
            if seq[j] < seq[i] {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

fn exact(v: CountValue) -> BigUint {
    v.as_exact().cloned().expect("exact mode")
}

#[test]
fn fenwick_matches_bruteforce_on_all_of_s6() {
    for n in 1..=6 {
        for_each_permutation(n, |img| {
            let p = Permutation::new(img.to_vec()).unwrap();
            for k in 0..=n {
                let fast = exact(count_increasing_subsequences(&p, k, CountMode::Exact).unwrap());
                let slow = exact(count_bruteforce(&p, k).unwrap());
                assert_eq!(fast, slow, "perm {p}, k {k}");
            }
        });
    }
}

#[test]
fn all_lengths_counter_matches_fenwick() {
    for seed in 0..50 {
        let p = incseq::sample_uniform_permutation(40, RngStream::new(seed, 0)).unwrap();
        let all = count_all_lengths_u64(p.as_slice());
        for (k, &c) in all.iter().enumerate() {
            let fast = exact(count_increasing_subsequences(&p, k, CountMode::Exact).unwrap());
            assert_eq!(fast, BigUint::from(c), "seed {seed}, k {k}");
        }
    }
}

#[test]
fn extended_tracks_exact_where_exact_is_large() {
    let p = Permutation::identity(300).unwrap();
    for k in [10, 150, 290] {
        let e = count_increasing_subsequences(&p, k, CountMode::Exact)
            .unwrap()
            .to_ext();
        let x = count_increasing_subsequences(&p, k, CountMode::Extended)
            .unwrap()
            .to_ext();
        assert!(e.rel_diff(x) < 1e-9, "k {k}: {e} vs {x}");
    }
}

#[test]
fn lis_matches_quadratic_dp_up_to_500() {
    for (i, n) in [1usize, 2, 7, 50, 200, 500].into_iter().enumerate() {
        for t in 0..5 {
            let p = incseq::sample_uniform_permutation(n, RngStream::new(i as u64, t)).unwrap();
            assert_eq!(lis_length(&p), quadratic_lis(p.as_slice()));
        }
    }
}

#[test]
fn restricted_lis_is_lis_of_the_subsequence() {
    let p = incseq::sample_uniform_permutation(60, RngStream::new(9, 0)).unwrap();
    let values: Vec<usize> = (1..=60).filter(|v| v % 3 != 0).collect();
    let sub: Vec<usize> = p
        .as_slice()
        .iter()
        .copied()
        .filter(|v| v % 3 != 0)
        .collect();
    assert_eq!(lis_length_restricted(&p, &values), quadratic_lis(&sub));
}

fn perm_strategy(min_n: usize, max_n: usize) -> impl Strategy<Value = Vec<usize>> {
    (min_n..=max_n).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
}

proptest! {
    #[test]
    fn count_matches_quadratic(img in perm_strategy(1, 30), k in 0usize..8) {
        let p = Permutation::new(img.clone()).unwrap();
        prop_assume!(k <= p.len());
        let fast = exact(count_increasing_subsequences(&p, k, CountMode::Exact).unwrap());
        prop_assert_eq!(fast, quadratic_counts(&img, k));
    }

    #[test]
    fn lis_is_largest_nonzero_length(img in perm_strategy(1, 25)) {
        let p = Permutation::new(img).unwrap();
        let l = lis_length(&p);
        let at = |k| count_increasing_subsequences(&p, k, CountMode::Exact).unwrap();
        prop_assert!(!at(l).is_zero());
        if l < p.len() {
            prop_assert!(at(l + 1).is_zero());
        }
    }

    #[test]
    fn reversal_swaps_increasing_and_decreasing(img in perm_strategy(2, 12)) {
        // Z_k(σ) counts increasing, Z_k(rev σ) counts decreasing; for k = 2 they sum to C(n, 2).
        let n = img.len();
        let p = Permutation::new(img.clone()).unwrap();
        let rev: Vec<usize> = img.into_iter().rev().collect();
        let q = Permutation::new(rev).unwrap();
        let a = exact(count_increasing_subsequences(&p, 2, CountMode::Exact).unwrap());
        let b = exact(count_increasing_subsequences(&q, 2, CountMode::Exact).unwrap());
        prop_assert_eq!(a + b, BigUint::from(n * n.saturating_sub(1) / 2));
    }
}
