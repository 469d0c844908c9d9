//! Counting increasing subsequences of a fixed length.
//!
//! The fast path is a layered dynamic program: `ends[m][i]` is the number of
//! increasing subsequences of length `m` ending at position `i`, and
//! `ends[m][i] = Σ ends[m-1][i']` over `i' < i` with `σ(i') < σ(i)`. Scanning
//! positions left to right while inserting into a Fenwick tree keyed by value
//! turns each layer into `n` prefix queries, for `O(n·k·log n)` overall.

use std::fmt;
use std::ops::AddAssign;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extfloat::ExtFloat;
use crate::perm::Permutation;

/// Default cap on the size of an exact count, in bits.
pub const DEFAULT_EXACT_BIT_BUDGET: u64 = 1 << 16;

/// Largest `n` accepted by [`count_bruteforce`].
pub const BRUTEFORCE_MAX_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    Exact,
    Extended,
}

/// Z_{n,k}, either exact or as an extended-range float.
#[derive(Debug, Clone)]
pub enum CountValue {
    Exact(BigUint),
    Extended(ExtFloat),
}

impl CountValue {
    pub fn zero(mode: CountMode) -> Self {
        match mode {
            CountMode::Exact => CountValue::Exact(BigUint::zero()),
            CountMode::Extended => CountValue::Extended(ExtFloat::ZERO),
        }
    }

    pub fn mode(&self) -> CountMode {
        match self {
            CountValue::Exact(_) => CountMode::Exact,
            CountValue::Extended(_) => CountMode::Extended,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CountValue::Exact(v) => v.is_zero(),
            CountValue::Extended(v) => v.is_zero(),
        }
    }

    pub fn to_ext(&self) -> ExtFloat {
        match self {
            CountValue::Exact(v) => ExtFloat::from_biguint(v),
            CountValue::Extended(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&BigUint> {
        match self {
            CountValue::Exact(v) => Some(v),
            CountValue::Extended(_) => None,
        }
    }

    /// Lossy conversion; saturates to infinity.
    pub fn to_f64(&self) -> f64 {
        match self {
            CountValue::Exact(v) => v.to_f64().unwrap_or(f64::INFINITY),
            CountValue::Extended(v) => v.to_f64(),
        }
    }
}

/// Exact values compare exactly; mixed modes compare after converting the
/// exact side to an [`ExtFloat`].
impl PartialEq for CountValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (CountValue::Exact(a), CountValue::Exact(b)) => a == b,
            _ => self.to_ext() == other.to_ext(),
        }
    }
}

impl From<u64> for CountValue {
    fn from(v: u64) -> Self {
        CountValue::Exact(BigUint::from(v))
    }
}

/// Exact mode prints the decimal integer; extended mode prints `m·2^e`
/// followed by a decimal approximation.
impl fmt::Display for CountValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountValue::Exact(v) => write!(f, "{v}"),
            CountValue::Extended(v) => {
                if v.is_zero() {
                    return write!(f, "0·2^0 (0)");
                }
                let l10 = v.log10();
                let e10 = l10.floor();
                let m10 = 10f64.powf(l10 - e10);
                write!(f, "{v} (≈{m10:.12}e{e10})")
            }
        }
    }
}

/// Fenwick tree over positions `1..=n` for prefix sums.
struct Fenwick<T> {
    tree: Vec<T>,
}

impl<T: Clone + Zero + for<'a> AddAssign<&'a T>> Fenwick<T> {
    fn new(n: usize) -> Self {
        Self {
            tree: vec![T::zero(); n + 1],
        }
    }

    fn clear(&mut self) {
        for t in &mut self.tree {
            *t = T::zero();
        }
    }

    fn add(&mut self, mut i: usize, v: &T) {
        while i < self.tree.len() {
            self.tree[i] += v;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over `1..=i`.
    fn prefix(&self, mut i: usize) -> T {
        let mut acc = T::zero();
        while i > 0 {
            acc += &self.tree[i];
            i -= i & i.wrapping_neg();
        }
        acc
    }
}

/// Runs the layered DP and returns the layer-`k` values (per end position).
/// `check` sees each finished layer and may abort.
fn layered_counts<T>(
    values: &[usize],
    k: usize,
    mut check: impl FnMut(&[T]) -> Result<()>,
) -> Result<Vec<T>>
where
    T: Clone + Zero + One + for<'a> AddAssign<&'a T>,
{
    let n = values.len();
    let mut layer: Vec<T> = vec![T::one(); n];
    let mut fen = Fenwick::<T>::new(n);
    for _ in 2..=k {
        fen.clear();
        let mut next = Vec::with_capacity(n);
        let mut any = false;
        for (i, &v) in values.iter().enumerate() {
            let c = fen.prefix(v - 1);
            any |= !c.is_zero();
            next.push(c);
            fen.add(v, &layer[i]);
        }
        layer = next;
        check(&layer)?;
        if !any {
            break;
        }
    }
    Ok(layer)
}

impl One for ExtFloat {
    fn one() -> Self {
        ExtFloat::ONE
    }
}

/// Z_{n,k}(σ) with the default exact bit budget.
pub fn count_increasing_subsequences(
    p: &Permutation,
    k: usize,
    mode: CountMode,
) -> Result<CountValue> {
    count_increasing_subsequences_with_budget(p, k, mode, DEFAULT_EXACT_BIT_BUDGET)
}

/// Z_{n,k}(σ). In exact mode, any intermediate value wider than `max_bits`
/// aborts with [`Error::CountOverflow`].
pub fn count_increasing_subsequences_with_budget(
    p: &Permutation,
    k: usize,
    mode: CountMode,
    max_bits: u64,
) -> Result<CountValue> {
    let n = p.len();
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    if k == 0 {
        return Ok(match mode {
            CountMode::Exact => CountValue::Exact(BigUint::one()),
            CountMode::Extended => CountValue::Extended(ExtFloat::ONE),
        });
    }
    match mode {
        CountMode::Exact => {
            let layer = layered_counts::<BigUint>(p.as_slice(), k, |l| {
                if l.iter().any(|x| x.bits() > max_bits) {
                    Err(Error::CountOverflow { max_bits })
                } else {
                    Ok(())
                }
            })?;
            let total: BigUint = layer.iter().sum();
            if total.bits() > max_bits {
                return Err(Error::CountOverflow { max_bits });
            }
            Ok(CountValue::Exact(total))
        }
        CountMode::Extended => {
            let layer = layered_counts::<ExtFloat>(p.as_slice(), k, |_| Ok(()))?;
            let mut total = ExtFloat::ZERO;
            for x in &layer {
                total += x;
            }
            Ok(CountValue::Extended(total))
        }
    }
}

/// Z_{n,k}(σ) for every `k = 0..=n` in machine integers, `O(n²·L)`.
///
/// Exact as long as C(n, ⌊n/2⌋) fits in a `u64`, i.e. `n ≤ 67`; meant for
/// exhaustive enumeration at small `n`.
pub fn count_all_lengths_u64(values: &[usize]) -> Vec<u64> {
    let n = values.len();
    assert!(n <= 67, "count_all_lengths_u64 overflows beyond n = 67");
    let mut totals = vec![0u64; n + 1];
    totals[0] = 1;
    // ends[i][m]: increasing subsequences of length m + 1 ending at i.
    let mut ends: Vec<Vec<u64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![1u64];
        for (j, prev) in ends.iter().enumerate() {
            if values[j] < values[i] {
                if row.len() < prev.len() + 1 {
                    row.resize(prev.len() + 1, 0);
                }
                for (m, &c) in prev.iter().enumerate() {
                    row[m + 1] += c;
                }
            }
        }
        for (m, &c) in row.iter().enumerate() {
            totals[m + 1] += c;
        }
        ends.push(row);
    }
    totals
}

/// Z_{n,k}(σ) by listing every k-subset of positions. Exact; `n ≤ 20`.
pub fn count_bruteforce(p: &Permutation, k: usize) -> Result<CountValue> {
    let n = p.len();
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::OverBudget {
            n,
            budget: BRUTEFORCE_MAX_N,
        });
    }
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    let v = p.as_slice();
    let mut count = 0u64;
    // Gosper's hack over n-bit masks with k bits set.
    if k == 0 {
        return Ok(CountValue::from(1));
    }
    let mut mask: u32 = (1u32 << k) - 1;
    let limit: u32 = 1u32 << n;
    while mask < limit {
        let mut last = 0usize;
        let mut ok = true;
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            if v[i] <= last {
                ok = false;
                break;
            }
            last = v[i];
            bits &= bits - 1;
        }
        if ok {
            count += 1;
        }
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    Ok(CountValue::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::sample_uniform_permutation;
    use crate::rng::RngStream;
    use num_integer::binomial;

    fn example() -> Permutation {
        Permutation::new(vec![1, 3, 4, 5, 2]).unwrap()
    }

    #[test]
    fn worked_example() {
        let p = example();
        assert_eq!(
            count_increasing_subsequences(&p, 3, CountMode::Exact).unwrap(),
            CountValue::from(4)
        );
        assert_eq!(count_bruteforce(&p, 3).unwrap(), CountValue::from(4));
        assert_eq!(count_all_lengths_u64(p.as_slice()), vec![1, 5, 7, 4, 1, 0]);
    }

    #[test]
    fn identity_gives_binomials() {
        let p = Permutation::identity(30).unwrap();
        for k in 0..=30 {
            let z = count_increasing_subsequences(&p, k, CountMode::Exact).unwrap();
            assert_eq!(
                z,
                CountValue::Exact(binomial(BigUint::from(30u32), BigUint::from(k)))
            );
        }
    }

    #[test]
    fn small_edges() {
        let p = Permutation::new(vec![2, 1]).unwrap();
        assert!(count_bruteforce(&p, 2).unwrap().is_zero());
        assert!(count_increasing_subsequences(&p, 2, CountMode::Extended)
            .unwrap()
            .is_zero());
        assert_eq!(
            count_increasing_subsequences(&p, 1, CountMode::Exact).unwrap(),
            CountValue::from(2)
        );
        assert_eq!(
            count_increasing_subsequences(&p, 0, CountMode::Exact).unwrap(),
            CountValue::from(1)
        );
        assert!(count_increasing_subsequences(&p, 3, CountMode::Exact).is_err());
    }

    #[test]
    fn zero_equal_across_modes() {
        assert_eq!(
            CountValue::zero(CountMode::Exact),
            CountValue::zero(CountMode::Extended)
        );
        assert_eq!(
            CountValue::from(8),
            CountValue::Extended(ExtFloat::from_f64(8.0))
        );
    }

    #[test]
    fn overflow_is_reported() {
        let p = Permutation::identity(100).unwrap();
        let r = count_increasing_subsequences_with_budget(&p, 50, CountMode::Exact, 64);
        assert_eq!(r, Err(Error::CountOverflow { max_bits: 64 }));
        // C(100, 50) has 97 bits.
        assert!(count_increasing_subsequences_with_budget(&p, 50, CountMode::Exact, 97).is_ok());
    }

    #[test]
    fn bruteforce_budget() {
        let p = Permutation::identity(21).unwrap();
        assert!(matches!(
            count_bruteforce(&p, 2),
            Err(Error::OverBudget { .. })
        ));
    }

    #[test]
    fn extended_matches_exact_to_1e9() {
        for t in 0..20 {
            let n = 20 + 9 * t;
            let p = sample_uniform_permutation(n, RngStream::new(3, t as u64)).unwrap();
            for k in [1, 2, 5, n / 10 + 1, n / 6 + 1] {
                let e = count_increasing_subsequences(&p, k, CountMode::Exact).unwrap();
                let x = count_increasing_subsequences(&p, k, CountMode::Extended).unwrap();
                assert!(e.to_ext().rel_diff(x.to_ext()) <= 1e-9, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn all_lengths_matches_layered() {
        for t in 0..30 {
            let p = sample_uniform_permutation(12, RngStream::new(9, t)).unwrap();
            let all = count_all_lengths_u64(p.as_slice());
            for (k, &z) in all.iter().enumerate() {
                assert_eq!(
                    count_increasing_subsequences(&p, k, CountMode::Exact).unwrap(),
                    CountValue::from(z)
                );
            }
        }
    }
}
