//! Longest increasing subsequence by patience sorting.

use crate::perm::Permutation;

/// Length of the longest strictly increasing subsequence of `seq`.
///
/// `tails[m]` holds the smallest possible last value of an increasing run of
/// length `m + 1` seen so far; each value replaces the first tail that is not
/// smaller than it.
pub fn lis_of_slice(seq: &[usize]) -> usize {
    let mut tails: Vec<usize> = Vec::with_capacity(64);
    for &v in seq {
        let at = tails.partition_point(|&t| t < v);
        if at == tails.len() {
            tails.push(v);
        } else {
            tails[at] = v;
        }
    }
    tails.len()
}

/// L_n(σ).
pub fn lis_length(p: &Permutation) -> usize {
    lis_of_slice(p.as_slice())
}

/// LIS of the subsequence of `p` formed by the entries whose value lies in
/// `values`. Values outside `1..=n` are ignored.
pub fn lis_length_restricted(p: &Permutation, values: &[usize]) -> usize {
    let n = p.len();
    let mut keep = vec![false; n + 1];
    for &v in values {
        if (1..=n).contains(&v) {
            keep[v] = true;
        }
    }
    lis_length_masked(p, &keep)
}

/// Same as [`lis_length_restricted`] with a value mask (`keep[v]`).
pub fn lis_length_masked(p: &Permutation, keep: &[bool]) -> usize {
    let mut tails: Vec<usize> = Vec::new();
    for &v in p.as_slice().iter().filter(|&&v| keep[v]) {
        let at = tails.partition_point(|&t| t < v);
        if at == tails.len() {
            tails.push(v);
        } else {
            tails[at] = v;
        }
    }
    tails.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn simple_cases() {
        assert_eq!(lis_length(&Permutation::identity(5).unwrap()), 5);
        assert_eq!(lis_length(&p(&[5, 4, 3, 2, 1])), 1);
        assert_eq!(lis_length(&p(&[1, 3, 4, 5, 2])), 4);
    }

    #[test]
    fn restricted() {
        let s = p(&[1, 3, 4, 5, 2]);
        assert_eq!(lis_length_restricted(&s, &[1, 3, 4, 5]), 4);
        assert_eq!(lis_length_restricted(&s, &[2, 5]), 1);
        assert_eq!(lis_length_restricted(&s, &[4]), 1);
        assert_eq!(lis_length_restricted(&s, &[]), 0);
    }
}
