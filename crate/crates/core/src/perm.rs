//! Permutations in one-line notation and the uniform samplers built on them.

use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// A permutation of `1..=n` stored in one-line notation: `image[i]` is the
/// value at position `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Validates that `image` is a bijection of `1..=image.len()`.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::EmptyPermutation);
        }
        let mut seen = vec![false; n + 1];
        for &v in &image {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: format!("value {v} out of range"),
                });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: format!("value {v} repeated"),
                });
            }
        }
        Ok(Self { image })
    }

    /// Caller guarantees the bijection property.
    pub(crate) fn from_vec_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(Self::new(image.clone()).is_ok());
        Self { image }
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyPermutation);
        }
        Ok(Self {
            image: (1..=n).collect(),
        })
    }

    pub fn reversed(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyPermutation);
        }
        Ok(Self {
            image: (1..=n).rev().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    /// Always false; a permutation has at least one element.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| v == i + 1)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Parses 1-based comma separated one-line notation, e.g. `1,3,4,5,2`.
impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let image = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::InvalidPermutation {
                        n: 0,
                        reason: format!("cannot parse {t:?}: {e}"),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(image)
    }
}

/// A sorted k-subset of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsetPositions {
    pub n: usize,
    pub elements: Vec<usize>,
}

impl SubsetPositions {
    pub fn new(n: usize, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        let valid = elements.iter().all(|&e| (1..=n).contains(&e))
            && elements.windows(2).all(|w| w[0] < w[1]);
        if !valid {
            return Err(Error::InvalidValueSet { n });
        }
        Ok(Self { n, elements })
    }

    pub fn k(&self) -> usize {
        self.elements.len()
    }

    /// Elements of `1..=n` not in the subset, ascending.
    pub fn complement(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n - self.k());
        let mut it = self.elements.iter().peekable();
        for v in 1..=self.n {
            if it.peek() == Some(&&v) {
                it.next();
            } else {
                out.push(v);
            }
        }
        out
    }

    /// Membership mask indexed by element (index 0 unused).
    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.n + 1];
        for &e in &self.elements {
            m[e] = true;
        }
        m
    }
}

/// Uniform draw from S_n by Fisher–Yates.
pub fn sample_uniform_permutation(n: usize, stream: RngStream) -> Result<Permutation> {
    sample_uniform_permutation_with(n, &mut stream.rng())
}

pub fn sample_uniform_permutation_with<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::EmptyPermutation);
    }
    let mut image: Vec<usize> = (1..=n).collect();
    image.shuffle(rng);
    Ok(Permutation { image })
}

/// Uniform sorted k-subset of `1..=n`.
pub fn sample_k_subset(n: usize, k: usize, stream: RngStream) -> Result<SubsetPositions> {
    sample_k_subset_with(n, k, &mut stream.rng())
}

pub fn sample_k_subset_with<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<SubsetPositions> {
    if k > n {
        return Err(Error::SubsetTooLarge { n, k });
    }
    let mut elements: Vec<usize> = index::sample(rng, n, k)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    elements.sort_unstable();
    Ok(SubsetPositions { n, elements })
}

/// Advances `v` to its lexicographic successor; returns false (leaving `v`
/// sorted ascending) once the last permutation has been passed.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Calls `f` on every permutation of `1..=n` in lexicographic order.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut v: Vec<usize> = (1..=n).collect();
    loop {
        f(&v);
        if !next_permutation(&mut v) {
            break;
        }
    }
}

/// Calls `f` on every permutation of `1..=n` whose first entry is `first`,
/// in lexicographic order. The blocks for `first = 1..=n` partition S_n.
pub fn for_each_permutation_with_first(n: usize, first: usize, mut f: impl FnMut(&[usize])) {
    let mut v: Vec<usize> = Vec::with_capacity(n);
    v.push(first);
    v.extend((1..=n).filter(|&x| x != first));
    loop {
        f(&v);
        if !next_permutation(&mut v[1..]) {
            break;
        }
    }
}
