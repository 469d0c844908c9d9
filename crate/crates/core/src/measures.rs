//! The uniform measure, the conditioned measures on B-sets, and the
//! adulterated measure μ_{n;k}, with exact and Monte Carlo total variation
//! distances between μ_{n;k} and the uniform measure.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analytics::moments::{expected_z_exact, expected_z_ext, factorial};
use crate::count::{count_increasing_subsequences, CountMode, CountValue};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::extfloat::ExtFloat;
use crate::perm::{for_each_permutation_with_first, Permutation};
use crate::rng::RngStream;
use crate::stats::RunningMoments;

/// Default largest `n` for exhaustive enumeration of S_n.
pub const DEFAULT_ENUM_BUDGET: usize = 10;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// μ_{n;k}: the law of a uniform permutation after `k` of its entries,
/// chosen at random, are put back into their places in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdulterationSpec {
    pub n: usize,
    pub k: usize,
}

impl AdulterationSpec {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyPermutation);
        }
        if k > n {
            return Err(Error::SubsetTooLarge { n, k });
        }
        Ok(Self { n, k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TvMethod {
    ExactEnumeration,
    MonteCarlo,
}

/// A total variation value with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvEstimate {
    pub n: usize,
    pub k: usize,
    pub value: f64,
    pub method: TvMethod,
    /// Zero for exact values.
    pub stderr: f64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// The exact rational, as `p/q`, when enumerated.
    pub exact: Option<String>,
}

/// Exact TV together with both rational forms it was computed from.
#[derive(Debug, Clone)]
pub struct ExactTv {
    pub estimate: TvEstimate,
    /// ½ Σ_σ |μ(σ) − 1/n!|
    pub by_sum: BigRational,
    /// ½ E_U |Z/EZ − 1|
    pub by_expectation: BigRational,
    /// Distinct values of Z_{n,k} with their multiplicities over S_n.
    pub histogram: BTreeMap<u64, u64>,
}

/// Draws from μ_{n;k} by the card realization: shuffle, pick `k` places,
/// sort the cards found there back into those places.
pub fn sample_mu(spec: AdulterationSpec, stream: RngStream) -> Permutation {
    sample_mu_with(spec, &mut stream.rng())
}

pub fn sample_mu_with<R: Rng + ?Sized>(spec: AdulterationSpec, rng: &mut R) -> Permutation {
    let mut image: Vec<usize> = (1..=spec.n).collect();
    image.shuffle(rng);
    let mut places: Vec<usize> = index::sample(rng, spec.n, spec.k).into_vec();
    places.sort_unstable();
    let mut cards: Vec<usize> = places.iter().map(|&i| image[i]).collect();
    cards.sort_unstable();
    for (&i, c) in places.iter().zip(cards) {
        image[i] = c;
    }
    Permutation::from_vec_unchecked(image)
}

/// Uniform draw from the permutations containing `values` (strictly
/// increasing, within `1..=n`) as an increasing subsequence.
pub fn sample_conditioned(n: usize, values: &[usize], stream: RngStream) -> Result<Permutation> {
    sample_conditioned_with(n, values, &mut stream.rng())
}

pub fn sample_conditioned_with<R: Rng + ?Sized>(
    n: usize,
    values: &[usize],
    rng: &mut R,
) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::EmptyPermutation);
    }
    let ok = values.iter().all(|&v| (1..=n).contains(&v)) && values.windows(2).all(|w| w[0] < w[1]);
    if !ok || values.len() > n {
        return Err(Error::InvalidValueSet { n });
    }
    let k = values.len();
    let mut is_pinned = vec![false; n + 1];
    for &v in values {
        is_pinned[v] = true;
    }
    let mut places: Vec<usize> = index::sample(rng, n, k).into_vec();
    places.sort_unstable();
    let mut taken = vec![false; n];
    let mut image = vec![0usize; n];
    for (&i, &v) in places.iter().zip(values) {
        image[i] = v;
        taken[i] = true;
    }
    let mut rest: Vec<usize> = (1..=n).filter(|&v| !is_pinned[v]).collect();
    rest.shuffle(rng);
    let mut it = rest.into_iter();
    for (slot, t) in image.iter_mut().zip(&taken) {
        if !t {
            *slot = it.next().expect("one free value per free place");
        }
    }
    Ok(Permutation::from_vec_unchecked(image))
}

/// μ_{n;k}(σ) = Z_{n,k}(σ)·k! / (n!·C(n,k)), exactly.
pub fn mu_density(p: &Permutation, spec: AdulterationSpec) -> Result<BigRational> {
    if p.len() != spec.n {
        return Err(Error::InvalidParameter(format!(
            "permutation has n = {} but the measure has n = {}",
            p.len(),
            spec.n
        )));
    }
    let z = match count_increasing_subsequences(p, spec.k, CountMode::Exact)? {
        CountValue::Exact(z) => z,
        CountValue::Extended(_) => unreachable!("exact mode returns exact counts"),
    };
    Ok(density_of_count(&z, spec))
}

fn density_of_count(z: &BigUint, spec: AdulterationSpec) -> BigRational {
    let num = BigInt::from(z.clone()) * BigInt::from(factorial(spec.k));
    let den = BigInt::from(factorial(spec.n))
        * BigInt::from(num_integer::binomial(
            BigUint::from(spec.n),
            BigUint::from(spec.k),
        ));
    BigRational::new(num, den)
}

/// Z_{n,k} histograms over all of S_n for every `k = 0..=n`, enumerated in
/// lexicographic blocks (one per leading value).
pub fn z_histograms(n: usize, budget: usize, exec: Execution) -> Result<Vec<BTreeMap<u64, u64>>> {
    if n == 0 {
        return Err(Error::EmptyPermutation);
    }
    if n > budget {
        return Err(Error::OverBudget { n, budget });
    }
    let blocks = map_indexed(exec, n as u64, |b| {
        let mut hist: Vec<BTreeMap<u64, u64>> = vec![BTreeMap::new(); n + 1];
        let mut counter = AllLengths::new(n);
        for_each_permutation_with_first(n, b as usize + 1, |perm| {
            for (k, &z) in counter.count(perm).iter().enumerate() {
                *hist[k].entry(z).or_insert(0) += 1;
            }
        });
        hist
    });
    let mut total: Vec<BTreeMap<u64, u64>> = vec![BTreeMap::new(); n + 1];
    for block in blocks {
        for (k, h) in block.into_iter().enumerate() {
            for (z, c) in h {
                *total[k].entry(z).or_insert(0) += c;
            }
        }
    }
    Ok(total)
}

/// Allocation-free all-lengths counter for enumeration.
struct AllLengths {
    n: usize,
    ends: Vec<u64>,
    totals: Vec<u64>,
}

impl AllLengths {
    fn new(n: usize) -> Self {
        Self {
            n,
            ends: vec![0; n * (n + 1)],
            totals: vec![0; n + 1],
        }
    }

    /// `ends[i*(n+1) + m]` counts increasing subsequences of length `m`
    /// ending at position `i`.
    fn count(&mut self, v: &[usize]) -> &[u64] {
        let w = self.n + 1;
        self.ends.fill(0);
        self.totals.fill(0);
        self.totals[0] = 1;
        for i in 0..self.n {
            self.ends[i * w + 1] = 1;
            for j in 0..i {
                if v[j] < v[i] {
                    for m in 1..=j + 1 {
                        let c = self.ends[j * w + m];
                        self.ends[i * w + m + 1] += c;
                    }
                }
            }
            for m in 1..=i + 1 {
                self.totals[m] += self.ends[i * w + m];
            }
        }
        &self.totals
    }
}

/// Exact ‖μ_{n;k} − U_n‖ by enumerating S_n (default budget).
pub fn exact_tv_distance(spec: AdulterationSpec) -> Result<ExactTv> {
    exact_tv_distance_with(spec, DEFAULT_ENUM_BUDGET, Execution::default())
}

pub fn exact_tv_distance_with(
    spec: AdulterationSpec,
    budget: usize,
    exec: Execution,
) -> Result<ExactTv> {
    let hist = z_histograms(spec.n, budget, exec)?;
    Ok(exact_tv_from_histogram(
        spec,
        hist.into_iter().nth(spec.k).unwrap_or_default(),
    ))
}

/// Exact TV for every `k = 0..=n` from a single enumeration.
pub fn exact_tv_all_k(n: usize, budget: usize, exec: Execution) -> Result<Vec<ExactTv>> {
    let hists = z_histograms(n, budget, exec)?;
    Ok(hists
        .into_iter()
        .enumerate()
        .map(|(k, h)| exact_tv_from_histogram(AdulterationSpec { n, k }, h))
        .collect())
}

/// Evaluates both rational forms of the TV distance from a Z-histogram and
/// checks that they coincide.
pub fn exact_tv_from_histogram(spec: AdulterationSpec, histogram: BTreeMap<u64, u64>) -> ExactTv {
    let n_fact = BigRational::from_integer(BigInt::from(factorial(spec.n)));
    let uniform = n_fact.recip();
    let ez = expected_z_exact(spec.n, spec.k);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));

    let mut by_sum = BigRational::zero();
    let mut by_expectation = BigRational::zero();
    for (&z, &count) in &histogram {
        let mult = BigRational::from_integer(BigInt::from(count));
        let mu = density_of_count(&BigUint::from(z), spec);
        by_sum += &mult * (&mu - &uniform).abs();
        let ratio = BigRational::from_integer(BigInt::from(z)) / &ez;
        by_expectation += &mult / &n_fact * (ratio - BigRational::one()).abs();
    }
    by_sum *= &half;
    by_expectation *= &half;
    assert_eq!(by_sum, by_expectation, "TV forms disagree for {spec:?}");

    let value = by_sum.to_f64().unwrap_or(f64::NAN);
    ExactTv {
        estimate: TvEstimate {
            n: spec.n,
            k: spec.k,
            value,
            method: TvMethod::ExactEnumeration,
            stderr: 0.0,
            trials: 0,
            ci_low: value,
            ci_high: value,
            exact: Some(format!("{}/{}", by_sum.numer(), by_sum.denom())),
        },
        by_sum,
        by_expectation,
        histogram,
    }
}

/// Monte Carlo TV via ½ E_U |Z/EZ − 1|. Trial `i` samples from stream
/// `(stream.fork_seed(), i)`.
pub fn tv_monte_carlo(
    spec: AdulterationSpec,
    trials: u64,
    stream: RngStream,
    exec: Execution,
) -> Result<TvEstimate> {
    if trials < 2 {
        return Err(Error::InvalidParameter(
            "tv_monte_carlo needs at least 2 trials".into(),
        ));
    }
    let ez = expected_z_ext(spec.n, spec.k);
    let base = stream.fork_seed();
    let samples = map_indexed(exec, trials, |i| -> Result<f64> {
        let p = crate::perm::sample_uniform_permutation(spec.n, RngStream::new(base, i))?;
        let z = count_increasing_subsequences(&p, spec.k, CountMode::Extended)?.to_ext();
        Ok(0.5 * (z / ez).abs_diff(ExtFloat::ONE).to_f64())
    });
    let mut acc = RunningMoments::default();
    for s in samples {
        acc.push(s?);
    }
    let mean = acc.mean();
    let stderr = acc.stderr();
    Ok(TvEstimate {
        n: spec.n,
        k: spec.k,
        value: mean.clamp(0.0, 1.0),
        method: TvMethod::MonteCarlo,
        stderr,
        trials,
        ci_low: (mean - Z95 * stderr).clamp(0.0, 1.0),
        ci_high: (mean + Z95 * stderr).clamp(0.0, 1.0),
        exact: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lis::lis_length;
    use num_bigint::BigInt;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn spec_validation() {
        assert!(AdulterationSpec::new(3, 4).is_err());
        assert!(AdulterationSpec::new(0, 0).is_err());
    }

    #[test]
    fn mu_with_k_equal_n_is_identity() {
        let spec = AdulterationSpec::new(9, 9).unwrap();
        for i in 0..20 {
            assert!(sample_mu(spec, RngStream::new(1, i)).is_identity());
        }
    }

    #[test]
    fn mu_samples_contain_long_runs() {
        let spec = AdulterationSpec::new(40, 13).unwrap();
        for i in 0..500 {
            assert!(lis_length(&sample_mu(spec, RngStream::new(2, i))) >= 13);
        }
    }

    #[test]
    fn conditioned_examples() {
        let p = sample_conditioned(2, &[1, 2], RngStream::new(0, 0)).unwrap();
        assert!(p.is_identity());
        assert!(sample_conditioned(4, &[3, 2], RngStream::new(0, 0)).is_err());
        assert!(sample_conditioned(4, &[2, 2], RngStream::new(0, 0)).is_err());
        assert!(sample_conditioned(4, &[5], RngStream::new(0, 0)).is_err());
        for i in 0..200 {
            let p = sample_conditioned(12, &[2, 5, 9, 10], RngStream::new(4, i)).unwrap();
            let pos: Vec<usize> = [2, 5, 9, 10]
                .iter()
                .map(|v| p.as_slice().iter().position(|x| x == v).unwrap())
                .collect();
            assert!(pos.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn density_examples() {
        let p = Permutation::new(vec![1, 3, 4, 5, 2]).unwrap();
        assert_eq!(
            mu_density(&p, AdulterationSpec::new(5, 3).unwrap()).unwrap(),
            rat(1, 50)
        );
        let id = Permutation::identity(3).unwrap();
        assert_eq!(
            mu_density(&id, AdulterationSpec::new(3, 2).unwrap()).unwrap(),
            rat(1, 3)
        );
        let rev = Permutation::reversed(6).unwrap();
        assert!(mu_density(&rev, AdulterationSpec::new(6, 2).unwrap())
            .unwrap()
            .is_zero());
        assert!(mu_density(&rev, AdulterationSpec::new(5, 2).unwrap()).is_err());
    }

    #[test]
    fn exact_tv_examples() {
        let tv = exact_tv_distance(AdulterationSpec::new(3, 3).unwrap()).unwrap();
        assert_eq!(tv.by_sum, rat(5, 6));
        assert_eq!(tv.estimate.exact.as_deref(), Some("5/6"));
        for n in 1..=6 {
            let tv = exact_tv_distance(AdulterationSpec::new(n, 1).unwrap()).unwrap();
            assert!(tv.by_sum.is_zero());
            let tv0 = exact_tv_distance(AdulterationSpec::new(n, 0).unwrap()).unwrap();
            assert!(tv0.by_sum.is_zero());
        }
        let a = exact_tv_distance(AdulterationSpec::new(4, 2).unwrap()).unwrap();
        let b = exact_tv_distance_with(
            AdulterationSpec::new(4, 2).unwrap(),
            10,
            Execution::Sequential,
        )
        .unwrap();
        assert_eq!(a.by_sum, b.by_sum);
        assert_eq!(a.estimate.value.to_bits(), b.estimate.value.to_bits());
        assert!(matches!(
            exact_tv_distance(AdulterationSpec::new(11, 2).unwrap()),
            Err(Error::OverBudget { .. })
        ));
    }

    #[test]
    fn histograms_cover_group() {
        let h = z_histograms(6, 10, Execution::Parallel).unwrap();
        for hk in &h {
            assert_eq!(hk.values().sum::<u64>(), 720);
        }
        assert_eq!(h[0].keys().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn mc_k1_is_exactly_zero() {
        let est = tv_monte_carlo(
            AdulterationSpec::new(50, 1).unwrap(),
            20,
            RngStream::new(3, 0),
            Execution::Parallel,
        )
        .unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.stderr, 0.0);
        assert!(tv_monte_carlo(
            AdulterationSpec::new(5, 1).unwrap(),
            1,
            RngStream::new(3, 0),
            Execution::Parallel
        )
        .is_err());
    }
}
