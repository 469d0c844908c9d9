//! Counting and sampling laboratory for increasing subsequences of random
//! permutations.
//!
//! * [`perm`], [`lis`], [`count`]: permutations, uniform sampling, LIS by
//!   patience sorting and `Z_{n,k}` (the number of increasing subsequences
//!   of length `k`) by a Fenwick-accelerated layered DP.
//! * [`measures`]: the adulterated measure μ_{n;k} and its total variation
//!   distance from the uniform measure.
//! * [`analytics`]: `E Z_{n,k}`, the position law of the j-th selected
//!   place, exact moments of the matched-rank count `T̂`.
//! * [`experiments`]: deterministic Monte Carlo studies built on the above.
//!
//! With the default `parallel` feature, trial loops and enumerations run on
//! rayon; without it the same code runs sequentially and produces identical
//! output.

pub mod analytics;
pub mod count;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod extfloat;
pub mod lis;
pub mod measures;
pub mod perm;
pub mod rng;
pub mod stats;

pub use count::{count_bruteforce, count_increasing_subsequences, CountMode, CountValue};
pub use error::{Error, Result};
pub use exec::Execution;
pub use extfloat::ExtFloat;
pub use lis::{lis_length, lis_length_restricted};
pub use measures::{AdulterationSpec, TvEstimate, TvMethod};
pub use perm::{sample_k_subset, sample_uniform_permutation, Permutation, SubsetPositions};
pub use rng::RngStream;
