use thiserror::Error;

/// Errors raised by the library surface.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("permutation size must be at least 1")]
    EmptyPermutation,

    #[error("not a permutation of 1..={n}: {reason}")]
    InvalidPermutation { n: usize, reason: String },

    #[error("subset size {k} exceeds ground set size {n}")]
    SubsetTooLarge { n: usize, k: usize },

    #[error("values must be strictly increasing and lie in 1..={n}")]
    InvalidValueSet { n: usize },

    #[error("exact count exceeds the {max_bits}-bit budget")]
    CountOverflow { max_bits: u64 },

    #[error("n = {n} exceeds the enumeration budget of {budget}")]
    OverBudget { n: usize, budget: usize },

    #[error("card row LIS {lis} is below s + T = {bound}")]
    ConstructionViolated { lis: usize, bound: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
