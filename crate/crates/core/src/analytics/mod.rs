//! Closed forms and exact oracles: moments of Z_{n,k}, the hypergeometric
//! law of the j-th selected position, matched-rank statistics of the card
//! experiment, and the entropy inequality used to bound that law.

pub mod lemma5;
pub mod logvalue;
pub mod moments;
pub mod position;
pub mod that;

pub use lemma5::{entropy_f, lemma5_g, lemma5_log_ratio, lemma5_ratio};
pub use logvalue::{ln_binomial, ln_factorial, LogValue};
pub use moments::{expected_z, expected_z_asymptotic, ExpectedZ};
pub use position::{
    h_argmax, insertion_position_pmf, insertion_position_pmf_exact, joint_position_pmf,
    pmf_bound_check, BoundCheck, JointLaw, PositionLaw,
};
pub use that::{exact_expected_that, exact_second_moment_that, that_window};
