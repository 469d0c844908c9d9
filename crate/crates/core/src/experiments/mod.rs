//! Monte Carlo harness. Every trial `i` draws from its own stream derived
//! from `(master_seed, i)` and results are reduced in trial order, so outputs
//! do not depend on the number of worker threads.

pub mod card;
pub mod complement;
pub mod config;
pub mod lis_shift;
pub mod moments;
pub mod scaling;
pub mod tv_sweep;
pub mod zero;

pub use card::{
    card_soak, position_frequencies, run_card_experiment, run_card_experiments,
    CardExperimentResult, CardSoakSummary,
};
pub use complement::{complement_lis_check, ComplementReport};
pub use config::{k_from_rule, KRule};
pub use lis_shift::{lis_shift_experiment, LisShiftReport, LisSummary};
pub use moments::{estimate_that_moments, MomentEstimate};
pub use scaling::{scaling_study, ScalingConfig, ScalingReport, ScalingRow};
pub use tv_sweep::{tv_sweep, TvSweepConfig, TvSweepRow};
pub use zero::{zero_probability_sweep, ZeroRow};
