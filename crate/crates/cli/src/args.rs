use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "incseq",
    version,
    about = "Increasing subsequences of random permutations"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (default: available parallelism). Never changes results.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the primary output here, with `<out>.manifest.json` next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Largest n enumerated exhaustively.
    #[arg(long = "enum-budget", global = true, default_value_t = incseq::measures::DEFAULT_ENUM_BUDGET)]
    pub enum_budget: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Exact,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureArg {
    Uniform,
    Mu,
    Conditioned,
}

/// `k` given directly, or as `max(1, ⌊c·n^l⌋)`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct KArgs {
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub l: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count increasing subsequences of length k.
    Count {
        /// One-line notation, 1-based, comma separated.
        #[arg(long, value_delimiter = ',', required_unless_present = "n")]
        perm: Option<Vec<usize>>,
        /// Draw a uniform permutation of this size instead of --perm.
        #[arg(long, conflicts_with = "perm")]
        n: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Also run the brute-force enumeration (n <= 20).
        #[arg(long)]
        bruteforce: bool,
        /// Bit budget for exact counts.
        #[arg(long = "max-bits", default_value_t = incseq::count::DEFAULT_EXACT_BIT_BUDGET)]
        max_bits: u64,
    },
    /// Longest increasing subsequence length.
    Lis {
        #[arg(long, value_delimiter = ',', required_unless_present = "n")]
        perm: Option<Vec<usize>>,
        #[arg(long, conflicts_with = "perm")]
        n: Option<usize>,
        /// Restrict to these values.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<usize>>,
    },
    /// Draw permutations from the uniform, adulterated or conditioned measure.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = MeasureArg::Uniform)]
        measure: MeasureArg,
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Increasing value set for the conditioned measure.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
    /// Exact total variation distance by enumerating S_n.
    TvExact {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        k: KArgs,
    },
    /// Monte Carlo total variation distance.
    TvMc {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        k: KArgs,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Total variation over a grid of n and k rules.
    TvSweep {
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        /// Exponents l for k = max(1, ⌊c·n^l⌋).
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.4,0.5")]
        ls: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Also run Monte Carlo where exact values exist.
        #[arg(long)]
        overlap: bool,
    },
    /// Two-row card insertion experiment.
    CardExp {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// JSON-lines file with one record per trial.
        #[arg(long = "trial-log")]
        trial_log: Option<PathBuf>,
    },
    /// Monte Carlo moments of T̂ next to the exact values.
    ThatMoments {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// E T̂ against k^{3/2}/N for k = ⌊N^λ⌋.
    Scaling {
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        ns: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.8")]
        lambdas: Vec<f64>,
        /// Trials for Monte Carlo second moments (cells above the exact limit).
        #[arg(long, default_value_t = 2000)]
        trials: u64,
    },
    /// L_n under the uniform measure and under μ_{n;k}.
    LisShift {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        k: KArgs,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// c values for thresholds 2√n + c·n^{1/6}.
        #[arg(long = "cs", value_delimiter = ',', default_value = "-2,-1,0,1,2,3")]
        cs: Vec<f64>,
    },
    /// Complement-value LIS under the conditioned measure.
    ComplementLis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        /// γ values for thresholds 2√r − γ·r^{1/6}.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4")]
        gammas: Vec<f64>,
    },
    /// P(Z_{n,⌊c√n⌋} = 0) over a list of c.
    ZeroSweep {
        #[arg(long)]
        n: usize,
        #[arg(long = "cs", value_delimiter = ',', default_value = "1.5,2,2.5")]
        cs: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Law of the j-th selected position among N.
    Pmf {
        /// Total number of places N.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: usize,
        /// Exact rationals alongside the floating values.
        #[arg(long)]
        exact: bool,
    },
    /// The four-term entropy inequality.
    Lemma5 {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        d: f64,
    },
    /// E Z_{n,k} next to its asymptotic form with k = c·n^l.
    Asymptotics {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        l: f64,
    },
    /// Re-run the command recorded in a manifest.
    Replay { manifest: PathBuf },
}
