//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use markoff_core::engine::DEFAULT_THRESHOLD;
use markoff_core::GroupSelector;

#[derive(Debug, Parser)]
#[command(
    name = "markoff-lab",
    version,
    about = "Orbit censuses of Markoff-type surfaces over prime fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degeneracy class, Δ value, canonical equivalent and Γ′ generator availability.
    Classify(ClassifyArgs),
    /// Orbit census at one prime.
    Census(CensusArgs),
    /// Censuses over a range of primes, with a summary CSV and a run manifest.
    Sweep(SweepArgs),
    /// Slice report for one conic slice.
    Conic(ConicArgs),
    /// Quadratic obstruction partition for degenerate parameters.
    Obstruction(ObstructionArgs),
    /// Exact verification of the polynomial identity suite.
    VerifyIdentities,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Group {
    Gamma,
    GammaH,
    GammaPrime,
}

impl From<Group> for GroupSelector {
    fn from(g: Group) -> Self {
        match g {
            Group::Gamma => GroupSelector::Gamma,
            Group::GammaH => GroupSelector::GammaTimesH,
            Group::GammaPrime => GroupSelector::GammaPrime,
        }
    }
}

#[derive(Debug, Args)]
pub struct ParamsArg {
    /// Parameters A,B,C,D as signed decimal integers.
    #[arg(long, allow_hyphen_values = true, value_name = "A,B,C,D")]
    pub params: String,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    #[arg(long)]
    pub prime: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    #[arg(long)]
    pub prime: u64,
    #[arg(long, value_enum, default_value = "gamma")]
    pub group: Group,
    /// Size above which a component counts as large (capped at p²/8).
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: u64,
    #[arg(long, env = "MARKOFF_LAB_WORKERS")]
    pub workers: Option<usize>,
    /// Write the census JSON here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    /// Inclusive prime range LO..HI.
    #[arg(long, value_name = "LO..HI")]
    pub primes: String,
    #[arg(long, value_enum, default_value = "gamma")]
    pub group: Group,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: u64,
    #[arg(long, env = "MARKOFF_LAB_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, default_value = "sweep-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConicArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    #[arg(long)]
    pub prime: u64,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub axis: u8,
    #[arg(long, allow_hyphen_values = true)]
    pub value: i64,
}

#[derive(Debug, Args)]
pub struct ObstructionArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    #[arg(long)]
    pub prime: u64,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: u64,
    #[arg(long, env = "MARKOFF_LAB_WORKERS")]
    pub workers: Option<usize>,
}
