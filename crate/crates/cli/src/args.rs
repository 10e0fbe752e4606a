use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "symsearch",
    version,
    about = "Inspect search spaces and run seeded search flows"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the decision spec and space size of a space.
    Inspect(SpaceArgs),
    /// Print the canonical DNAs of a discrete space, one per line.
    Enumerate {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Run a search flow and write its trial log.
    Search(SearchArgs),
    /// Tabulate the synthetic oracle over a space.
    DumpTable {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 0)]
        oracle_seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Nasbench,
}

#[derive(Debug, Clone, Args)]
pub struct SpaceArgs {
    /// Space file in the symbolic JSON format.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub space: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// Node count of the builtin space and the synthetic oracle.
    #[arg(long, default_value_t = 3)]
    pub nodes: usize,
    /// Op count of the builtin space and the synthetic oracle.
    #[arg(long, default_value_t = 3)]
    pub ops: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Synthetic,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoKind {
    Random,
    Exhaustive,
    Regevo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlowKind {
    Joint,
    Factorized,
    Hybrid,
    Separate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregatorKind {
    Top5,
    Mean,
    Max,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long, value_enum, default_value = "synthetic")]
    pub oracle: OracleKind,
    #[arg(long, default_value_t = 0)]
    pub oracle_seed: u64,
    /// Reward table for `--oracle table`.
    #[arg(long, required_if_eq("oracle", "table"))]
    pub table: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "regevo")]
    pub algo: AlgoKind,
    /// Algorithm for the inner loop or second phase; defaults to `--algo`.
    #[arg(long, value_enum)]
    pub inner_algo: Option<AlgoKind>,
    #[arg(long, value_enum, default_value = "joint")]
    pub flow: FlowKind,
    /// Trials of the joint search, the outer loop, or phase A of `separate`.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 10)]
    pub inner_trials: usize,
    /// Phase-2 trials of `hybrid`, phase B of `separate`.
    #[arg(long, default_value_t = 0)]
    pub phase2_trials: usize,
    /// Hint selecting the decision points of the outer loop (or phase A).
    #[arg(long)]
    pub partition: Option<String>,
    #[arg(long, default_value_t = 25)]
    pub population: usize,
    #[arg(long, default_value_t = 5)]
    pub tournament: usize,
    #[arg(long, value_enum, default_value = "top5")]
    pub aggregator: AggregatorKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trial log path. With `--repeat`, run `i` writes `<stem>.<i>.<ext>`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Independent runs with seeds `seed, seed + 1, ...`.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub repeat: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    /// Record wall-clock milliseconds per trial.
    #[arg(long)]
    pub timing: bool,
}
