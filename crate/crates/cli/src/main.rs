//! Command-line front end: space ingestion, homology and basis tables,
//! magnitude functions, and the verification suites.
//!
//! Exit codes: 0 success, 1 usage error, 2 hypothesis violation (bad input
//! data or a theorem hypothesis that does not hold), 3 resource limit,
//! 4 internal assertion or failed verification.

mod cache;
mod commands;
mod input;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "maghom",
    version,
    about = "Exact magnitude homology of finite quasi metric spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags selecting the input space.
#[derive(Debug, Args, Clone)]
pub struct SpaceArgs {
    /// Named family: NAME [PARAMS...], e.g. `--family cycle 5`.
    #[arg(long, num_args = 1.., value_name = "NAME [PARAMS]")]
    pub family: Option<Vec<String>>,
    /// Distance matrix CSV file (header row of labels; cells p/q or inf).
    #[arg(long, value_name = "FILE", conflicts_with = "family")]
    pub matrix: Option<String>,
    /// Edge list file, one `u v` per line.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["family", "matrix"])]
    pub edges: Option<String>,
    /// Treat the edge list as directed.
    #[arg(long, default_value_t = false)]
    pub directed: bool,
    /// Seed for `--family random_graph N P` when the seed parameter is
    /// omitted.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Clone)]
pub struct OutputArgs {
    /// Write the result here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<String>,
    /// Cache directory: results are keyed by space hash, command, and
    /// parameters. Advisory and safe to delete.
    #[arg(long, value_name = "DIR")]
    pub cache: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a space and print its structural profile.
    Space {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Homology rank/torsion table over a bidegree window.
    Homology {
        #[command(flatten)]
        space: SpaceArgs,
        /// Single homological degree.
        #[arg(long)]
        n: Option<usize>,
        /// Single exact length, as an integer or `p/q`.
        #[arg(long)]
        l: Option<String>,
        /// Largest homological degree (default 3).
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        /// Largest integer length (default 4).
        #[arg(long, default_value_t = 4)]
        lmax: i64,
        /// Chain complex variant.
        #[arg(long, value_parser = ["normalized", "unnormalized"], default_value = "normalized")]
        variant: String,
        /// Basis-size cap per bidegree.
        #[arg(long)]
        cap: Option<usize>,
        /// Worker threads for fanning out bidegrees.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Output format.
        #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
        format: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Θ basis tuples at one bidegree (geodetic spaces only).
    Theta {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        n: usize,
        /// Exact length, as an integer or `p/q`.
        #[arg(long)]
        l: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Moore-graph rank table (recurrence cross-checked against the closed
    /// form), optionally with explicit cycle tuples.
    Moore {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 4)]
        nmax: i64,
        #[arg(long, default_value_t = 6)]
        lmax: i64,
        /// Also enumerate the explicit cycle tuples per bidegree.
        #[arg(long, default_value_t = false)]
        cycles: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Even-cycle cycle chains θ_{pq}(x).
    Evencycle {
        /// Number of vertices N (even, ≥ 6).
        #[arg(long = "N", visible_alias = "vertices")]
        n_vertices: usize,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        /// Single basepoint; all of them when omitted.
        #[arg(long)]
        basepoint: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Magnitude function of a distance-degree regular graph with its
    /// series expansion.
    Magnitude {
        #[command(flatten)]
        space: SpaceArgs,
        /// Series expansion order.
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Export one boundary matrix in coordinate-list text form.
    ExportMatrix {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        n: usize,
        /// Exact length, as an integer or `p/q`.
        #[arg(long)]
        l: String,
        #[arg(long, value_parser = ["normalized", "unnormalized"], default_value = "normalized")]
        variant: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verification suites with machine-readable pass/fail reports.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifySuite {
    /// Θ enumeration against the Smith-normal-form oracle on a window.
    ThetaVsSnf {
        #[command(flatten)]
        space: SpaceArgs,
        /// Window bound: checks all (n, ℓ) with n, ℓ ≤ budget.
        #[arg(long, default_value_t = 4)]
        budget: i64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Moore detection, rank evaluators, and cycle counts.
    Moore {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 5)]
        nmax: i64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Even-cycle cycles: ∂θ = 0, spanning families, rank pattern.
    EvenCycle {
        #[arg(long = "N", visible_alias = "vertices")]
        n_vertices: usize,
        #[arg(long, default_value_t = 4)]
        nmax: i64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Resolution certification: minimal resolution for a geodetic space,
    /// or the even-cycle total complex and chain map with `--N`.
    Resolution {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long = "N")]
        n_vertices: Option<usize>,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The five multiplication relations of the even-cycle operators.
    MultRel {
        #[arg(long = "N", visible_alias = "vertices")]
        n_vertices: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Magnitude series coefficients versus alternating rank sums.
    Euler {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 4)]
        order: i64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Errors carrying the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Hypothesis(String),
    Resource(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Hypothesis(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Hypothesis(m)
            | CliError::Resource(m)
            | CliError::Internal(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are not usage errors.
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{}", e);
                return ExitCode::SUCCESS;
            }
            eprint!("{}", e);
            return ExitCode::from(1);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
