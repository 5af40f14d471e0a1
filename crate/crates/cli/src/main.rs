//! `mahonian-lab`: exact joint (inv, maj) distributions, the correction
//! factor, and the desk-scale central-limit checks, from the command line.
//!
//! Exit codes: 0 success, 1 failed check or runtime failure, 2 usage error.

mod cache;
mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "mahonian-lab",
    version,
    about = "Exact (inv, maj) joint distributions on permutations and their limit behavior",
    propagate_version = true
)]
pub struct Cli {
    /// Directory for cached joint tables (`Hn_<n>.csv`).
    #[arg(
        long,
        global = true,
        env = "MAHONIAN_CACHE_DIR",
        default_value = ".mahonian-cache"
    )]
    pub cache_dir: PathBuf,

    /// Cap worker parallelism; 0 keeps the library default.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Write data to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Full enumeration of S_n (n <= 12).
    Brute,
    /// Series route via Newton's identities (n <= 24).
    Roselle,
    /// Reconstruction from the partition coefficients (n <= 8).
    Cmu,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
pub enum Command {
    /// Compute the joint (inv, maj) table of S_n.
    Hn {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Roselle)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run the full invariant suite and emit a JSON report.
    Verify {
        #[arg(long, default_value_t = 9)]
        n_max: usize,
    },
    /// Evaluate the correction factor on an (s, t) grid.
    FnGrid {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        s_max: f64,
        #[arg(long, default_value_t = 2.0)]
        t_max: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        /// Allow n beyond the default cap of 16 (up to 24).
        #[arg(long)]
        allow_large: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Evaluate characteristic functions on an (s, t) grid.
    Charfn {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        s_max: f64,
        #[arg(long, default_value_t = 2.0)]
        t_max: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        /// Which function to tabulate.
        #[arg(long, value_enum, default_value_t = CharKind::Joint)]
        function: CharKind,
        #[arg(long)]
        allow_large: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare the exact joint CDF against the bivariate normal.
    CdfCompare {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        u_max: f64,
        #[arg(long, default_value_t = 5)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run the inequality suite and emit a JSON report.
    Bounds {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Compute the partition-indexed correction coefficients.
    Cmu {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CharKind {
    /// Joint characteristic function (reference: Gaussian).
    Joint,
    /// Marginal product times the correction factor (reference: joint), so
    /// the deviation column is the factorization residual.
    Factored,
}

/// Command failure with its process exit code.
pub enum CliError {
    /// Bad flags or out-of-range arguments: exit 2.
    Usage(String),
    /// A failed check, corrupt data, or a runtime error: exit 1.
    Failure(String),
}

impl From<mahonian_core::Error> for CliError {
    fn from(e: mahonian_core::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Ignore the error if a pool already exists; the cap is best-effort.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
