//! `cubic-units`: command-line front end.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 bad usage or
//! unreadable input.

mod commands;
mod manifest;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "cubic-units", version, about = "Unit equations over the orders of simplest cubic fields")]
pub struct Cli {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sporadic solutions of u1 + u2 = n for one parameter, within an exponent box.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        /// Largest |n|; defaults to max(floor(|a|^(1/3)), 1).
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long, default_value_t = cubic_units::search::DEFAULT_X_MAX)]
        x_max: i64,
        /// Also list trivial classes met in the box.
        #[arg(long)]
        trivial: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Continued-fraction reduction for every a in [from, to]; appends
    /// certificates to --out and resumes from it.
    Sweep {
        #[arg(long)]
        from: i64,
        #[arg(long)]
        to: i64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        precision_cap: Option<u32>,
    },
    /// Replays every certificate in a JSONL file.
    VerifyCerts {
        file: PathBuf,
    },
    /// Exponent bounds for one parameter, or the absolute parameter bound
    /// and its derivation when --a is omitted.
    Bounds {
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The equivalence class of a solution given by exponents `s,x,y`.
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        u1: String,
        #[arg(long, allow_hyphen_values = true)]
        u2: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduces the table of sporadic solutions for -1 <= a <= 100.
    Table {
        #[arg(long, default_value_t = cubic_units::search::DEFAULT_X_MAX)]
        x_max: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Alternative fixture file.
        #[arg(long, hide = true)]
        fixture: Option<PathBuf>,
    },
    /// Sporadic classes for -1 <= a <= a_max, 1 <= n <= n_max.
    ConjectureScan {
        /// Largest parameter.
        #[arg(long, default_value_t = 400)]
        a: i64,
        #[arg(long, default_value_t = 400)]
        n_max: u64,
        #[arg(long, default_value_t = 60)]
        x_max: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// End-to-end check: table, absolute bound, full reduction sweep.
    Theorem {
        /// Sweep only every 100th parameter.
        #[arg(long)]
        quick: bool,
        /// Certificate file for the sweep.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        precision_cap: Option<u32>,
        #[arg(long, hide = true)]
        fixture: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
