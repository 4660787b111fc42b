//! `frs`: encode, corrupt, decode, and audit folded Reed-Solomon codes from
//! the command line. Experiment parameters live in a flat key=value config
//! file; a few global flags override it. Results are JSON (CSV for tables)
//! on stdout or `--out`.
//!
//! Exit codes: 0 success, 1 usage/config/input error, 2 enumeration cap
//! exceeded, 3 internal invariant violation.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "frs", version, about = "folded Reed-Solomon list decoding toolkit")]
pub struct Cli {
    /// Flat key=value experiment config file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Master seed; overrides `seed` from the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Trial count; overrides `trials` from the config.
    #[arg(long, global = true)]
    pub trials: Option<u64>,

    /// Enumeration cap; overrides `cap` from the config.
    #[arg(long, global = true)]
    pub cap: Option<u64>,

    /// Interpolation variant (affine or linear); overrides the config.
    #[arg(long, global = true)]
    pub variant: Option<String>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Omit wall-clock timing fields so outputs are byte-reproducible.
    #[arg(long, global = true)]
    pub no_timings: bool,

    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Encode a JSON message (k field elements) to a codeword.
    Encode {
        /// JSON file holding the message coefficients.
        message: PathBuf,
    },
    /// List-decode a received word (JSON array of columns).
    Decode {
        /// JSON file holding the received word.
        received: PathBuf,
    },
    /// Run seeded encode-corrupt-decode trials and aggregate statistics.
    Simulate,
    /// Tabulate agreement-fraction formulas over an (s, m, R) grid as CSV.
    RadiusTable,
    /// Sample evasive sets and audit size and subspace intersections.
    EvasiveAudit,
    /// List-recover from per-position candidate sets (JSON file).
    Recover {
        /// JSON file: one array of candidate columns per position.
        sets: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version land here too and must stay exit 0.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
