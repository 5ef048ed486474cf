//! Command-line front end for the lattice-gas zero-freeness toolkit.
//!
//! Every subcommand loads a JSON model or hypergraph file, runs one
//! computation or check, and prints a report to stdout (JSON by default,
//! CSV for the tabular reports with `--csv`), optionally mirroring the
//! exact bytes to `--output`. The exit code carries the verdict:
//!
//! * 0 — success / criterion satisfied
//! * 1 — criterion unsatisfied
//! * 2 — input error (unreadable, unparsable or inconsistent files/flags)
//! * 3 — capability error (the input lacks what the operation needs)
//! * 4 — numerical failure
//! * 5 — threshold breach (`--max-dev`, scan bound)
//!
//! Reports are deterministic for a fixed input file, seed and tolerance;
//! the thread count never changes any emitted number.

mod commands;
mod input;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Classified failure; the variant fixes the exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Exit code 2.
    #[error("{0}")]
    Input(String),
    /// Exit code 3.
    #[error("{0}")]
    Capability(String),
    /// Exit code 4.
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Capability(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

/// Verdict attached to a run that produced a report.
pub enum Status {
    Satisfied,
    /// Some site failed its check; exit code 1.
    Unsatisfied(String),
    /// A requested numeric threshold was crossed; exit code 5.
    Breach(String),
}

/// What a subcommand hands back: the JSON report, an optional CSV rendering
/// that replaces it under `--csv`, and the verdict.
pub struct Outcome {
    pub report: serde_json::Value,
    pub csv: Option<String>,
    pub status: Status,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Dobrushin,
    Kp,
    KpAuto,
    Gms,
    Galvin,
    BencsBuys,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Galvin,
    BencsBuys,
}

#[derive(Parser)]
#[command(name = "latgas", version, about = "Zero-freeness toolkit for finite lattice gases")]
struct RunConfig {
    /// Worker pool size (defaults to LATGAS_THREADS, then all cores).
    #[arg(long, global = true, env = "LATGAS_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the grand partition function for the query in the model file.
    Partition {
        /// Model file (JSON).
        #[arg(long)]
        input: PathBuf,
        /// Mirror the report to this file.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Evaluate every prefix of the volume (in site order), not just the query.
        #[arg(long)]
        sweep: bool,
        /// Emit the report as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Run a zero-freeness criterion over every site.
    Check {
        /// Model file, or hypergraph file for galvin / bencs-buys (JSON).
        #[arg(long)]
        input: PathBuf,
        /// Mirror the report to this file.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        /// Per-site weights file ({"r": {...}} or {"alpha": {...}}); dobrushin and kp only.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Degree bound for the hypergraph criteria.
        #[arg(long = "Delta")]
        delta: Option<f64>,
        /// Emit the per-site table as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Solve the correlation fixed-point equations by Picard iteration.
    KsSolve {
        /// Model file (JSON).
        #[arg(long)]
        input: PathBuf,
        /// Mirror the report to this file.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Sup-norm stopping tolerance between sweeps.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Emit the correlation table as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Compare effective activities from enumeration, recursion and the solver.
    Crosscheck {
        /// Model file (JSON).
        #[arg(long)]
        input: PathBuf,
        /// Mirror the report to this file.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Per-site weights for the entry criterion check (default: derived).
        #[arg(long)]
        params: Option<PathBuf>,
        /// Solver stopping tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Largest tolerated pairwise deviation; exceeding it exits with code 5.
        #[arg(long, allow_negative_numbers = true)]
        max_dev: Option<f64>,
        /// Emit the per-site table as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Sample activities on the per-site polydiscs and track min |Z|.
    Scan {
        /// Hypergraph file (JSON).
        #[arg(long)]
        input: PathBuf,
        /// Mirror the report to this file.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        rule: RuleArg,
        /// Degree bound the radii are computed from.
        #[arg(long = "Delta")]
        delta: f64,
        /// Number of random activity vectors to draw.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    if let Some(threads) = config.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        // All emitted numbers are pool-size independent, so a pool that was
        // already initialized is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }

    let (result, output) = match config.command {
        Command::Partition { input, output, sweep, csv } => {
            (commands::partition(&input, sweep, csv), output)
        }
        Command::Check { input, output, criterion, params, delta, csv } => {
            (commands::check(&input, criterion, params.as_deref(), delta, csv), output)
        }
        Command::KsSolve { input, output, tol, csv } => {
            (commands::ks_solve(&input, tol, csv), output)
        }
        Command::Crosscheck { input, output, params, tol, max_dev, csv } => {
            (commands::crosscheck(&input, params.as_deref(), tol, max_dev, csv), output)
        }
        Command::Scan { input, output, rule, delta, samples, seed } => {
            (commands::scan(&input, rule, delta, samples, seed), output)
        }
    };

    match result {
        Ok(outcome) => finish(outcome, output.as_deref()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn finish(outcome: Outcome, output: Option<&std::path::Path>) -> ExitCode {
    let text = match &outcome.csv {
        Some(csv) => csv.clone(),
        None => {
            let mut body = serde_json::to_string_pretty(&outcome.report)
                .expect("reports contain only plain JSON values");
            body.push('\n');
            body
        }
    };
    print!("{text}");
    if let Some(path) = output {
        if let Err(e) = std::fs::write(path, text.as_bytes()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    match outcome.status {
        Status::Satisfied => ExitCode::SUCCESS,
        Status::Unsatisfied(msg) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Status::Breach(msg) => {
            eprintln!("{msg}");
            ExitCode::from(5)
        }
    }
}
