//! `lrc`: build, inspect, decode, and repair locally repairable erasure
//! codes from the command line.
//!
//! Exit codes are a stable contract:
//! 0 success, 2 usage or parameter error, 3 sampling failed, 4 analysis
//! budget exceeded, 5 undecodable erasure pattern, 6 integrity violation.
//! All randomness flows from `--seed`; reports are byte-identical for any
//! `--threads` value; `--json` mirrors every report.

mod analyze;
mod codefile;
mod common;
mod construct;
mod decode;
mod gpc_check;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use common::CmdOutcome;

#[derive(Parser)]
#[command(
    name = "lrc",
    version,
    about = "Locally repairable erasure codes: construct, analyze, decode, simulate repair"
)]
struct Cli {
    /// Seed for randomized construction and simulation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads; reports are byte-identical for any value.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Emit machine-readable JSON instead of prose.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and optionally write it to a code file.
    Construct {
        #[command(subcommand)]
        which: Construction,
    },
    /// Measure a code file: distance, locality, optimality, structure.
    Analyze {
        /// Code file to read.
        file: PathBuf,
        /// Locality parameter for the structural reports
        /// (default: the measured information locality).
        #[arg(long)]
        r: Option<usize>,
        /// Re-verify stored metadata against fresh measurements.
        #[arg(long)]
        verify: bool,
    },
    /// Fill in the erased symbols (`?` tokens) of a received word.
    Decode {
        /// Code file to read.
        file: PathBuf,
        /// Word file: n whitespace-separated symbols, `?` marking erasures.
        word: PathBuf,
    },
    /// Check generalized-pyramid properties of a systematic code file.
    GpcCheck {
        /// Code file to read (units first, then parity columns).
        file: PathBuf,
        /// Largest parity subset swept by the elimination check.
        #[arg(long, default_value_t = 3)]
        max_parities: usize,
    },
    /// Erase coordinates over many trials and repair them, reporting
    /// which symbols were read.
    SimulateRepair {
        /// Code file to read.
        file: PathBuf,
        /// `random:N` for N fresh random failures per trial, or an explicit
        /// comma-separated coordinate list used in every trial.
        #[arg(long, default_value = "random:1")]
        failures: String,
        /// Number of trials.
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
}

#[derive(Subcommand)]
enum Construction {
    /// Split an MDS parity across message groups of size r:
    /// an optimal [k + ceil(k/r) + d - 2, k, d] code.
    Pyramid {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
        /// Field order (prime power).
        #[arg(long)]
        q: u64,
        /// Where to write the code file.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Measure the distance and record it in the file.
        #[arg(long)]
        verify: bool,
    },
    /// Distance-4 code with k/r locality-r parities and two globals of
    /// locality exactly k - k/r + 1.
    CanonicalD4 {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// Sample an optimal [k + k/r + d - 2, k, d] code in general position
    /// (requires r | k, r < k and 2 < d < r + 3).
    OptimalGeneral {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// Sample a code in which every coordinate, parities included, has
    /// locality exactly r (requires (r + 1) | n).
    Uniform {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// Sample a generalized pyramid code on a support graph, written as
    /// semicolon-separated parities of comma-separated positions,
    /// e.g. "0,1;2,3;0,1,2,3".
    Gpc {
        /// Number of message positions.
        #[arg(long)]
        k: usize,
        #[arg(long)]
        graph: String,
        #[arg(long)]
        q: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let seed = cli.seed;
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(2);
    }
    let outcome: CmdOutcome = match cli.command {
        Command::Construct { which } => construct::run(which, seed, json),
        Command::Analyze { file, r, verify } => analyze::run(&file, r, verify, json),
        Command::Decode { file, word } => decode::run(&file, &word, json),
        Command::GpcCheck { file, max_parities } => {
            gpc_check::run(&file, max_parities, json)
        }
        Command::SimulateRepair { file, failures, trials } => {
            simulate::run(&file, &failures, trials, seed, json)
        }
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
