//! Command-line front end for the symqfi library.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod config;
mod run;

#[derive(Parser)]
#[command(
    name = "symqfi",
    version,
    about = "Collective correlators, ground-state sampling, and quantum Fisher information on the symmetric subspace"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a symmetrized k-body correlator block as JSON
    Correlator(CorrelatorArgs),
    /// Print the QFI of a state file under a built-in encoding as JSON
    Qfi(QfiArgs),
    /// Sample random Hamiltonians over an (N, k) grid and summarize ground-state QFI
    Sample(SampleArgs),
    /// Scan the energy-gap/QFI tradeoff envelope over two Hamiltonian ensembles
    GapScan(GapScanArgs),
    /// Find the minimal correlator set spanning all symmetric-subspace operators
    HaarRank(HaarRankArgs),
    /// Search Hamiltonian coefficients for maximal ground-state QFI
    Optimize(OptimizeArgs),
}

/// Flags shared by every file-producing subcommand.
#[derive(Args)]
struct CommonArgs {
    /// JSON config file; flags override its values
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory, created if missing (default: current directory)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads (default: SYMQFI_WORKERS, then all cores)
    #[arg(long, value_name = "COUNT")]
    workers: Option<usize>,
}

#[derive(Args)]
struct CorrelatorArgs {
    /// JSON config file; flags override its values
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Qubit count
    #[arg(long = "N", value_name = "N")]
    n_qubits: Option<u32>,
    /// Number of sigma_x/2 factors
    #[arg(long)]
    a: u32,
    /// Number of sigma_y/2 factors
    #[arg(long)]
    b: u32,
    /// Number of sigma_z/2 factors
    #[arg(long)]
    c: u32,
}

#[derive(Args)]
struct QfiArgs {
    /// JSON config file; flags override its values
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// State file: JSON {n_qubits, re, im} amplitudes in Dicke order
    #[arg(long, value_name = "FILE")]
    state_file: PathBuf,
    /// Encoding generator: linear-phase or rotating (default: linear-phase)
    #[arg(long, value_name = "NAME")]
    generator: Option<String>,
    /// Encoding parameter, a number (default: 0)
    #[arg(long, value_name = "THETA")]
    theta: Option<String>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Master seed for all draws (default: 0)
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Qubit count; repeat the flag for a grid
    #[arg(long = "N", value_name = "N")]
    n_qubits: Vec<u32>,
    /// Interaction order; repeat the flag for a grid
    #[arg(long, value_name = "K")]
    k: Vec<u32>,
    /// Hamiltonians drawn per (N, k) cell
    #[arg(long, value_name = "COUNT")]
    samples: Option<u64>,
    /// Encoding generator: linear-phase or rotating (default: linear-phase)
    #[arg(long, value_name = "NAME")]
    generator: Option<String>,
    /// Encoding parameter: a number or "random" (default: random)
    #[arg(long, value_name = "THETA")]
    theta: Option<String>,
    /// Relative gap below which a ground state counts as degenerate
    #[arg(long = "tol-degeneracy", value_name = "TOL")]
    tol_degeneracy: Option<f64>,
    /// Keep degenerate samples in the summary statistics
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    keep_degenerate: Option<bool>,
}

#[derive(Args)]
struct GapScanArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Master seed for all draws (default: 0)
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Qubit count, even
    #[arg(long = "N", value_name = "N")]
    n_qubits: Option<u32>,
    /// Interaction order
    #[arg(long, value_name = "K")]
    k: Option<u32>,
    /// Hamiltonians drawn per ensemble
    #[arg(long, value_name = "COUNT")]
    samples: Option<u64>,
    /// Relative gap below which a ground state counts as degenerate
    #[arg(long = "tol-degeneracy", value_name = "TOL")]
    tol_degeneracy: Option<f64>,
}

#[derive(Args)]
struct HaarRankArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Qubit count
    #[arg(long = "N", value_name = "N")]
    n_qubits: Option<u32>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Master seed for restarts and the theta draw (default: 0)
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Qubit count
    #[arg(long = "N", value_name = "N")]
    n_qubits: Option<u32>,
    /// Interaction order
    #[arg(long, value_name = "K")]
    k: Option<u32>,
    /// Encoding generator: linear-phase or rotating (default: rotating)
    #[arg(long, value_name = "NAME")]
    generator: Option<String>,
    /// Encoding parameter: a number or "random" (default: random)
    #[arg(long, value_name = "THETA")]
    theta: Option<String>,
    /// Independent random restarts (default: 20)
    #[arg(long, value_name = "COUNT")]
    restarts: Option<u32>,
    /// Poll evaluations allowed per restart (default: 4000)
    #[arg(long, value_name = "COUNT")]
    budget: Option<u64>,
    /// Relative gap below which a ground state counts as degenerate
    #[arg(long = "tol-degeneracy", value_name = "TOL")]
    tol_degeneracy: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Correlator(args) => run::run_correlator(args),
        Command::Qfi(args) => run::run_qfi(args),
        Command::Sample(args) => run::run_sample(args),
        Command::GapScan(args) => run::run_gap_scan(args),
        Command::HaarRank(args) => run::run_haar_rank(args),
        Command::Optimize(args) => run::run_optimize(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
