//! One function per subcommand, plus the staged output writer.
//!
//! Commands that produce files stage everything in memory and write only
//! after the computation has fully succeeded, manifest last; a failed
//! write unlinks whatever already landed so an output directory never
//! holds a partial run.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use symqfi::encoding::collective_encoding;
use symqfi::experiments::{
    gap_qfi_scan, haar_minimal_set, optimize_qfi, records_to_csv, sampling_campaign,
    summaries_to_csv, BuiltinGenerator, CampaignConfig, OptimizeConfig, ScanConfig, ThetaPolicy,
};
use symqfi::hamiltonian::DEFAULT_DEGENERACY_TOL;
use symqfi::qfi::qfi_symmetric;
use symqfi::symspace::{correlator, CorrelatorCache, CorrelatorIndex, SymState};

use crate::config::{
    build_pool, require, resolve_generator, resolve_theta, resolve_workers, CliError, FileConfig,
    Result,
};
use crate::{
    CorrelatorArgs, GapScanArgs, HaarRankArgs, OptimizeArgs, QfiArgs, SampleArgs,
};

/// Norm deviation in a state file above which loading warns.
const NORM_WARN_TOL: f64 = 1e-6;

fn load_config(path: Option<&Path>) -> Result<FileConfig> {
    match path {
        Some(path) => FileConfig::load(path),
        None => Ok(FileConfig::default()),
    }
}

/// Files for one run, written together once the run has succeeded.
struct OutputStage {
    dir: PathBuf,
    files: Vec<(&'static str, String)>,
}

impl OutputStage {
    fn new(dir: Option<&Path>) -> Self {
        OutputStage {
            dir: dir.unwrap_or_else(|| Path::new(".")).to_path_buf(),
            files: Vec::new(),
        }
    }

    fn add(&mut self, name: &'static str, contents: String) {
        self.files.push((name, contents));
    }

    fn commit(self, command: &str, config: Value, started: Instant) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|err| {
            CliError::Config(format!(
                "cannot create output directory {}: {err}",
                self.dir.display()
            ))
        })?;
        let manifest = json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "config": config,
            "wall_time_ms": started.elapsed().as_millis() as u64,
            "outputs": self.files.iter().map(|(name, _)| *name).collect::<Vec<_>>(),
        });
        let manifest_text =
            serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";

        let mut written: Vec<PathBuf> = Vec::new();
        let mut chunks: Vec<(&str, &str)> =
            self.files.iter().map(|(name, text)| (*name, text.as_str())).collect();
        chunks.push(("run_manifest.json", &manifest_text));
        for (name, text) in chunks {
            let path = self.dir.join(name);
            if let Err(err) = fs::write(&path, text) {
                for stale in &written {
                    let _ = fs::remove_file(stale);
                }
                return Err(CliError::Config(format!(
                    "cannot write {}: {err}",
                    path.display()
                )));
            }
            written.push(path);
        }
        for path in &written {
            eprintln!("wrote {}", path.display());
        }
        Ok(())
    }
}

pub fn run_correlator(args: &CorrelatorArgs) -> Result<()> {
    let file = load_config(args.config.as_deref())?;
    let n_qubits = require(
        args.n_qubits,
        file.n_qubits,
        "qubit count: set --N or config key \"N\"",
    )?;
    let cache = CorrelatorCache::new();
    let op = correlator(n_qubits, CorrelatorIndex::new(args.a, args.b, args.c), &cache)?;
    println!("{}", op.to_json());
    Ok(())
}

pub fn run_qfi(args: &QfiArgs) -> Result<()> {
    let file = load_config(args.config.as_deref())?;
    let text = fs::read_to_string(&args.state_file).map_err(|err| {
        CliError::Config(format!(
            "cannot read state file {}: {err}",
            args.state_file.display()
        ))
    })?;
    let (state, deviation) = SymState::from_json(&text).map_err(|err| {
        CliError::Config(format!("state file {}: {err}", args.state_file.display()))
    })?;
    if deviation > NORM_WARN_TOL {
        eprintln!("warning: state norm deviated from 1 by {deviation:.3e}; renormalized");
    }
    let generator = resolve_generator(
        args.generator.as_deref(),
        file.generator.as_deref(),
        BuiltinGenerator::LinearPhase,
    )?;
    let theta = match resolve_theta(args.theta.as_deref(), file.theta, ThetaPolicy::Fixed(0.0))? {
        ThetaPolicy::Fixed(value) => value,
        ThetaPolicy::Random => {
            return Err(CliError::config(
                "theta must be a number here; \"random\" applies to sampling and optimization",
            ))
        }
    };
    let encoding = collective_encoding(&generator.model(), theta, state.n_qubits())?;
    let result = qfi_symmetric(&state, &encoding)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&result).expect("result serializes")
    );
    Ok(())
}

pub fn run_sample(args: &SampleArgs) -> Result<()> {
    let started = Instant::now();
    let file = load_config(args.common.config.as_deref())?;
    let config = CampaignConfig {
        n_list: resolve_list(&args.n_qubits, file.n_list, file.n_qubits, "N_list", "N")?,
        k_list: resolve_list(&args.k, file.k_list, file.k, "k_list", "k")?,
        samples: require(
            args.samples,
            file.samples,
            "sample count: set --samples or config key \"samples\"",
        )?,
        generator: resolve_generator(
            args.generator.as_deref(),
            file.generator.as_deref(),
            BuiltinGenerator::LinearPhase,
        )?,
        theta: resolve_theta(args.theta.as_deref(), file.theta, ThetaPolicy::Random)?,
        master_seed: args.seed.or(file.master_seed).unwrap_or(0),
        degeneracy_tol: args
            .tol_degeneracy
            .or(file.degeneracy_tol)
            .unwrap_or(DEFAULT_DEGENERACY_TOL),
        keep_degenerate: args.keep_degenerate.or(file.keep_degenerate).unwrap_or(false),
    };
    config.validate().map_err(CliError::from)?;
    let workers = resolve_workers(args.common.workers, file.workers)?;

    let pool = build_pool(workers)?;
    let cache = CorrelatorCache::new();
    let result = pool.install(|| sampling_campaign(&config, &cache))?;
    for row in &result.summaries {
        if row.n_kept == 0 {
            eprintln!(
                "warning: cell N={}, k={} kept no samples (every draw was degenerate)",
                row.n_qubits, row.k
            );
        }
    }

    let mut resolved = serde_json::to_value(&config).expect("config serializes");
    record_workers(&mut resolved, workers);
    let mut stage = OutputStage::new(args.common.out.as_deref());
    stage.add("records.csv", records_to_csv(&result.records));
    stage.add("summary.csv", summaries_to_csv(&result.summaries));
    stage.commit("sample", resolved, started)
}

pub fn run_gap_scan(args: &GapScanArgs) -> Result<()> {
    let started = Instant::now();
    let file = load_config(args.common.config.as_deref())?;
    let config = ScanConfig {
        n_qubits: require(
            args.n_qubits,
            file.n_qubits,
            "qubit count: set --N or config key \"N\"",
        )?,
        k: require(args.k, file.k, "interaction order: set --k or config key \"k\"")?,
        samples: require(
            args.samples,
            file.samples,
            "sample count: set --samples or config key \"samples\"",
        )?,
        master_seed: args.seed.or(file.master_seed).unwrap_or(0),
        degeneracy_tol: args
            .tol_degeneracy
            .or(file.degeneracy_tol)
            .unwrap_or(DEFAULT_DEGENERACY_TOL),
    };
    let workers = resolve_workers(args.common.workers, file.workers)?;

    let pool = build_pool(workers)?;
    let cache = CorrelatorCache::new();
    let result = pool.install(|| gap_qfi_scan(&config, &cache))?;

    let mut resolved = json!({
        "N": config.n_qubits,
        "k": config.k,
        "samples": config.samples,
        "master_seed": config.master_seed,
        "degeneracy_tol": config.degeneracy_tol,
    });
    record_workers(&mut resolved, workers);
    let mut stage = OutputStage::new(args.common.out.as_deref());
    stage.add("records_general.csv", records_to_csv(&result.general));
    stage.add("records_diagonal.csv", records_to_csv(&result.diagonal));
    stage.add(
        "envelope.json",
        serde_json::to_string_pretty(&result.envelope).expect("envelope serializes") + "\n",
    );
    stage.commit("gap-scan", resolved, started)
}

pub fn run_haar_rank(args: &HaarRankArgs) -> Result<()> {
    let started = Instant::now();
    let file = load_config(args.common.config.as_deref())?;
    let n_qubits = require(
        args.n_qubits,
        file.n_qubits,
        "qubit count: set --N or config key \"N\"",
    )?;
    let workers = resolve_workers(args.common.workers, file.workers)?;

    let pool = build_pool(workers)?;
    let cache = CorrelatorCache::new();
    let report = pool.install(|| haar_minimal_set(n_qubits, &cache))?;
    let report_json = report.to_json();
    println!("{report_json}");

    let mut resolved = json!({ "N": n_qubits });
    record_workers(&mut resolved, workers);
    let mut stage = OutputStage::new(args.common.out.as_deref());
    stage.add("haar_set.json", report_json + "\n");
    stage.commit("haar-rank", resolved, started)
}

pub fn run_optimize(args: &OptimizeArgs) -> Result<()> {
    let started = Instant::now();
    let file = load_config(args.common.config.as_deref())?;
    let master_seed = args.seed.or(file.master_seed).unwrap_or(0);
    let policy = resolve_theta(args.theta.as_deref(), file.theta, ThetaPolicy::Random)?;
    // The manifest must pin a concrete theta for exact replay, so "random"
    // resolves here, from the master stream, before the search starts.
    let theta = match policy {
        ThetaPolicy::Fixed(value) => value,
        ThetaPolicy::Random => {
            ChaCha8Rng::seed_from_u64(master_seed).random_range(0.0..std::f64::consts::TAU)
        }
    };
    let config = OptimizeConfig {
        n_qubits: require(
            args.n_qubits,
            file.n_qubits,
            "qubit count: set --N or config key \"N\"",
        )?,
        k: require(args.k, file.k, "interaction order: set --k or config key \"k\"")?,
        generator: resolve_generator(
            args.generator.as_deref(),
            file.generator.as_deref(),
            BuiltinGenerator::Rotating,
        )?,
        theta,
        restarts: args.restarts.or(file.restarts).unwrap_or(20),
        budget: args.budget.or(file.budget).unwrap_or(4000),
        master_seed,
        degeneracy_tol: args
            .tol_degeneracy
            .or(file.degeneracy_tol)
            .unwrap_or(DEFAULT_DEGENERACY_TOL),
    };
    let workers = resolve_workers(args.common.workers, file.workers)?;

    let pool = build_pool(workers)?;
    let cache = CorrelatorCache::new();
    let outcome = pool.install(|| optimize_qfi(&config, &cache))?;
    eprintln!(
        "best QFI {:.6} of bound {:.6} ({:.2}% saturation) after {} evaluations",
        outcome.best_qfi,
        outcome.upper_bound,
        100.0 * outcome.best_qfi / outcome.upper_bound,
        outcome.evaluations
    );

    let mut resolved = json!({
        "N": config.n_qubits,
        "k": config.k,
        "generator": config.generator.name(),
        "theta": config.theta,
        "restarts": config.restarts,
        "budget": config.budget,
        "master_seed": config.master_seed,
        "degeneracy_tol": config.degeneracy_tol,
    });
    record_workers(&mut resolved, workers);
    let result_json = json!({
        "best_qfi": outcome.best_qfi,
        "upper_bound": outcome.upper_bound,
        "saturation": outcome.best_qfi / outcome.upper_bound,
        "best_restart": outcome.best_restart,
        "evaluations": outcome.evaluations,
    });
    let mut stage = OutputStage::new(args.common.out.as_deref());
    stage.add("best_spec.json", outcome.best_spec.to_json() + "\n");
    stage.add(
        "optimize_result.json",
        serde_json::to_string_pretty(&result_json).expect("result serializes") + "\n",
    );
    stage.commit("optimize", resolved, started)
}

/// Grid axis from a repeatable flag, a list key, or a scalar key; the two
/// config spellings are mutually exclusive.
fn resolve_list(
    flag: &[u32],
    file_list: Option<Vec<u32>>,
    file_single: Option<u32>,
    list_key: &str,
    single_key: &str,
) -> Result<Vec<u32>> {
    if !flag.is_empty() {
        return Ok(flag.to_vec());
    }
    match (file_list, file_single) {
        (Some(_), Some(_)) => Err(CliError::Config(format!(
            "config keys '{list_key}' and '{single_key}' are mutually exclusive"
        ))),
        (Some(list), None) => Ok(list),
        (None, Some(single)) => Ok(vec![single]),
        (None, None) => Err(CliError::Config(format!(
            "missing {single_key} values: set --{single_key} or config key \"{list_key}\"/\"{single_key}\""
        ))),
    }
}

/// An explicit worker count joins the manifest; the automatic sizing does
/// not, so replays on other machines stay valid.
fn record_workers(config: &mut Value, workers: usize) {
    if workers > 0 {
        config["workers"] = json!(workers);
    }
}
