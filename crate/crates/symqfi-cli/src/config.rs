//! Config-file loading and flag/file/environment resolution.
//!
//! One JSON schema drives every subcommand: each command reads the keys
//! it needs and ignores the rest, so the same file (or a previous run's
//! manifest, whose "config" object is unwrapped on load) can feed any of
//! them. Flags override file values; SYMQFI_WORKERS is consulted only
//! when neither source sets the worker count.

use std::fmt;
use std::fs;
use std::path::Path;

use serde_json::Value;

use symqfi::encoding::EncodingError;
use symqfi::experiments::{BuiltinGenerator, ExperimentError, ThetaPolicy};
use symqfi::hamiltonian::HamiltonianError;
use symqfi::qfi::QfiError;
use symqfi::symspace::SymspaceError;

/// Failures split by exit code: 1 for anything wrong with the invocation
/// or its inputs, 2 for computations that started from a valid setup and
/// broke down.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Numerical(msg) => f.write_str(msg),
        }
    }
}

fn encoding_is_numerical(err: &EncodingError) -> bool {
    matches!(
        err,
        EncodingError::NotUnitary(_) | EncodingError::Eigensolver(_)
    )
}

fn hamiltonian_is_numerical(err: &HamiltonianError) -> bool {
    matches!(
        err,
        HamiltonianError::NotHermitian(_)
            | HamiltonianError::FlatSpectrum { .. }
            | HamiltonianError::NormalizationDegenerate { .. }
            | HamiltonianError::Eigensolver(_)
    )
}

fn qfi_is_numerical(err: &QfiError) -> bool {
    match err {
        QfiError::NotHermitian(_)
        | QfiError::NegativeQfi(_)
        | QfiError::NonFinite
        | QfiError::NonPositiveInformation(_)
        | QfiError::NegativeGap(_) => true,
        QfiError::Encoding(inner) => encoding_is_numerical(inner),
        _ => false,
    }
}

impl From<ExperimentError> for CliError {
    fn from(err: ExperimentError) -> Self {
        // Symspace errors are always malformed input; the rest split into
        // setup problems and genuine numerical breakdowns.
        let numerical = match &err {
            ExperimentError::AllDegenerate | ExperimentError::RankDeficient { .. } => true,
            ExperimentError::Hamiltonian(inner) => hamiltonian_is_numerical(inner),
            ExperimentError::Qfi(inner) => qfi_is_numerical(inner),
            ExperimentError::Encoding(inner) => encoding_is_numerical(inner),
            _ => false,
        };
        if numerical {
            CliError::Numerical(err.to_string())
        } else {
            CliError::Config(err.to_string())
        }
    }
}

impl From<SymspaceError> for CliError {
    fn from(err: SymspaceError) -> Self {
        ExperimentError::from(err).into()
    }
}

impl From<EncodingError> for CliError {
    fn from(err: EncodingError) -> Self {
        ExperimentError::from(err).into()
    }
}

impl From<QfiError> for CliError {
    fn from(err: QfiError) -> Self {
        ExperimentError::from(err).into()
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Every key a config file may set. Commands pick the subset they use.
#[derive(Debug, Default)]
pub struct FileConfig {
    pub n_list: Option<Vec<u32>>,
    pub n_qubits: Option<u32>,
    pub k_list: Option<Vec<u32>>,
    pub k: Option<u32>,
    pub samples: Option<u64>,
    pub generator: Option<String>,
    pub theta: Option<ThetaPolicy>,
    pub master_seed: Option<u64>,
    pub degeneracy_tol: Option<f64>,
    pub keep_degenerate: Option<bool>,
    pub restarts: Option<u32>,
    pub budget: Option<u64>,
    pub workers: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = fs::read_to_string(path).map_err(|err| {
            CliError::Config(format!("cannot read config file {}: {err}", path.display()))
        })?;
        let mut value: Value = serde_json::from_str(&text).map_err(|err| {
            CliError::Config(format!("config file {}: {err}", path.display()))
        })?;
        // A run manifest doubles as a config file.
        if value.get("command").is_some() && value.get("config").is_some() {
            value = value["config"].take();
        }
        parse_config(&value)
            .map_err(|err| CliError::Config(format!("config file {}: {err}", path.display())))
    }
}

fn parse_config(value: &Value) -> std::result::Result<FileConfig, String> {
    let object = value
        .as_object()
        .ok_or_else(|| "root must be a JSON object".to_string())?;
    let mut config = FileConfig::default();
    for (key, entry) in object {
        match key.as_str() {
            "N_list" => config.n_list = Some(u32_list(key, entry)?),
            "N" => config.n_qubits = Some(integer(key, entry)?),
            "k_list" => config.k_list = Some(u32_list(key, entry)?),
            "k" => config.k = Some(integer(key, entry)?),
            "samples" => config.samples = Some(integer(key, entry)?),
            "generator" => config.generator = Some(string(key, entry)?),
            "theta" => config.theta = Some(theta(key, entry)?),
            "master_seed" => config.master_seed = Some(integer(key, entry)?),
            "degeneracy_tol" => config.degeneracy_tol = Some(float(key, entry)?),
            "keep_degenerate" => config.keep_degenerate = Some(boolean(key, entry)?),
            "restarts" => config.restarts = Some(integer(key, entry)?),
            "budget" => config.budget = Some(integer(key, entry)?),
            "workers" => config.workers = Some(integer(key, entry)?),
            other => return Err(format!("unknown config key '{other}'")),
        }
    }
    Ok(config)
}

fn integer<T: TryFrom<u64>>(key: &str, value: &Value) -> std::result::Result<T, String> {
    value
        .as_u64()
        .and_then(|raw| T::try_from(raw).ok())
        .ok_or_else(|| format!("config key '{key}': expected a nonnegative integer, got {value}"))
}

fn u32_list(key: &str, value: &Value) -> std::result::Result<Vec<u32>, String> {
    let items = value
        .as_array()
        .ok_or_else(|| format!("config key '{key}': expected an array of integers, got {value}"))?;
    items.iter().map(|item| integer(key, item)).collect()
}

fn float(key: &str, value: &Value) -> std::result::Result<f64, String> {
    value
        .as_f64()
        .ok_or_else(|| format!("config key '{key}': expected a number, got {value}"))
}

fn boolean(key: &str, value: &Value) -> std::result::Result<bool, String> {
    value
        .as_bool()
        .ok_or_else(|| format!("config key '{key}': expected true or false, got {value}"))
}

fn string(key: &str, value: &Value) -> std::result::Result<String, String> {
    value
        .as_str()
        .map(str::to_owned)
        .ok_or_else(|| format!("config key '{key}': expected a string, got {value}"))
}

fn theta(key: &str, value: &Value) -> std::result::Result<ThetaPolicy, String> {
    serde_json::from_value(value.clone())
        .map_err(|err| format!("config key '{key}': {err}"))
}

/// Flag value, then config value, then an error naming both spellings.
pub fn require<T>(flag: Option<T>, file: Option<T>, what: &str) -> Result<T> {
    flag.or(file)
        .ok_or_else(|| CliError::Config(format!("missing {what}")))
}

pub fn resolve_generator(
    flag: Option<&str>,
    file: Option<&str>,
    default: BuiltinGenerator,
) -> Result<BuiltinGenerator> {
    match flag.or(file) {
        Some(name) => Ok(BuiltinGenerator::from_name(name)?),
        None => Ok(default),
    }
}

pub fn resolve_theta(
    flag: Option<&str>,
    file: Option<ThetaPolicy>,
    default: ThetaPolicy,
) -> Result<ThetaPolicy> {
    match flag {
        Some(text) => text
            .parse::<ThetaPolicy>()
            .map_err(|err| CliError::Config(format!("--theta: {err}"))),
        None => Ok(file.unwrap_or(default)),
    }
}

/// Resolved worker count; 0 lets rayon size the pool to the machine.
pub fn resolve_workers(flag: Option<usize>, file: Option<usize>) -> Result<usize> {
    if let Some(workers) = flag.or(file) {
        if workers == 0 {
            return Err(CliError::config("worker count must be at least 1"));
        }
        return Ok(workers);
    }
    match std::env::var("SYMQFI_WORKERS") {
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(workers) if workers > 0 => Ok(workers),
            _ => Err(CliError::Config(format!(
                "SYMQFI_WORKERS must be a positive integer, got '{text}'"
            ))),
        },
        Err(_) => Ok(0),
    }
}

pub fn build_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|err| CliError::Config(format!("cannot build worker pool: {err}")))
}
