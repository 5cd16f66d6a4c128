//! Layered run configuration: optional TOML file, command-line flags on
//! top, hard defaults underneath. Unknown file keys are rejected by name.

use std::path::Path;

use serde::Deserialize;

/// Errors surfaced to the process exit code: configuration problems exit
/// with 2, numeric failures (tolerance violations, conditioning breakdowns
/// mid-run) with 1.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<detwidth::Error> for CliError {
    fn from(e: detwidth::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Whole config file: one optional section per subcommand plus [common].
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub common: CommonSection,
    #[serde(default, rename = "verify-toeplitz")]
    pub verify_toeplitz: VerifyToeplitzSection,
    #[serde(default, rename = "verify-hankel")]
    pub verify_hankel: VerifyHankelSection,
    #[serde(default)]
    pub width: WidthSection,
    #[serde(default, rename = "tw-table")]
    pub tw_table: TwTableSection,
    #[serde(default, rename = "lpp-tw")]
    pub lpp_tw: LppTwSection,
    #[serde(default, rename = "lpp-identity")]
    pub lpp_identity: LppIdentitySection,
    #[serde(default, rename = "poisson-check")]
    pub poisson_check: PoissonSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CommonSection {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub output: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct VerifyToeplitzSection {
    pub symbols: Option<Vec<String>>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct VerifyHankelSection {
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub d: Option<f64>,
    pub delta: Option<f64>,
    /// Gaussian decay rate; when absent it is tied to the matrix size n.
    pub a: Option<f64>,
    pub s_values: Option<Vec<f64>>,
    pub tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct WidthSection {
    pub process: Option<String>,
    pub n: Option<usize>,
    pub t: Option<f64>,
    pub m_values: Option<Vec<f64>>,
    pub x_values: Option<Vec<f64>>,
    pub s_quad: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct TwTableSection {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub step: Option<f64>,
    pub order: Option<usize>,
    pub contour_order: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct LppTwSection {
    pub n: Option<usize>,
    pub q: Option<f64>,
    pub samples: Option<usize>,
    pub tw_order: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct LppIdentitySection {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub n: Option<usize>,
    pub q: Option<f64>,
    pub samples: Option<usize>,
    pub tau_window: Option<f64>,
    pub full_scan: Option<bool>,
    pub cut_trials: Option<usize>,
    pub cut_size: Option<usize>,
    pub tw_order: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct PoissonSection {
    pub triples: Option<usize>,
    pub tol: Option<f64>,
}

/// Loads and validates the config file; unknown keys abort with the
/// offending key named in the message.
pub fn load_file(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read config file {}: {e}", path.display()))
    })?;
    toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("invalid config file {}: {e}", path.display())))
}

/// Thread-pool sizing: the requested count (flag, file key, or the machine
/// default) capped by the DETWIDTH_THREADS environment variable.
#[derive(Debug, Clone, Copy)]
pub struct ThreadSetup {
    pub requested: usize,
    pub env_cap: Option<usize>,
    pub effective: usize,
}

pub fn resolve_threads(requested: Option<usize>) -> CliResult<ThreadSetup> {
    let default = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let requested = requested.unwrap_or(default);
    if requested == 0 {
        return Err(CliError::Config("threads must be >= 1".into()));
    }
    let env_cap = match std::env::var("DETWIDTH_THREADS") {
        Err(_) => None,
        Ok(raw) => {
            let cap: usize = raw.trim().parse().map_err(|_| {
                CliError::Config(format!("DETWIDTH_THREADS must be a positive integer, got {raw:?}"))
            })?;
            if cap == 0 {
                return Err(CliError::Config("DETWIDTH_THREADS must be >= 1".into()));
            }
            Some(cap)
        }
    };
    let effective = env_cap.map_or(requested, |cap| requested.min(cap));
    Ok(ThreadSetup { requested, env_cap, effective })
}
