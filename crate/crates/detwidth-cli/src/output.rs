//! Run artifacts: a CSV table (header row, LF line endings, floats with 17
//! significant digits) and a JSON manifest sidecar echoing the resolved
//! configuration next to the numeric summary.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::{CliResult, ThreadSetup};

/// Floats are serialized with 17 significant digits, enough to round-trip
/// any f64 bit pattern.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_int(x: usize) -> String {
    x.to_string()
}

#[derive(Debug)]
pub struct CsvTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: Vec<&'static str>) -> Self {
        CsvTable { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

fn write_csv(path: &Path, table: &CsvTable) -> CliResult<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| crate::config::CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    writer
        .write_record(&table.header)
        .and_then(|_| table.rows.iter().try_for_each(|row| writer.write_record(row)))
        .and_then(|_| writer.flush().map_err(Into::into))
        .map_err(|e| crate::config::CliError::Config(format!("cannot write {}: {e}", path.display())))
}

/// Everything a finished subcommand hands back for persistence.
pub struct CommandOutcome {
    pub table: CsvTable,
    /// Resolved parameter set, echoed verbatim into the manifest.
    pub config_echo: Value,
    /// Numeric summary: tolerances, residuals, error estimates, KS values.
    pub results: Value,
    /// False when a tolerance was exceeded or a row failed to compute.
    pub numeric_ok: bool,
    /// One human-readable line for stdout.
    pub status_line: String,
}

pub struct RunPaths {
    pub csv: PathBuf,
    pub manifest: PathBuf,
}

pub fn run_paths(stem: &str) -> RunPaths {
    RunPaths { csv: PathBuf::from(format!("{stem}.csv")), manifest: PathBuf::from(format!("{stem}.manifest.json")) }
}

/// Writes `<stem>.csv` and `<stem>.manifest.json`, creating parent
/// directories as needed, and returns the paths.
pub fn persist(
    stem: &str,
    subcommand: &str,
    seed: u64,
    threads: &ThreadSetup,
    wall_clock_seconds: f64,
    outcome: &CommandOutcome,
) -> CliResult<RunPaths> {
    let paths = run_paths(stem);
    if let Some(parent) = paths.csv.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    write_csv(&paths.csv, &outcome.table)?;
    let manifest = json!({
        "schema_version": 1,
        "tool": "detwidth",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": subcommand,
        "seed": seed,
        "threads": {
            "requested": threads.requested,
            "env_cap": threads.env_cap,
            "effective": threads.effective,
        },
        "wall_clock_seconds": wall_clock_seconds,
        "config": outcome.config_echo,
        "results": outcome.results,
        "numeric_ok": outcome.numeric_ok,
        "artifacts": { "csv": paths.csv.to_string_lossy() },
    });
    std::fs::write(&paths.manifest, format!("{}\n", serde_json::to_string_pretty(&manifest).expect("manifest serializes")))?;
    Ok(paths)
}
