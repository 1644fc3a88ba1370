//! Verification harness: runs the inequality checks on domain batteries and
//! emits deterministic reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

pub mod battery;
pub mod checks;
pub mod report;
pub mod settings;

pub use battery::{run_battery, BatteryEntry};
pub use checks::Runner;
pub use report::{emit_report, exit_code, CheckId, CheckReport, Format, Orientation, Status};
pub use settings::Settings;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error(transparent)]
    Core(#[from] hermite_gap::Error),
}

/// A domain file: either a bare domain spec or a battery entry.
pub fn read_domain_file(path: &std::path::Path) -> Result<BatteryEntry, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    if let Ok(entry) = serde_json::from_str::<BatteryEntry>(&text) {
        return Ok(entry);
    }
    let domain = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse { path: path.display().to_string(), message: e.to_string() })?;
    let id = path.file_stem().map_or_else(|| "domain".into(), |s| s.to_string_lossy().into_owned());
    Ok(BatteryEntry { id, checks: Vec::new(), domain, sweep: None, audit: None })
}
