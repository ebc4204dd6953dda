use std::path::PathBuf;

use serde::Serialize;

/// Failure of a CLI command; serialized as the machine-readable error report.
#[derive(Debug, Clone, PartialEq, Serialize, thiserror::Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CliError {
    #[error("invalid configuration at `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("{}: {reason}", path.display())]
    Io { path: PathBuf, reason: String },

    #[error("{message}")]
    Compute { message: String },

    #[error("{} of {total} frequencies failed", failures.len())]
    Sweep { total: usize, failures: Vec<FrequencyFailure> },

    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyFailure {
    pub omega_rad_per_s: f64,
    pub reason: String,
}

impl From<platesoil::Error> for CliError {
    fn from(e: platesoil::Error) -> Self {
        CliError::Compute { message: e.to_string() }
    }
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, e: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            reason: e.to_string(),
        }
    }

    /// JSON document printed on failure.
    pub fn report(&self) -> String {
        let doc = serde_json::json!({
            "status": "error",
            "message": self.to_string(),
            "error": self,
        });
        serde_json::to_string_pretty(&doc).expect("error report is serializable")
    }
}
