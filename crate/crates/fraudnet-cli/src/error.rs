//! CLI-level errors, serializable so failures can be reported as JSON.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("stage '{stage}' failed: {cause}")]
    Stage { stage: String, cause: String },
    #[error(transparent)]
    Engine(#[from] fraudnet::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Machine-readable error shape emitted on stderr before a nonzero exit.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: String,
    pub kind: &'static str,
}

impl CliError {
    pub fn report(&self) -> ErrorReport {
        let kind = match self {
            CliError::Config(_) => "config",
            CliError::Stage { .. } => "stage",
            CliError::Engine(_) => "engine",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
        };
        ErrorReport { error: self.to_string(), kind }
    }
}
