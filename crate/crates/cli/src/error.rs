use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] collabaudit_core::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("missing artifact {}: run `{producer}` first", path.display())]
    MissingArtifact {
        path: PathBuf,
        producer: &'static str,
    },
    #[error("artifact {} was produced under config {found}, current config is {expected}: rerun `{producer}`", path.display())]
    StaleArtifact {
        path: PathBuf,
        found: String,
        expected: String,
        producer: &'static str,
    },
    #[error("malformed artifact {}: {message}", path.display())]
    Malformed { path: PathBuf, message: String },
    #[error("unknown model {0:?}")]
    UnknownModel(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// The machine-readable form printed on failure.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub requires: Option<&'static str>,
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn record(&self) -> ErrorRecord {
        let (error, requires) = match self {
            CliError::Core(_) => ("core", None),
            CliError::Config(_) => ("config", None),
            CliError::Io { .. } => ("io", None),
            CliError::MissingArtifact { producer, .. } => ("missing_artifact", Some(*producer)),
            CliError::StaleArtifact { producer, .. } => ("stale_artifact", Some(*producer)),
            CliError::Malformed { .. } => ("malformed_artifact", None),
            CliError::UnknownModel(_) => ("unknown_model", None),
        };
        ErrorRecord {
            error,
            message: self.to_string(),
            requires,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::MissingArtifact { .. } | CliError::StaleArtifact { .. } => 3,
            _ => 1,
        }
    }
}
