use std::path::PathBuf;

use thiserror::Error;

/// A configuration that cannot be simulated.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("invariant violated at `{field}`: {reason}")]
    Invariant { field: String, reason: String },
    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },
}

impl ConfigError {
    pub fn invariant(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::Invariant {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Field path the error refers to.
    pub fn field(&self) -> &str {
        match self {
            Self::Invariant { field, .. } => field,
            Self::Parse { path, .. } => path,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KeyError {
    #[error("key length mismatch: {left} vs {right} bits")]
    LengthMismatch { left: usize, right: usize },
    #[error("cannot compute an error rate over an empty key")]
    Empty,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("series too short for a spectrum: {len} samples (need at least 2)")]
    TooShort { len: usize },
    #[error("spectrum is identically zero")]
    DegenerateSpectrum,
    #[error("series is empty")]
    Empty,
}

/// Errors surfaced by file-level harness operations.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config not found: {}", .0.display())]
    ConfigNotFound(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config {}: {source}", path.display())]
    Config { path: PathBuf, source: ConfigError },
    #[error("invalid configuration: {0}")]
    Invalid(#[from] ConfigError),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("column `{column}` not found in {}", path.display())]
    MissingColumn { path: PathBuf, column: String },
    #[error("malformed CSV {}: {message}", path.display())]
    Csv { path: PathBuf, message: String },
    #[error(transparent)]
    Key(#[from] KeyError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}
