use std::path::PathBuf;

use thiserror::Error;

use crate::diag::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The requested analysis only supports deterministic worlds.
    #[error("unsupported analysis: {0}")]
    Unsupported(String),

    #[error("resource limit exceeded: {what} would need {needed}, cap is {cap}")]
    ResourceLimit { what: &'static str, needed: u128, cap: u128 },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("{}", format_diagnostics(.0))]
    Parse(Vec<Diagnostic>),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
