//! Shared error type for the crate.

use std::path::Path;

/// Errors produced by degree-sequence construction, graph generation,
/// bound evaluation, and the experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter or configuration value is out of range or inconsistent.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A caller violated a documented precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// A text input file failed to parse; `line` is 1-based.
    #[error("{path}:{line}: {message}")]
    Parse {
        /// Path of the offending file.
        path: String,
        /// 1-based line number of the first offending line.
        line: usize,
        /// What was wrong with it.
        message: String,
    },

    /// Strict truncation validation failed: the maximum degree is not
    /// below √m/2.
    #[error("degree truncation violated: max degree {max_degree} ≥ √m/2 = {bound:.4} (m = {m})")]
    Truncation {
        /// Largest degree in the sequence.
        max_degree: u32,
        /// Edge count m = stub_sum / 2.
        m: u64,
        /// The violated threshold √m/2.
        bound: f64,
    },

    /// A requested quantity (moment or limit constant) diverges for the
    /// given distribution.
    #[error("divergent: {0}")]
    Divergent(String),

    /// A configured resource limit would be exceeded.
    #[error("resource limit: {0}")]
    Resource(String),

    /// An I/O operation failed; the path is included for context.
    #[error("I/O error on {path}: {source}")]
    Io {
        /// Path involved in the failed operation.
        path: String,
        /// Underlying OS error.
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub(crate) fn parse(path: &Path, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.display().to_string(),
            line,
            message: message.into(),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
