//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by model construction, solvers, and report emission.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument fell outside the domain an operation requires.
    #[error("{name} = {value} out of domain: {requirement}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// Model or scenario parameters rejected at construction.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An operation specific to one breach-model family was called on another.
    #[error("operation requires the {expected} family")]
    WrongFamily { expected: &'static str },

    /// The vulnerability-decay profile does not belong to any supported class.
    #[error("vulnerability-decay profile outside the supported classes: {0}")]
    UnsupportedProfile(String),

    /// A root finder could not bracket or converge on a sign change.
    #[error("root search failed on [{lo}, {hi}]: {reason}")]
    RootSearch { lo: f64, hi: f64, reason: &'static str },

    /// Configuration text could not be parsed.
    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    /// Wrapper for filesystem failures when emitting reports.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors caused by malformed configuration rather than solver state.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
