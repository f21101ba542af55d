//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map onto the CLI exit codes: [`Error::Parse`] → 2,
/// everything else that stems from bad inputs → 3.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested kind or order is not supported by this code path.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The caller broke a documented precondition (e.g. mismatched supports).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An iterative or adaptive procedure exhausted its budget.
    #[error("no convergence in {what}: achieved error estimate {achieved:e}")]
    Convergence { what: String, achieved: f64 },

    /// A least-squares design matrix is too ill-conditioned to be trusted.
    #[error("ill-conditioned: {0}")]
    Conditioning(String),

    /// Textual input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
