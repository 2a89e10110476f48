use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The variants split into input problems (`Domain`, `IndexOutOfRange`,
/// `DegenerateGroundState`, `Singular`, `NotCritical`) and numerical
/// failures (`NonConvergence`, `AccuracyNotReached`), which the CLI maps to
/// different exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("degenerate ground state: mode {mode} has energy {energy} within {tol:e} of mu")]
    DegenerateGroundState { mode: usize, energy: f64, tol: f64 },

    #[error("singular: {0}")]
    Singular(String),

    #[error("analysis is not critical: {0}")]
    NotCritical(String),

    #[error("{what} did not converge (achieved error {achieved:e})")]
    NonConvergence { what: String, achieved: f64 },

    #[error("{what}: requested accuracy {requested:e} not reached, achieved {achieved:e}")]
    AccuracyNotReached {
        what: String,
        requested: f64,
        achieved: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of an iterative method rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::AccuracyNotReached { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
