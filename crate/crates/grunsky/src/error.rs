use thiserror::Error;

/// Errors raised by the workbench operations.
///
/// `Usage` marks a caller mistake (wrong shapes, missing data), `Domain` a
/// mathematically invalid input (branch undefined, dilatation out of range).
/// Iterative routines that fail to converge report `IterationLimit` with the
/// last residual so the caller can decide whether to retry on a finer grid.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("iteration limit reached after {iterations} steps (residual {residual:.3e})")]
    IterationLimit { iterations: usize, residual: f64 },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
