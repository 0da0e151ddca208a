use thiserror::Error;

/// Errors raised by the engine.
///
/// Bound failures are kept distinct from specification errors: a bounded
/// search that gives up never reports a negative answer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid specification: {0}")]
    Spec(String),

    #[error("search bound exceeded: {what} (reached {reached})")]
    Bound { what: String, reached: usize },

    #[error("duality window exceeded: no certified preimage up to radius {radius}")]
    Window { radius: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("integer overflow in chain coefficients")]
    Overflow,
}

impl Error {
    pub fn bound(what: impl Into<String>, reached: usize) -> Self {
        Error::Bound { what: what.into(), reached }
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// True for failures caused by a configured search limit.
    pub fn is_bound_failure(&self) -> bool {
        matches!(self, Error::Bound { .. } | Error::Window { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
