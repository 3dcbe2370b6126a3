use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input (dimension mismatch, bad rational, rank deficiency).
    #[error("input error: {0}")]
    Input(String),

    /// An enumeration would exceed its configured cap.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A certificate whose weighted functionals leave a free unknown uncancelled.
    #[error("invalid certificate: free unknown {index} keeps coefficient {coefficient}")]
    CancellationFailure { index: usize, coefficient: String },

    /// A certificate functional whose dual norm exceeds one.
    #[error("invalid certificate: item {item} has dual norm {dual_norm} > 1")]
    DualNormViolation { item: usize, dual_norm: String },

    /// A post-condition that the mathematics guarantees did not hold.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn dims(what: &str, expected: usize, got: usize) -> Self {
        Error::Input(format!("{what}: expected dimension {expected}, got {got}"))
    }
}
