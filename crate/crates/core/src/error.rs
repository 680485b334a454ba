use alloc::string::String;

pub type Result<T, E = LabError> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LabError {
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    /// A precondition on a numeric argument does not hold.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value violates the invariants of its type.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// The stored prefix of a truncated series is too short for the requested
    /// accuracy.
    #[error("stored prefix exhausted: best tail bound {tail_bound:e} > tolerance {tol:e}")]
    PrefixExhausted { tail_bound: f64, tol: f64 },

    /// A limit needed as input to a later step could not be decided.
    #[error("undecided: {0}")]
    Undecided(String),

    /// A Monte Carlo run did not terminate often enough to be trusted.
    #[error("unreliable estimate: {0}")]
    Reliability(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl LabError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        LabError::Domain(msg.into())
    }

    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        LabError::Invalid {
            what,
            reason: reason.into(),
        }
    }
}
