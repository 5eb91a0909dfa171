use std::fmt;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Why a linear constraint system failed to pin a unique solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveFailure {
    /// The constraints are inconsistent.
    NoSolution,
    /// The solution space has the given positive dimension.
    NonUnique(usize),
}

impl fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveFailure::NoSolution => write!(f, "no solution"),
            SolveFailure::NonUnique(dim) => write!(f, "solution space of dimension {dim}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A caller broke an operation's contract (dimension mismatch,
    /// incompatible coordinate systems, invalid morphism data).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The connection solve did not have the unique solution the theory
    /// predicts. Surfaced loudly: this is a failed theorem check, not a
    /// recoverable condition.
    #[error("canonical connection solve failed: {0}")]
    ConnectionSolve(SolveFailure),
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
