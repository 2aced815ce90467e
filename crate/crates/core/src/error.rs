use thiserror::Error;

/// Errors surfaced by every layer of the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// Jacobi identity fails on the basis triple (1-based indices).
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),

    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),

    #[error("algebra is not semisimple: {0}")]
    NotSemisimple(String),

    #[error("quotient does not split over the rationals: {0}")]
    NotSplit(String),

    #[error("budget exceeded: {what} requires {required}, budget is {budget}")]
    BudgetExceeded {
        what: String,
        required: u128,
        budget: u128,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("unknown algebra: {0}")]
    UnknownAlgebra(String),
}

impl Error {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::MalformedInput(msg.into())
    }

    /// Short machine-readable tag used in structured error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedInput(_) => "malformed-input",
            Error::JacobiViolation(..) => "jacobi-violation",
            Error::HypothesisFailure(_) => "hypothesis-failure",
            Error::NotSemisimple(_) => "not-semisimple",
            Error::NotSplit(_) => "not-split",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::Invariant(_) => "internal-invariant",
            Error::UnknownAlgebra(_) => "unknown-algebra",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
