use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring {0} is not a field")]
    NonFieldDescriptor(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ring {0} is not an integral domain")]
    NotADomain(String),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is too small (need p >= 5)")]
    PrimeTooSmall(u64),
    #[error("the quotient module is infinite")]
    InfiniteQuotient,
    #[error("H(I, M) is not known to vanish for this system")]
    HNotKnownZero,
    #[error("not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("inconsistent data: {0}")]
    InconsistentData(String),
    #[error("invalid input at {pointer}: {message}")]
    InvalidInput { pointer: String, message: String },
}

impl Error {
    pub fn invalid(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidInput {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    /// True for errors that mean "outside what can be decided", as opposed
    /// to malformed input.
    pub fn is_unsupported(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedRing(_) | Error::BudgetExceeded(_) | Error::HNotKnownZero
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
