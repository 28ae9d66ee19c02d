use thiserror::Error;

/// Errors raised by the series algebra, the formula engines and the oracle.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("series is not a unit (constant term is zero)")]
    NonUnit,

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("pseudo-convergence failure: {0}")]
    PseudoConvergence(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("field error: {0}")]
    Field(String),

    #[error("enumeration budget exceeded: {required} objects required, budget is {budget}")]
    Budget { required: u128, budget: u128 },

    #[error("depth guard violated: {0}")]
    Guard(String),

    #[error("formula violation in {context}: at {monomial} expected {expected}, got {actual}")]
    FormulaViolation {
        context: String,
        monomial: String,
        expected: String,
        actual: String,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn violation(
        context: impl Into<String>,
        monomial: impl Into<String>,
        expected: impl ToString,
        actual: impl ToString,
    ) -> Self {
        Error::FormulaViolation {
            context: context.into(),
            monomial: monomial.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}
