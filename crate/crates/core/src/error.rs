use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An exact division left a remainder. Never expected on valid input.
    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("cyclotomic prime mismatch: {left} vs {right}")]
    PrimeMismatch { left: u32, right: u32 },

    /// A quantity that must be a rational integer was not.
    #[error("value is not a rational integer: {0}")]
    NotInteger(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("enumeration needs {required} evaluations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("root finding did not converge after {iterations} iterations (degree {degree})")]
    RootFindingFailed { iterations: u32, degree: usize },

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("slice polynomial vanishes identically at xi = {xi}")]
    ZeroSlice { xi: f64 },

    /// Malformed polynomial expression or JSON input; `token` names the offender.
    #[error("parse error at `{token}`: {message}")]
    Parse { token: String, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            message: message.into(),
        }
    }
}
