use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QrsError {
    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("symbolic argument not allowed here: {0}")]
    NotScalar(String),

    #[error("series variables {left:?} and {right:?} are incompatible")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },

    #[error("constant term is not invertible")]
    NotInvertible,

    #[error("polynomial is not in the span of the Cauchy basis: {0}")]
    NotInCauchySpan(String),

    #[error("Laurent polynomial is not symmetric under z -> 1/z")]
    NotSymmetric,

    #[error("Cauchy index {index} exceeds cap {cap}")]
    CapExceeded { index: usize, cap: usize },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("parameter `{name}` out of domain: {reason}")]
    ParamOutOfDomain { name: String, reason: String },

    #[error("convergence guard violated: {0}")]
    GuardViolated(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, QrsError>;
