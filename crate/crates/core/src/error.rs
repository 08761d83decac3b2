use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("polynomial degree {found} is below the required minimum {required}")]
    DegreeTooSmall { found: usize, required: usize },
    #[error("division by an exact zero")]
    DivisionByZero,
    #[error("expected a real algebraic number")]
    NotReal,
    #[error("invalid recurrence: {0}")]
    InvalidLrs(String),
    #[error("order {order} exceeds the decidable range (at most 5); deciding order-6 positivity is blocked by the order-6 hardness barrier (it would settle open Diophantine approximation problems)")]
    OrderTooLarge { order: usize },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("precision budget of {bits} bits exhausted")]
    PrecisionExhausted { bits: u32 },
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
