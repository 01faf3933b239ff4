use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {modulus:?} is reducible over F_{p}")]
    ReducibleModulus { p: u32, modulus: Vec<u32> },

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("malformed field specification {0:?}")]
    FieldSpec(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("elements belong to different fields")]
    ContextMismatch,

    #[error("value {value} is not an element of F_{q}")]
    NotAnElement { value: u64, q: u32 },

    #[error("polynomial is zero")]
    ZeroPolynomial,

    #[error("malformed polynomial {0:?}")]
    PolySyntax(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("{what} = {value} out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: String,
    },

    #[error("interpolation points are not pairwise distinct")]
    DuplicatePoints,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("regime violation: {0}")]
    Regime(String),

    #[error("work budget exceeded: {required} operations required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("property violated: {0}")]
    PropertyViolation(String),
}
