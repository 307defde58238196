use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("polynomials are not coprime")]
    NotCoprime,
    #[error("index {j} lies below the restriction bound {m}")]
    IndexOutOfSubalgebra { j: i64, m: i64 },
    #[error("twist parameter must be nonzero")]
    ZeroLambda,
    #[error("element does not lie in the ideal of the character")]
    NotInIdeal,
    #[error("restricting polynomial vanishes at the root {0}")]
    RootCollision(String),
    #[error("linear system is singular")]
    SingularSystem,
    #[error("operation requires a nonzero vector")]
    ZeroVector,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("no admissible j found in the search window [{lo}, {hi}]")]
    SearchExhausted { lo: i64, hi: i64 },
    #[error("no result within {0} steps")]
    StepLimit(usize),
    #[error("depth {0} gives a vacuous slice comparison")]
    DepthTooSmall(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
