use thiserror::Error;

/// Errors produced anywhere in the decision pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable '{name}' at position {pos}")]
    UnknownVariable { pos: usize, name: String },

    #[error("work budget exceeded: {0}")]
    WorkBudget(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("not invertible modulo {0}")]
    NotInvertible(String),

    #[error("degenerate Möbius transformation (determinant is zero)")]
    DegenerateMobius,

    #[error("rational function has a pole away from 0 and infinity")]
    PoleElsewhere,

    #[error("Laurent polynomial evaluated at zero")]
    ZeroArgument,

    #[error("prime {p} does not split in Q(sqrt({d}))")]
    NotSplit { d: i64, p: u64 },

    #[error("invalid discriminant {0}: must be squarefree and not 0 or 1")]
    InvalidDiscriminant(i64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
