use thiserror::Error;

/// Errors raised by the algebra kernels and the pipeline built on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("zero denominator at position {pos}")]
    ZeroDenominator { pos: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular matrix")]
    Singular,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration cap of {cap} exceeded: {what}")]
    CapExceeded { cap: usize, what: String },

    #[error("mixed element realizations in generator list")]
    MixedRealizations,

    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("not a character: {0}")]
    NotACharacter(String),

    #[error("simple submodule extraction gave up after {attempts} attempts: {detail}")]
    RetryCapExceeded { attempts: usize, detail: String },

    #[error("coordinate block is rank deficient: {0}")]
    RankDeficient(String),

    #[error("not a pencil: {0}")]
    NotAPencil(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
