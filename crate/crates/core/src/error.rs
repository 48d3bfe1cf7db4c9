use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QorbitError {
    #[error("division by zero: degenerate parameter collision")]
    DivisionByZero,
    #[error("pole at evaluation point: denominator {factor} vanishes")]
    Pole { factor: String },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported rank {rank}: {what}")]
    UnsupportedRank { rank: usize, what: String },
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("series diverges on the {side} side after {terms} terms")]
    Convergence { side: String, terms: usize },
    #[error("trace tail bound {bound:e} exceeds tolerance {tol:e}")]
    TailBound { bound: f64, tol: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, QorbitError>;
