use thiserror::Error;

/// Errors raised by graph construction, chain builders and certificate checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("graph is disconnected: vertex {0} is unreachable")]
    Disconnected(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "infeasible pair: edge ({u}, {v}) violates g(u) + g(v) >= (f(u) - f(v))^2 by {excess:e}"
    )]
    Infeasible { u: usize, v: usize, excess: f64 },

    #[error("chain is not reversible: detailed balance fails on ({u}, {v}) by {excess:e}")]
    NotReversible { u: usize, v: usize, excess: f64 },

    #[error("transition ({u}, {v}) is not an edge of the graph")]
    Support { u: usize, v: usize },

    #[error("size limit exceeded: {0}")]
    TooLarge(String),

    #[error("singular linear system")]
    Singular,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
