use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: predicate `{predicate}` has arity {expected}, found {found}")]
    ArityMismatch {
        predicate: String,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("not a partition: {0}")]
    NotAPartition(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("degenerate distribution: {0}")]
    Degenerate(&'static str),

    #[error("walk count {0} exceeds the supported maximum of 2^48")]
    WalkCountOverflow(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
