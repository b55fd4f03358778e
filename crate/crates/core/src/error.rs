use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("{n} spins exceeds the cap of {cap}")]
    OverCap { n: usize, cap: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("embedding: {0}")]
    Embedding(String),

    #[error("eigensolver did not converge, residual {residual:.3e}")]
    NoConvergence { residual: f64 },

    #[error("degeneracy unresolved: gap {0:.3e} after bias")]
    Degenerate(f64),

    #[error("manifest mismatch for {0}")]
    ManifestMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
