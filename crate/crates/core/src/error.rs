use thiserror::Error;

/// Errors produced by graph construction, mechanisms, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("self-loop on vertex {0}")]
    SelfLoop(u32),

    #[error("vertex id {id} out of range for graph with {n} vertices")]
    VertexOutOfRange { id: u64, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("n = {n} exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("ordering is not a permutation of the vertex set")]
    NotPermutation,

    #[error("vertex {0} has no color")]
    Uncolored(u32),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("palette exhausted while coloring vertex {0}")]
    PaletteExhausted(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
