use thiserror::Error;

/// Failure to read a graph document or a 0/1 string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input: expected a vertex count")]
    MissingVertexCount,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: vertex {index} out of range for {n} vertices")]
    IndexOutOfRange { line: usize, index: usize, n: usize },
    #[error("line {line}: self-loop on vertex {vertex} is not allowed in a simple graph")]
    SelfLoop { line: usize, vertex: usize },
    #[error("invalid JSON graph: {0}")]
    Json(String),
    #[error("expected '0' or '1' at position {position}, found {found:?}")]
    BadBit { position: usize, found: char },
}

/// Contract violations on graph-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {vertex} is not allowed in a simple graph")]
    SelfLoop { vertex: usize },
    #[error("length mismatch: graph has {expected} vertices, vector has {found} bits")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}
