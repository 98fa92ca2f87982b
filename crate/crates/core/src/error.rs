use thiserror::Error;

/// Errors produced by the library. Vertex numbers in messages are 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must have at least one row")]
    EmptyMatrix,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("vertex set must be nonempty")]
    EmptyVertexSet,

    #[error("graph is not connected")]
    NotConnected,

    #[error("graph is not chordal")]
    NotChordal,

    #[error("graph is not a tree")]
    NotATree,

    #[error("second graph is not a subgraph of the first")]
    NotASubgraph,

    #[error("graph has {found} vertices; at least {required} are required")]
    TooSmall { required: usize, found: usize },

    #[error("block to be inverted is numerically singular")]
    SingularBlock,

    #[error("matrix is not positive definite")]
    NotPd,

    #[error("threshold level must be finite and positive, got {0}")]
    InvalidLevel(f64),

    #[error("no broken cycle: every component of the subgraph is induced")]
    NoBrokenCycle,

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("matrix has a nonzero entry at ({row}, {col}) outside the pattern")]
    PatternMismatch { row: usize, col: usize },

    #[error("matrix is not tridiagonal: nonzero entry at ({row}, {col})")]
    NotAPathPattern { row: usize, col: usize },

    #[error("diagonal entry {0} is not positive")]
    NonpositiveDiagonal(usize),

    #[error("continued fraction hits a zero denominator at level {level}")]
    ZeroDenominator { level: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
