use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("basis family mismatch: {0} vs {1}")]
    BasisMismatch(String, String),
    #[error("truncation weight mismatch: {0} vs {1}")]
    TruncationMismatch(u32, u32),
    #[error("cannot truncate a series of weight {have} to the larger weight {want}")]
    CannotUntruncate { have: u32, want: u32 },
    #[error("length mismatch: permutation has {perm} entries, degree list has {degrees}")]
    LengthMismatch { perm: usize, degrees: usize },
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("series has a constant term")]
    ConstantTerm,
    #[error("degree mismatch: {what} has degree {found}, expected {expected}")]
    DegreeMismatch { what: String, expected: i32, found: i32 },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has a directed cycle")]
    Cyclic,
    #[error("graph has more than one edge between vertices {0} and {1}")]
    MultiEdge(usize, usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("{what} = {value} exceeds the configured bound {bound}")]
    BoundExceeded { what: String, value: usize, bound: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid arity {0}")]
    InvalidArity(usize),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid structure: {0}")]
    Structure(String),
    #[error("{0}")]
    Constraint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
