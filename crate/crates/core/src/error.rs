use thiserror::Error;

/// Errors produced by curve validation, graph construction and the
/// simplification algorithms.
#[derive(Debug, Error)]
pub enum Error {
    #[error("curve needs at least two distinct points")]
    CurveTooShort,
    #[error("non-finite coordinate at point {0}")]
    NonFiniteCoordinate(usize),
    #[error("consecutive duplicate point at index {0}")]
    ConsecutiveDuplicate(usize),
    #[error("shortcut ({i}, {j}) out of range for {n} vertices")]
    InvalidShortcut { i: usize, j: usize, n: usize },
    #[error("epsilon must be non-negative and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("scales must be finite, positive and strictly increasing")]
    InvalidScales,
    #[error("weights must be finite and non-negative, one per scale")]
    InvalidWeights,
    #[error("vertex counts differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("vertex {0} out of range for {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("no path from {0} to {1}")]
    Unreachable(usize, usize),
    #[error("interval list for vertex {0} is empty")]
    EmptyIntervalRow(usize),
    #[error("instance too large for exhaustive search (n={n}, limit {limit})")]
    TooLargeForBruteForce { n: usize, limit: usize },
    #[error("missing weight for shortcut ({0}, {1})")]
    MissingWeight(usize, usize),
    #[error("error matrix line {line}: {msg}")]
    MatrixParse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
