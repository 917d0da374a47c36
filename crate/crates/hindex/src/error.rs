use thiserror::Error;

/// Errors shared by all index computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix must be {expected}x{expected}, got {found}x{found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("empty matrix (n = 0)")]
    EmptyMatrix,

    #[error("empty index set")]
    EmptyIndexSet,

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPsd { min_eig: f64 },

    #[error("entry {index} of the phase vector is not unimodular (|w| = {modulus})")]
    NotUnimodular { index: usize, modulus: f64 },

    #[error("matrix has a negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },

    #[error("matrix has a non-real entry at ({row}, {col})")]
    NonRealEntry { row: usize, col: usize },

    #[error("diagonal entry {index} is zero")]
    ZeroDiagonal { index: usize },

    #[error("entry {index} must be positive, got {value}")]
    NonPositiveEntry { index: usize, value: f64 },

    #[error("matrix is singular or too ill-conditioned (condition estimate {cond:.3e})")]
    IllConditioned { cond: f64 },

    #[error("spectrum contains a zero eigenvalue")]
    ZeroEigenvalue,

    #[error("dimension {n} exceeds the subset-enumeration cap {max}; use the search method")]
    TooLarge { n: usize, max: usize },

    #[error("invalid norm descriptor: {0}")]
    BadNorm(String),

    #[error("the extension index is undefined: conj(A) o A is not positive semidefinite")]
    ExtensionInapplicable,

    #[error("parse error in {field}: {message}")]
    Parse { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
