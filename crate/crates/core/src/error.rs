use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("tensor order must be at least {min}, got {got}")]
    OrderTooSmall { min: usize, got: usize },

    #[error("vector norm {norm} is not 1 within {tol:e}")]
    NotUnit { norm: f64, tol: f64 },

    #[error("cannot normalize a zero or non-finite vector")]
    Unnormalizable,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mode index {mode} out of range 1..={order}")]
    ModeOutOfRange { mode: usize, order: usize },

    #[error("the tangent space of the sphere in R^{dim} is trivial; need dimension >= 2")]
    TrivialTangentSpace { dim: usize },

    #[error("weight must be finite and nonzero, got {0}")]
    InvalidWeight(f64),

    #[error("decomposition has no terms")]
    EmptyDecomposition,

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error(
        "fast path needs every factor dimension to exceed the rank \
         (dimension {dim} <= rank {rank}); use the direct path"
    )]
    FastPathInapplicable { dim: usize, rank: usize },

    #[error("matrix columns are not orthonormal (max deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("singular value decomposition did not converge")]
    SvdNoConvergence,

    #[error("symmetric eigensolver did not converge")]
    EigNoConvergence,

    #[error("allocation of {bytes} bytes for a {rows}x{cols} matrix failed")]
    Allocation { rows: usize, cols: usize, bytes: u128 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed decomposition file: {0}")]
    Parse(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
