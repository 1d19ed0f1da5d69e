use std::path::PathBuf;

/// Errors raised anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("overflow: {0}")]
    Overflow(&'static str),

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("divisor interval contains zero")]
    ContainsZero,

    #[error("cannot bisect {0}: no interior floating-point number or unbounded")]
    Bisect(String),

    #[error("unsupported expression node: {0}")]
    UnsupportedExpression(&'static str),

    #[error("invalid plan: {0}")]
    Plan(String),

    #[error("input of length {n} exceeds exact-slice capacity (max admissible length {max_n})")]
    Capacity { n: usize, max_n: usize },

    #[error("not a permutation of 0..{0}")]
    Permutation(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("error bound invalid: (n+2)u >= 1 for inner dimension {0}")]
    BoundInvalid(usize),

    #[error("matrix is singular to working precision (zero pivot in column {0})")]
    Singular(usize),

    #[error("iterative refinement diverged after {steps} steps")]
    Divergence { best: Vec<f64>, steps: usize },

    #[error("rounding backend refused: {0}")]
    Backend(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error on {path:?}: {source}")]
    Io {
        path: Option<PathBuf>,
        #[source]
        source: std::io::Error,
    },
}

impl From<std::io::Error> for Error {
    fn from(source: std::io::Error) -> Self {
        Error::Io { path: None, source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
