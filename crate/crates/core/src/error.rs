use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not skew-symmetric (max asymmetry {0:.3e})")]
    NotSkewSymmetric(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not orthogonal (residual {0:.3e})")]
    NotOrthogonal(f64),
    #[error("orbital matrix is not an isometry (residual {0:.3e})")]
    NotIsometry(f64),
    #[error("covariance spectrum exceeds the physical bound (largest value {0})")]
    SpectralBound(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} too large: {value} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("numerical failure at step {step}: {detail}")]
    NumericalFailure { step: usize, detail: String },
    #[error("sample {index}: {source}")]
    Sample {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("{context} (state seed {seed:#018x}): {source}")]
    State {
        context: String,
        seed: u64,
        #[source]
        source: Box<Error>,
    },
    #[error("no samples left after filtering ({total} drawn)")]
    InsufficientSamples { total: usize },
    #[error("distribution is not normalized (sum {0})")]
    Normalization(f64),
    #[error("failed to build worker pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True when the error (or its cause) is a numerical failure rather than bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NumericalFailure { .. } | Error::Normalization(_) => true,
            Error::Sample { source, .. } | Error::State { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
