//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or sequence dimensions do not line up.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// An argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Spectra passed to one operation live on different frequency grids.
    #[error("frequency grids differ: {0} vs {1} points")]
    GridMismatch(usize, usize),

    /// The operation requires the state spectrum, which is absent.
    #[error("state spectrum required but not present in the data")]
    MissingStateSpectrum,

    /// A resolvent solve hit (numerically) an eigenvalue of the state matrix.
    #[error("evaluation at an eigenvalue of A (condition estimate {condition:.3e})")]
    EvaluationAtEigenvalue { condition: f64 },

    /// The assembled evaluation system is too ill-conditioned to trust.
    #[error("ill-conditioned evaluation system (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },

    /// The data cannot certify the required persistence-of-excitation order.
    #[error("persistence-of-excitation shortfall: order {required} needs rank {required_rank}, data rank is {rank}")]
    PeShortfall {
        required: usize,
        rank: usize,
        required_rank: usize,
    },

    /// Numerical rank fell below the truncation target of the noise-robust estimator.
    #[error("data rank {observed} below truncation target {expected}")]
    RankDeficient { observed: usize, expected: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
