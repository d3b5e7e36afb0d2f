//! Error type shared across the estimation pipeline.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// X'X is numerically singular (reciprocal condition number below the
    /// threshold), a column is identically zero, or two columns coincide.
    #[error("singular design matrix: {0}")]
    SingularDesign(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Fewer observations than fitted parameters plus one.
    #[error("insufficient observations: {rows} rows for {cols} regressors")]
    InsufficientObservations { rows: usize, cols: usize },

    #[error("degrees of freedom must be >= 1, got {0}")]
    InvalidDf(usize),

    /// Residual vector has zero sum of squares; Durbin-Watson is undefined.
    #[error("residual sum of squares is zero")]
    ZeroResidualNorm,

    /// Level data violates positivity or balance requirements.
    #[error("invalid level data: {0}")]
    InvalidLevels(String),

    #[error("missing panel cell: region={region}, sector={sector}, year={year}")]
    MissingCell {
        region: String,
        sector: String,
        year: i32,
    },

    #[error("zero denominator building ratio: {0}")]
    ZeroDenominator(String),

    /// An entity has too few intervals to difference.
    #[error("insufficient intervals: {0}")]
    InsufficientIntervals(String),

    /// Entities do not share a common set of interval end years.
    #[error("unbalanced panel: {0}")]
    UnbalancedPanel(String),

    /// The requested sector or region slice is empty.
    #[error("unknown group: {0}")]
    UnknownGroup(String),

    /// The fit does not carry the coefficient the operation needs.
    #[error("wrong specification: {0}")]
    WrongSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
