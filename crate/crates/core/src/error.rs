use thiserror::Error;

pub type Result<T> = std::result::Result<T, KrylovError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KrylovError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("null operator: squared norm {norm_sq:e} is below the 1e-28 threshold")]
    NullOperator { norm_sq: f64 },

    #[error("operator is not Hermitian (max |O - O^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid operator spec '{spec}': {reason}")]
    InvalidOperatorSpec { spec: String, reason: String },

    #[error(
        "Hilbert-space dimension {dim} exceeds the dense eigensolve limit {limit}; \
         supply precomputed spectral bounds instead"
    )]
    DimensionLimit { dim: usize, limit: usize },

    #[error("zero-width spectrum (E_max = E_min = {0})")]
    ZeroWidthSpectrum(f64),

    #[error("coefficient window too short: {retained} retained, at least {required} needed")]
    WindowTooShort { retained: usize, required: usize },

    #[error("non-positive Lanczos coefficient b_{index} = {value}")]
    NonPositiveCoefficient { index: usize, value: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("chain integration failed at t = {time}: norm {norm}")]
    IntegrationFailure { time: f64, norm: f64 },

    #[error("moment order k_max = {k_max} exceeds the conditioning limit {limit}")]
    MomentOrderTooLarge { k_max: usize, limit: usize },

    #[error("autocorrelation has imaginary part {imag:e} at t = {time}")]
    ComplexAutocorrelation { time: f64, imag: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}
