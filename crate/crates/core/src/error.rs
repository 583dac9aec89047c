use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {dim}: dimension must be 2 or an odd prime")]
    UnsupportedDimension { dim: usize },

    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: &'static str },

    #[error("disturbance {value} outside [{min}, {max}] for d = {d}")]
    DisturbanceOutOfRange {
        d: usize,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("negative radicand at D = {value} for d = {d}; valid interval is [0, {max}]")]
    NegativeRadicand { d: usize, value: f64, max: f64 },

    #[error("frame is not orthonormal (Gram residual {residual:e})")]
    NonOrthonormalFrame { residual: f64 },

    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("no real overlap coefficients for d = {d}, D = {disturbance}")]
    NoRealRoot { d: usize, disturbance: f64 },

    #[error("no sign change of I_AE - I_AB on [{lo}, {hi}] for d = {d}")]
    NoSignChange { d: usize, lo: f64, hi: f64 },

    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
