use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("memory parameter alpha must lie in (0, 1), got {0}")]
    AlphaOutOfRange(f64),

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("r * alpha must be below 1 for the long-memory regime (r = {r}, alpha = {alpha})")]
    NotLongMemory { r: u32, alpha: f64 },

    #[error("order r must be 1 or 2, got {0}")]
    UnsupportedOrder(u32),

    #[error("error path carries no innovations (backend {0})")]
    MissingInnovations(&'static str),

    #[error("operation requires the truncated moving-average backend")]
    RequiresMovingAverage,

    #[error("circulant embedding has a negative eigenvalue {value} at index {index}")]
    NegativeEigenvalue { index: usize, value: f64 },

    #[error("degenerate design: predictors have zero spread")]
    DegenerateDesign,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {min} observations, got {got}")]
    TooFew { min: usize, got: usize },

    #[error("values must be positive: {0}")]
    NonPositiveValue(f64),

    #[error("density vanishes at {0}")]
    ZeroDensity(f64),

    #[error("operation requires a linear least-squares fit")]
    NotLinear,

    #[error("invalid configuration: {0}")]
    Config(String),
}
