use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("instance must contain at least one interval")]
    EmptyInstance,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid length density: {0}")]
    InvalidDensity(String),

    #[error("interval {index}: center {center} lies outside [0, 1]")]
    CenterOutOfRange { index: usize, center: f64 },

    #[error("coloring has {colors} entries but the instance has {intervals} intervals")]
    SizeMismatch { intervals: usize, colors: usize },

    #[error("color {color} at position {index} is outside 1..={k}")]
    ColorOutOfRange { index: usize, color: u32, k: u32 },

    #[error("exact solver is limited to {max} vertices, got {got}")]
    InstanceTooLarge { got: usize, max: usize },

    #[error("conditional probability {event} is undefined: the conditioning event was never observed")]
    UndefinedConditional { event: &'static str },

    #[error("closed form requires k >= 3, got k = {0}")]
    ClosedFormScope(u32),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
