use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("distance must be positive, got {0} m")]
    NonPositiveDistance(f64),

    #[error("carrier frequency must be positive, got {0} GHz")]
    NonPositiveFrequency(f64),

    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("degenerate channel: {0}")]
    DegenerateChannel(&'static str),

    #[error("search space too large: {0}")]
    TooLarge(String),

    #[error("{connected} connected elements exceed the {total} available")]
    ConnectedExceedsTotal { connected: usize, total: usize },

    #[error("total power must be positive")]
    ZeroPower,

    #[error("invalid sweep point {value}: {reason}")]
    InvalidSweepPoint { value: f64, reason: &'static str },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, SimError>;
