use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("frequency grids differ: {0}")]
    GridMismatch(String),

    #[error("frequency {omega} rad/fs is not a grid sample")]
    OffGrid { omega: f64 },

    #[error("malformed spectrum file: {0}")]
    MalformedSpectrum(String),

    #[error("spectrum file does not cover the grid: {0}")]
    SpectrumCoverage(String),

    #[error("delay axis is not uniform: {0}")]
    NonUniformAxis(String),

    #[error("series of {len} samples does not cover an integer number of periods of {per_period} samples")]
    PartialPeriod { len: usize, per_period: usize },

    #[error("harmonic {0} is not supported (expected 1 or 2)")]
    Harmonic(i32),

    #[error("signal is identically zero")]
    ZeroSignal,

    #[error("no peak above baseline ({0})")]
    NoPeak(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
