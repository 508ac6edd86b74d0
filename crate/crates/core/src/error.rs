use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown scheme `{name}`; valid names: {valid}")]
    UnknownScheme { name: String, valid: String },

    #[error("cannot compose `{name}`: {reason}")]
    Composition { name: String, reason: String },

    #[error("scheme `{name}` failed validation: {reason}")]
    InvalidScheme { name: String, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: lattice has {expected} sites, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("blow-up at t={t}: max |q|,|p| = {max_abs:e}")]
    BlowUp { t: f64, max_abs: f64 },

    #[error("degenerate energy distribution: total site energy is {0}")]
    DegenerateDistribution(f64),

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("errors at roundoff floor, shrink the range: {0}")]
    ShrinkRange(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("lattice file line {line}: {reason}")]
    LatticeFormat { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
