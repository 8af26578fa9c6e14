use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "quadrature did not converge: value {value}, error estimate {error_estimate} after {evaluations} evaluations"
    )]
    NonConvergence {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("invalid bracket [{lo}, {hi}]: {reason}")]
    InvalidBracket { lo: f64, hi: f64, reason: String },

    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("no Rayleigh root in (0, 1) for alpha = {alpha}; pass an explicit gamma")]
    NoUnitRoot { alpha: f64 },

    #[error("coefficient diverges: {0}")]
    Divergent(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("completeness check failed: {0}")]
    Completeness(String),

    #[error("tau = {tau} is above the spectrum cutoff {tau_max}")]
    OutOfRange { tau: f64, tau_max: f64 },

    #[error("insufficient spectrum: {0}")]
    InsufficientSpectrum(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("cache format error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
