use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The linearized dynamics are unstable at or above threshold.
    #[error("threshold violation: squeezing rate {g} must satisfy 0 <= g < 1 (units of gamma12)")]
    Threshold { g: f64 },

    #[error("no squeezing: displacement undefined")]
    NoSqueezing,

    #[error("undefined measure ({0})")]
    UndefinedMeasure(&'static str),

    #[error("no sign change over [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error(
        "quadrature did not converge: estimate {estimate:e}, error {error:e} after {intervals} intervals (tolerance {tolerance:e})"
    )]
    Quadrature {
        estimate: f64,
        error: f64,
        intervals: usize,
        tolerance: f64,
    },

    #[error("cutoff too small: leakage {leakage:e} at cutoff {cutoff}, try cutoff {suggested}")]
    CutoffTooSmall {
        cutoff: usize,
        leakage: f64,
        suggested: usize,
    },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("unknown figure preset `{0}`")]
    UnknownPreset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
