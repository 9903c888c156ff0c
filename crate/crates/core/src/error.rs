use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("time {t} outside the range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("caustic on axis {axis} at t = {t} (mu = {mu:e})")]
    Caustic { axis: usize, t: f64, mu: f64 },

    #[error("gamma unavailable on axis {axis} past t = {valid_until} (mu-dot vanishes)")]
    GammaUnavailable { axis: usize, valid_until: f64 },

    #[error("aliasing: {0}")]
    Aliasing(String),

    #[error("time tag mismatch: field at t = {field}, requested t = {requested}")]
    TimeTagMismatch { field: f64, requested: f64 },

    #[error("boundary mass fraction {fraction:e} exceeds cap {cap:e} at t = {t}")]
    BoundaryMass { t: f64, fraction: f64, cap: f64 },

    #[error("non-finite field value at t = {t}")]
    NonFinite { t: f64 },

    #[error("lens frame invalid at t = {t}: {reason}")]
    LensWindow { t: f64, reason: String },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("series too short: {0}")]
    SeriesTooShort(String),

    #[error("config: {0}")]
    Config(String),

    #[error("snapshot format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
