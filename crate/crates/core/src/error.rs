use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("model `{model}` has no horizon: {reason}")]
    NoHorizon { model: String, reason: String },
    #[error("r = {r} outside the model domain ({min}, {max})")]
    OutOfDomain { r: f64, min: f64, max: f64 },
    #[error("curve point at t = {t} lies on the rotation axis")]
    AxisPoint { t: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("model `{0}` is not a space form")]
    NotSpaceForm(String),
    #[error("sampler could not reach the cone: {0}")]
    Unreachable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
