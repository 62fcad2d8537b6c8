use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coefficients are outside the stationarity region: {0}")]
    NonStationary(String),

    #[error("estimation failed: {0}")]
    EstimationFailed(String),

    /// Residuals have zero spread, so `ŝₙ = 0` and the statistics are undefined.
    #[error("degenerate residuals: variance estimate is zero")]
    DegenerateResiduals,

    #[error("invalid innovation law: {0}")]
    InvalidLaw(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
