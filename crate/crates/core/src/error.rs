use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },

    #[error("parameter regime not supported: {0}")]
    Regime(String),

    #[error("argument outside the supported region: {0}")]
    UnsupportedRegion(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("derivative of order {order} not available for {family}")]
    UnsupportedDerivative { family: &'static str, order: usize },

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("missing statistic `{0}` for envelope evaluation")]
    MissingStat(&'static str),

    #[error("quadrature tolerance not met: err_est {err_est:e} > abs_tol {abs_tol:e}")]
    ToleranceNotMet {
        value_re: f64,
        value_im: f64,
        err_est: f64,
        abs_tol: f64,
        panels_used: usize,
    },

    #[error("quadrature failed at lambda = {lambda:e}: {detail}")]
    SweepFailure { lambda: f64, detail: String },

    #[error("singular quadrature refinement stalled (last change {change:e})")]
    SingularityFailure { change: f64 },

    #[error("hypotheses of {theorem} fail: {detail}")]
    HypothesisFailure { theorem: String, detail: String },

    #[error("insufficient data for fit: {have} rows in window, need {need}")]
    InsufficientData { have: usize, need: usize },

    #[error("non-positive value {value:e} at lambda = {lambda:e}")]
    NonPositiveValue { lambda: f64, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
