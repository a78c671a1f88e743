use thiserror::Error;

/// Errors raised by the core library.
///
/// Every variant has a stable short [`kind`](Error::kind) used by the CLI for
/// machine-parsable diagnostics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid transition matrix: {0}")]
    InvalidTransitionMatrix(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid symbol {0:?}")]
    InvalidSymbol(char),
    #[error("divergence undefined: {0}")]
    AbsoluteContinuity(String),
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("theta {theta} outside achievable range [{lo}, {hi}]")]
    ThetaOutOfRange { theta: f64, lo: f64, hi: f64 },
    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),
    #[error("bound is not positive: {0}")]
    NonPositiveBound(f64),
    #[error("empty bridging interval: J + 2L - (2d + K) = {0}")]
    EmptyBridgingInterval(i64),
    #[error("reads already carry noise")]
    AlreadyNoised,
    #[error("zero-probability symbol pair ({0}, {1}) under the model")]
    ZeroProbabilityPair(char, char),
    #[error("no layout to verify")]
    LayoutAbsent,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
}

impl Error {
    /// Stable identifier for scripts.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDistribution(_) => "invalid_distribution",
            Error::InvalidTransitionMatrix(_) => "invalid_transition_matrix",
            Error::InvalidChannel(_) => "invalid_channel",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::InvalidSymbol(_) => "invalid_symbol",
            Error::AbsoluteContinuity(_) => "absolute_continuity",
            Error::NoConvergence { .. } => "no_convergence",
            Error::ThetaOutOfRange { .. } => "theta_out_of_range",
            Error::DegenerateChannel(_) => "degenerate_channel",
            Error::NonPositiveBound(_) => "nonpositive_bound",
            Error::EmptyBridgingInterval(_) => "empty_bridging_interval",
            Error::AlreadyNoised => "already_noised",
            Error::ZeroProbabilityPair(..) => "zero_probability_pair",
            Error::LayoutAbsent => "layout_absent",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::UnknownPreset(_) => "unknown_preset",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
