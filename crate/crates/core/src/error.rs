use thiserror::Error;

/// Errors raised by the exact engines, the enumerators and the measure analytics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("constant term not invertible")]
    NotInvertible,

    #[error("square root requires constant term 1")]
    SqrtConstantTerm,

    #[error("not non-crossing")]
    Crossing,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("{what} = {value} exceeds the limit {limit}; pass the override flag to go further")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid interval signature: {0}")]
    Signature(String),

    #[error("intervals {0} and {1} overlap without being equal")]
    OverlappingIntervals(String, String),

    #[error("unregistered interval id {0}")]
    UnknownInterval(usize),

    #[error("coefficient of z^{0} did not clear its (p+q-2) denominator")]
    UnclearedDenominator(usize),

    #[error("exact division failed: {0}")]
    InexactDivision(String),

    #[error("quadrature did not reach tolerance: estimate {estimate}, error bound {error}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("Cauchy transform undefined at {0}")]
    OnCut(String),

    #[error("invalid parameters: {0}")]
    Parameters(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("identity mismatch in {check}: {detail}")]
    Mismatch { check: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
