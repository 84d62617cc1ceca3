use thiserror::Error;

/// Errors produced by the rate evaluators, solvers and the simulation harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid prime {p}: {reason}")]
    InvalidPrime { p: u64, reason: &'static str },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("matrix is singular over the field")]
    Singular,

    #[error("system matrix has rank {rank}, need {needed}")]
    RankDeficient { rank: usize, needed: usize },

    #[error("integer matrix is singular modulo p")]
    RankDeficientModP,

    #[error("integer coefficient vector is zero")]
    ZeroVector,

    #[error("lattice basis is not full column rank")]
    RankDeficientBasis,

    #[error("enumeration would visit ~{predicted:.0} points (cap {cap})")]
    RadiusTooLarge { predicted: f64, cap: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("backhaul rate {r0} is below 2 log2 p = {needed}")]
    BackhaulTooSmall { r0: f64, needed: f64 },

    #[error("rows span rank {rank}, need a basis of size {needed}")]
    NoBasis { rank: usize, needed: usize },

    #[error("{count} candidate subsets exceed the exhaustive search limit")]
    TooLarge { count: u128 },

    #[error("{relays} relays exceed the subset-enumeration limit of {limit}")]
    TooManyRelays { relays: usize, limit: usize },

    #[error("solver did not converge: bounds [{lower}, {upper}]")]
    NonConvergence { lower: f64, upper: f64 },

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for the errors the Monte Carlo harness books as an outage sample.
    pub fn is_outage(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. } | Error::NoBasis { .. } | Error::RankDeficientModP | Error::Singular
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
