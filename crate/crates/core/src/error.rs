use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid energy spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("inverse temperature must be non-negative, got {0}")]
    NegativeBeta(f64),

    #[error("inverse temperatures differ between subsystems ({0} vs {1})")]
    BetaMismatch(f64, f64),

    #[error("dimension {d} exceeds the enumeration cap of {cap}")]
    DimensionCap { d: usize, cap: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("states are comparable; the operation needs an incomparable pair")]
    NotIncomparable,

    #[error("the initial curve lies above the target curve everywhere")]
    EmptyL,

    #[error("no root of the {0} boundary on the open interval")]
    NoRoot(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
