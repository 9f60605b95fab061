use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown algebra label `{0}`")]
    UnknownAlgebra(String),
    #[error("invalid Cartan matrix for {label}: {property}")]
    InvalidCartan { label: String, property: String },
    #[error("Weyl group too large: at least {found} elements, cap is {cap}")]
    WeylGroupTooLarge { found: usize, cap: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("singular parameters: {0}")]
    SingularParameters(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("sample count must be positive")]
    ZeroSamples,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("non-regular element: {0}")]
    NonRegular(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
