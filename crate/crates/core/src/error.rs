use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("classes belong to different models")]
    ModelMismatch,
    #[error("Frobenius pairing degenerate")]
    DegeneratePairing,
    #[error("model has no restriction ideal")]
    NoIdeal,
    #[error("unknown basis element {0:?}")]
    UnknownBasis(String),
    #[error("Heisenberg index 0 is not allowed")]
    ZeroIndex,
    #[error("weight mismatch: expected {expected}, found {found}")]
    WeightMismatch { expected: usize, found: usize },
    #[error("unknown universal coefficients required: {0}")]
    Computability(String),
    #[error("vector is not in the span of 1_X-labelled monomials")]
    NotUnitLabelled,
    #[error("{0}")]
    Usage(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
