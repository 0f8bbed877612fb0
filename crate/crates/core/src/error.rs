use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("division by zero polynomial")]
    DivisionByZero,

    #[error("degree bound violated: {0}")]
    DegreeBound(String),

    #[error("degenerate space: {0}")]
    Degenerate(String),

    #[error("not of quasi-exponential type: {0}")]
    NotQuasiExponential(String),

    #[error("not in the intersection: {0}")]
    NotInIntersection(String),

    #[error("no such irreducible component: {0}")]
    NoSingularVector(String),

    #[error("non-generic configuration: {0}")]
    NonGeneric(String),

    #[error("no quasi-exponential kernel of prescribed degrees: {0}")]
    NoKernel(String),

    #[error("character not rational of expected shape: {0}")]
    CharacterShape(String),

    #[error("spectral decomposition failed: {0}")]
    Spectral(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
