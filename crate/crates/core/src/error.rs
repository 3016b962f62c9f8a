use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in cell {cell}")]
    NonFinite { cell: usize },

    #[error("inadmissible state: {0}")]
    Inadmissible(String),

    #[error("system is not strictly hyperbolic: {0}")]
    NotHyperbolic(String),

    #[error("eigenvalue {0:e} violates the non-characteristic boundary condition")]
    CharacteristicBoundary(f64),

    #[error("singular {context} (condition estimate {condition:.3e})")]
    Singular { context: String, condition: f64 },

    #[error("unsupported viscosity matrix: {0}")]
    UnsupportedViscosity(String),

    #[error("t = {t} is beyond the validity time {limit} of the exact solution")]
    BeyondValidity { t: f64, limit: f64 },

    #[error("exceeded the step limit of {0}")]
    MaxSteps(usize),

    #[error("solution blew up at step {step} (t = {t})")]
    Unstable { step: usize, t: f64 },

    #[error("scheme mismatch: {0}")]
    SchemeMismatch(String),
}
