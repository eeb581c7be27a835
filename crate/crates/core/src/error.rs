use thiserror::Error;

use crate::grid::Domain;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unknown generator family `{0}`")]
    UnknownFamily(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("expected a {expected}-domain function")]
    DomainMismatch { expected: Domain },

    #[error("resolution mismatch: {0}")]
    ResolutionMismatch(String),

    #[error("insufficient resolution: {0}")]
    InsufficientResolution(String),

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error(
        "modulus too small on the winding path: min/max ratio {ratio:.4} must exceed {required:.4}"
    )]
    ModulusTooSmall { ratio: f64, required: f64 },

    #[error("phase step of {step:.4} cycles on the winding path exceeds 1/4 at the finest available resolution")]
    PhaseStepTooLarge { step: f64 },

    #[error("no jump witness found; smallest worst-case distance to an integer was {min_max_distance:.6}")]
    NoWitness { min_max_distance: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("generator does not give a Riesz basis (A = {lower:.3e})")]
    NotRiesz { lower: f64 },

    #[error("quasiperiodic seam inconsistency of {residual:.3e}")]
    SeamInconsistency { residual: f64 },

    #[error("problem too large: {0}")]
    TooLarge(String),
}

impl Error {
    /// True for failures of a mathematical precondition, as opposed to a
    /// malformed request.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::ModulusTooSmall { .. }
                | Error::PhaseStepTooLarge { .. }
                | Error::NoWitness { .. }
                | Error::Precondition(_)
                | Error::NotRiesz { .. }
                | Error::SeamInconsistency { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
