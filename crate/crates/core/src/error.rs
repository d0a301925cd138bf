use crate::quadrature::QuadError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no bound state for Z = 0")]
    NoBoundState,
    #[error("momentum must be {expected}, got k = {k}")]
    InvalidMomentum { k: f64, expected: &'static str },
    #[error("state {0} does not exist at k = 0")]
    NoZeroMomentumState(&'static str),
    #[error("frequency {re} + {im}i lies on the continuous spectrum")]
    SpectralFrequency { re: f64, im: f64 },
    #[error("frequency {re} + {im}i is within 1e-12 of the bound-state pole")]
    PoleProximity { re: f64, im: f64 },
    #[error("{quantity} diverges at x = 0")]
    SingularPoint { quantity: &'static str },
    #[error("x = {x} is outside the stable window |x| <= {limit}")]
    OutsideStableWindow { x: f64, limit: f64 },
    #[error(
        "{quantity}: quadrature did not converge (estimate {value:e}, error {error_estimate:e})"
    )]
    NotConverged {
        quantity: &'static str,
        value: f64,
        error_estimate: f64,
    },
    #[error("{quantity}: consistency check failed, residual {residual:e}")]
    Diagnostic {
        quantity: &'static str,
        residual: f64,
    },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

pub type Result<T> = std::result::Result<T, Error>;
