use thiserror::Error;

/// Errors raised by window construction and the frame computations built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole parameter at position {index} is zero")]
    ZeroDelta { index: usize },
    #[error("pole parameter at position {index} is not finite")]
    NonFiniteDelta { index: usize },
    #[error("a window of finite type needs at least 2 pole parameters, got {count}")]
    TooFewPoles { count: usize },
    #[error("scale must be positive and finite, got {scale}")]
    NonpositiveScale { scale: f64 },
    #[error("pole parameters are not pairwise distinct; the pointwise formula does not apply")]
    RepeatedPoles,
    #[error("denominator modulus {modulus:e} on the torus is below 1e-14")]
    PoleOnTorus { modulus: f64 },
    #[error("knot {knot} repeats {multiplicity} times, at most {max} supported")]
    MultiplicityTooHigh {
        knot: f64,
        multiplicity: usize,
        max: usize,
    },
    #[error("Zak zero not resolved: residual {residual:e} >= tolerance {tol:e}")]
    ZeroNotResolved { x0: f64, residual: f64, tol: f64 },
    #[error("divisibility violated: {0}")]
    Divisibility(String),
    #[error("lattice density product alpha*beta = {product} must be < 1")]
    Density { product: f64 },
    #[error("matrix has numerical rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("left-inverse check failed: max |P^+ P - I| = {residual:e}")]
    LeftInverseResidual { residual: f64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroDelta { .. } => "ZeroDelta",
            Error::NonFiniteDelta { .. } => "NonFiniteDelta",
            Error::TooFewPoles { .. } => "TooFewPoles",
            Error::NonpositiveScale { .. } => "NonpositiveScale",
            Error::RepeatedPoles => "RepeatedPoles",
            Error::PoleOnTorus { .. } => "PoleOnTorus",
            Error::MultiplicityTooHigh { .. } => "MultiplicityTooHigh",
            Error::ZeroNotResolved { .. } => "ZeroNotResolved",
            Error::Divisibility(_) => "DivisibilityError",
            Error::Density { .. } => "DensityError",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::LeftInverseResidual { .. } => "LeftInverseResidual",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
