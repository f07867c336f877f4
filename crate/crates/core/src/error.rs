use thiserror::Error;

/// Errors raised by the channel calculus and the Fock-space oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NonHermitianInput { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("function undefined on spectrum at {at}")]
    Domain { at: f64 },

    #[error("invalid Gaussian state: {0}")]
    InvalidState(String),

    #[error("Renyi order must exceed 1, got {0}")]
    BadOrder(f64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("attenuator gain exceeds unity (max eigenvalue of K*K is {max_gain:.6})")]
    GainTooHigh { max_gain: f64 },

    #[error("amplifier gain below unity (min eigenvalue of K*K is {min_gain:.6})")]
    GainTooLow { min_gain: f64 },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("mode mismatch: channel expects {expected} modes, got {found}")]
    ModeMismatch { expected: usize, found: usize },

    #[error("tensor product of a covariant and a contravariant channel is not supported")]
    MixedVariant,

    #[error("channel is not extreme")]
    NotExtremal,

    #[error("unsupported branch: {0}")]
    UnsupportedBranch(String),

    #[error("K*K and mu do not commute (relative commutator {residual:.3e})")]
    NonCommuting { residual: f64 },

    #[error("Fock cutoff too small: {0}")]
    CutoffTooSmall(String),

    #[error("invalid one-mode factor: {0}")]
    InvalidFactor(String),

    #[error("quadrature did not converge (node doubling changed result by {change:.3e})")]
    QuadratureNotConverged { change: f64 },

    #[error("invalid energy constraint: {0}")]
    InvalidConstraint(String),
}

impl Error {
    /// Stable machine-readable identifier, used in structured error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonHermitianInput { .. } => "NonHermitianInput",
            Error::NotPsd { .. } => "NotPSD",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Domain { .. } => "DomainError",
            Error::InvalidState(_) => "InvalidState",
            Error::BadOrder(_) => "BadOrder",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::GainTooHigh { .. } => "GainTooHigh",
            Error::GainTooLow { .. } => "GainTooLow",
            Error::InvalidChannel(_) => "InvalidChannel",
            Error::ModeMismatch { .. } => "ModeMismatch",
            Error::MixedVariant => "MixedVariant",
            Error::NotExtremal => "NotExtremal",
            Error::UnsupportedBranch(_) => "UnsupportedBranch",
            Error::NonCommuting { .. } => "NonCommuting",
            Error::CutoffTooSmall(_) => "CutoffTooSmall",
            Error::InvalidFactor(_) => "InvalidFactor",
            Error::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            Error::InvalidConstraint(_) => "InvalidConstraint",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
