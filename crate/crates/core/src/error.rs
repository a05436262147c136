use thiserror::Error;

/// Errors raised by the spin-coordinate library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpinError {
    #[error("polar angle {theta} outside [0, pi]")]
    ThetaOutOfRange { theta: f64 },

    #[error("non-finite angle (theta = {theta}, phi = {phi})")]
    NonFiniteAngle { theta: f64, phi: f64 },

    #[error("polar angle {theta} within {guard} of a pole")]
    PoleProximity { theta: f64, guard: f64 },

    #[error("non-finite integrand value at node (theta = {theta}, phi = {phi})")]
    NonFiniteNode { theta: f64, phi: f64 },

    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),

    #[error("invalid operator settings: {0}")]
    InvalidSettings(String),

    #[error("spinor is not a basis spinor (1,0) or (0,1)")]
    NotBasisSpinor,

    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid direction (Theta = {theta}, Phi = {phi})")]
    InvalidDirection { theta: f64, phi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, SpinError>;
