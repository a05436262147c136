//! Coordinate representation of electron spin.
//!
//! Spin-1/2 states are written as functions of two orientation angles
//! `(theta, phi)`: the l = 1/2 harmonics `alpha` and `beta`
//! ([`harmonics`]), the usual angular-momentum differential operators acting
//! on them ([`operators`]), and tensor-product quadrature for their inner
//! products ([`quadrature`]). The two-component Pauli picture
//! ([`pauli`]) serves as an independent reference, and [`entangle`] builds
//! two-electron states and detector correlations on top of both.
//!
//! All angular momenta are in units of hbar.

pub mod cli;
pub mod entangle;
pub mod error;
pub mod harmonics;
pub mod operators;
pub mod pauli;
pub mod quadrature;

pub use error::{Result, SpinError};
pub use harmonics::{AnglePair, CoverConvention, SpinHarmonic, SpinProjection};
pub use operators::{OperatorSettings, SpinOperator, SpinorField};
pub use pauli::{Direction, SpinMatrix, Spinor2};
pub use quadrature::QuadratureSpec;
