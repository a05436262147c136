//! The two l = 1/2 spin harmonics and their angle conventions.
//!
//! `alpha(theta, phi) = c * sqrt(sin theta) * exp(+i phi / 2)` and
//! `beta(theta, phi) = c * sqrt(sin theta) * exp(-i phi / 2)`, where the
//! constant `c` depends on whether the azimuth is taken over a single circle
//! (`c = 1/pi`, functions flip sign after one turn) or a double circle
//! (`c = 1/(pi sqrt 2)`, functions single-valued on `[0, 4 pi)`).

use std::f64::consts::{PI, SQRT_2, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};

/// A point on the spin sphere. `theta` is validated to `[0, pi]`; `phi` may be
/// any finite real so that windings past `2 pi` remain observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePair {
    theta: f64,
    phi: f64,
}

impl AnglePair {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(SpinError::NonFiniteAngle { theta, phi });
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(SpinError::ThetaOutOfRange { theta });
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// The same point with `winding` extra turns of `2 pi` added to phi.
    pub fn wound(&self, winding: i64) -> Self {
        Self {
            theta: self.theta,
            phi: self.phi + TAU * winding as f64,
        }
    }
}

/// Range convention for the azimuthal spin angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverConvention {
    /// `phi` in `[0, 2 pi)`; harmonics are double-valued up to sign.
    #[default]
    Single,
    /// `phi` in `[0, 4 pi)`; harmonics are single-valued.
    Double,
}

impl CoverConvention {
    /// Length of the azimuthal integration range.
    pub fn period(self) -> f64 {
        match self {
            CoverConvention::Single => TAU,
            CoverConvention::Double => 2.0 * TAU,
        }
    }

    /// Normalization constant of the l = 1/2 harmonics under this convention.
    pub fn norm_constant(self) -> f64 {
        match self {
            CoverConvention::Single => 1.0 / PI,
            CoverConvention::Double => 1.0 / (PI * SQRT_2),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CoverConvention::Single => "single",
            CoverConvention::Double => "double",
        }
    }
}

impl fmt::Display for CoverConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CoverConvention {
    type Err = SpinError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(CoverConvention::Single),
            "double" => Ok(CoverConvention::Double),
            other => Err(SpinError::InvalidArgument(format!(
                "unknown cover convention '{other}'"
            ))),
        }
    }
}

/// The sign of the azimuthal quantum number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinProjection {
    /// m = +1/2 (alpha)
    Up,
    /// m = -1/2 (beta)
    Down,
}

impl SpinProjection {
    pub fn m(self) -> f64 {
        match self {
            SpinProjection::Up => 0.5,
            SpinProjection::Down => -0.5,
        }
    }
}

/// One of the two l = 1/2 harmonics together with its cover convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinHarmonic {
    projection: SpinProjection,
    cover: CoverConvention,
    norm_constant: f64,
}

impl SpinHarmonic {
    pub fn new(projection: SpinProjection, cover: CoverConvention) -> Self {
        Self {
            projection,
            cover,
            norm_constant: cover.norm_constant(),
        }
    }

    pub fn alpha(cover: CoverConvention) -> Self {
        Self::new(SpinProjection::Up, cover)
    }

    pub fn beta(cover: CoverConvention) -> Self {
        Self::new(SpinProjection::Down, cover)
    }

    pub fn projection(&self) -> SpinProjection {
        self.projection
    }

    /// Azimuthal quantum number, +1/2 or -1/2.
    pub fn m(&self) -> f64 {
        self.projection.m()
    }

    /// Orbital-like quantum number; always 1/2 here.
    pub fn ell(&self) -> f64 {
        0.5
    }

    pub fn cover(&self) -> CoverConvention {
        self.cover
    }

    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    pub fn eval(&self, a: AnglePair) -> Complex64 {
        self.value_unchecked(a.theta, a.phi)
    }

    /// Validating convenience wrapper around [`SpinHarmonic::eval`].
    pub fn eval_at(&self, theta: f64, phi: f64) -> Result<Complex64> {
        Ok(self.eval(AnglePair::new(theta, phi)?))
    }

    /// `|Y|^2 = c^2 sin theta`; independent of phi and of the sign of m.
    pub fn density(&self, a: AnglePair) -> f64 {
        self.norm_constant * self.norm_constant * sin_nonneg(a.theta)
    }

    /// Factor relating `Y(theta, phi + 2 pi winding)` to `Y(theta, phi)`.
    pub fn cover_sign(&self, winding: i64) -> i32 {
        if winding.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    pub(crate) fn phase(&self, phi: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.m() * phi)
    }

    /// Evaluation without domain validation. Callers outside `[0, pi]` get
    /// NaN, which the quadrature routines reject.
    pub(crate) fn value_unchecked(&self, theta: f64, phi: f64) -> Complex64 {
        let radial = sin_nonneg(theta).sqrt();
        self.phase(phi) * (self.norm_constant * radial)
    }

    pub(crate) fn d_theta_unchecked(&self, theta: f64, phi: f64) -> Complex64 {
        let s = theta.sin();
        self.phase(phi) * (self.norm_constant * theta.cos() / (2.0 * s.sqrt()))
    }

    pub(crate) fn d2_theta_unchecked(&self, theta: f64, phi: f64) -> Complex64 {
        let s = theta.sin();
        let c = theta.cos();
        let radial = -0.5 * s.sqrt() - c * c / (4.0 * s * s.sqrt());
        self.phase(phi) * (self.norm_constant * radial)
    }

    pub(crate) fn d_phi_unchecked(&self, theta: f64, phi: f64) -> Complex64 {
        Complex64::new(0.0, self.m()) * self.value_unchecked(theta, phi)
    }

    pub(crate) fn d2_phi_unchecked(&self, theta: f64, phi: f64) -> Complex64 {
        self.value_unchecked(theta, phi) * (-self.m() * self.m())
    }
}

/// `sin theta` on `[0, pi]`, with both endpoints mapped to exactly zero.
/// NaN outside the closed range.
fn sin_nonneg(theta: f64) -> f64 {
    if theta == 0.0 || theta == PI {
        0.0
    } else if (0.0..=PI).contains(&theta) {
        theta.sin().max(0.0)
    } else {
        f64::NAN
    }
}
