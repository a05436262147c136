//! Two-electron spin states, their coordinate wavefunctions on
//! `(theta_1, phi_1, theta_2, phi_2)`, and detector correlations.
//!
//! The quadrature channel never applies differential transverse operators.
//! A detector along `n` is represented by its two eigenstates (the Bloch
//! state along `n` and its orthogonal partner), expanded as coordinate
//! functions; the correlation is then
//! `E = sum_{s,t = +-1} s t |<u_s(a) u_t(b)|psi>|^2`
//! with every overlap a four-angle integral.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::Once;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, SpinError};
use crate::harmonics::CoverConvention;
use crate::pauli::{bloch_state, Direction, SpinMatrix, Spinor2, BETA_SIGN, NORMALIZATION_TOL};
use crate::quadrature::{four_angle_inner_product, QuadratureSpec};

/// Shown wherever quadrature-channel correlations are reported.
pub const TRANSVERSE_NOTE: &str = "transverse detector components are realized by rotating \
states (Bloch coefficients), not by differential Sx/Sy operators, which do not map beta onto alpha \
in the coordinate representation (see ladder-probe)";

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Coefficients over the ordered product basis `(aa, ab, ba, bb)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoElectronSpinState {
    pub coeffs: [Complex64; 4],
    pub label: String,
}

impl TwoElectronSpinState {
    pub fn new(coeffs: [Complex64; 4], label: impl Into<String>) -> Result<Self> {
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(SpinError::InvalidArgument("state coefficients must be finite".into()));
        }
        Ok(Self { coeffs, label: label.into() })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_physical(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORMALIZATION_TOL
    }

    fn require_physical(&self) -> Result<()> {
        if self.is_physical() {
            Ok(())
        } else {
            Err(SpinError::NotNormalized { norm_sqr: self.norm_sqr() })
        }
    }

    /// `sum conj(self_k) other_k`.
    pub fn inner(&self, other: &TwoElectronSpinState) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn coordinate_wavefunction(&self, cover: CoverConvention) -> CoordinateWavefunction {
        CoordinateWavefunction { coeffs: self.coeffs, norm: cover.norm_constant() }
    }
}

/// `sum c_xy x(theta_1, phi_1) y(theta_2, phi_2)` with `x, y` in `{alpha, beta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordinateWavefunction {
    coeffs: [Complex64; 4],
    norm: f64,
}

impl CoordinateWavefunction {
    fn one_electron(&self, theta: f64, phi: f64) -> (Complex64, Complex64) {
        let radial = if theta == 0.0 || theta == PI { 0.0 } else { theta.sin().sqrt() };
        let e = Complex64::from_polar(self.norm * radial, 0.5 * phi);
        // (alpha, beta-field scaled to the beta spinor's component)
        (e, e.conj() * BETA_SIGN)
    }

    pub fn eval(&self, theta1: f64, phi1: f64, theta2: f64, phi2: f64) -> Complex64 {
        let (a1, b1) = self.one_electron(theta1, phi1);
        let (a2, b2) = self.one_electron(theta2, phi2);
        let c = &self.coeffs;
        c[0] * a1 * a2 + c[1] * a1 * b2 + c[2] * b1 * a2 + c[3] * b1 * b2
    }
}

pub fn product_state(s1: &Spinor2, s2: &Spinor2) -> Result<TwoElectronSpinState> {
    s1.require_normalized()?;
    s2.require_normalized()?;
    let coeffs = [
        s1.c_alpha * s2.c_alpha,
        s1.c_alpha * s2.c_beta,
        s1.c_beta * s2.c_alpha,
        s1.c_beta * s2.c_beta,
    ];
    TwoElectronSpinState::new(coeffs, "product")
}

/// `(ab - ba) / sqrt 2`.
pub fn singlet() -> TwoElectronSpinState {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    TwoElectronSpinState { coeffs: [ZERO, h, -h, ZERO], label: "singlet".into() }
}

/// 4x4 operator on the product basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMatrix(pub [[Complex64; 4]; 4]);

impl PairMatrix {
    pub fn kron(a: &SpinMatrix, b: &SpinMatrix) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m[2 * i + k][2 * j + l] = a.entries[i][j] * b.entries[k][l];
                    }
                }
            }
        }
        Self(m)
    }

    pub fn expectation(&self, s: &TwoElectronSpinState) -> Complex64 {
        let mut acc = ZERO;
        for i in 0..4 {
            let row: Complex64 = (0..4).map(|j| self.0[i][j] * s.coeffs[j]).sum();
            acc += s.coeffs[i].conj() * row;
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationChannel {
    /// 4x4 matrix arithmetic.
    Oracle,
    /// Four-angle quadrature of coordinate wavefunctions.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationPoint {
    pub angle_between_detectors: f64,
    pub e_quadrature: f64,
    pub e_oracle: f64,
    pub abs_difference: f64,
}

static TRANSVERSE_WARNING: Once = Once::new();

/// `E(a, b) = <psi| (2 S.a) (x) (2 S.b) |psi>`.
pub fn epr_correlation(
    state: &TwoElectronSpinState,
    a: Direction,
    b: Direction,
    channel: CorrelationChannel,
    spec: &QuadratureSpec,
) -> Result<f64> {
    state.require_physical()?;
    match channel {
        CorrelationChannel::Oracle => {
            let m = PairMatrix::kron(&SpinMatrix::along(a).scale(2.0), &SpinMatrix::along(b).scale(2.0));
            Ok(m.expectation(state).re)
        }
        CorrelationChannel::Quadrature => {
            if a.theta().sin() != 0.0 || b.theta().sin() != 0.0 {
                TRANSVERSE_WARNING.call_once(|| log::warn!("{TRANSVERSE_NOTE}"));
            }
            quadrature_correlation(state, a, b, spec)
        }
    }
}

fn quadrature_correlation(
    state: &TwoElectronSpinState,
    a: Direction,
    b: Direction,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let psi = state.coordinate_wavefunction(spec.cover());
    let ua = bloch_state(a);
    let ub = bloch_state(b);
    let mut e = 0.0;
    for (sa, u) in [(1.0, ua), (-1.0, ua.orthogonal())] {
        for (sb, v) in [(1.0, ub), (-1.0, ub.orthogonal())] {
            let detector = product_state(&u, &v)?.coordinate_wavefunction(spec.cover());
            let amp = four_angle_inner_product(
                |t1, p1, t2, p2| detector.eval(t1, p1, t2, p2),
                |t1, p1, t2, p2| psi.eval(t1, p1, t2, p2),
                spec,
            )?;
            e += sa * sb * amp.norm_sqr();
        }
    }
    Ok(e)
}

/// Detector `a` fixed on the pole, `b` swept over `Theta in [0, pi]` at
/// `Phi = 0` in `n_points` even steps.
pub fn correlation_curve(
    state: &TwoElectronSpinState,
    n_points: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<CorrelationPoint>> {
    if n_points < 2 {
        return Err(SpinError::InvalidArgument(format!("n_points = {n_points} must be >= 2")));
    }
    let a = Direction::new(0.0, 0.0)?;
    (0..n_points)
        .map(|k| {
            let theta = if k + 1 == n_points { PI } else { PI * k as f64 / (n_points - 1) as f64 };
            let b = Direction::new(theta, 0.0)?;
            let e_oracle = epr_correlation(state, a, b, CorrelationChannel::Oracle, spec)?;
            let e_quadrature = epr_correlation(state, a, b, CorrelationChannel::Quadrature, spec)?;
            Ok(CorrelationPoint {
                angle_between_detectors: theta,
                e_quadrature,
                e_oracle,
                abs_difference: (e_quadrature - e_oracle).abs(),
            })
        })
        .collect()
}

/// The four detector axes of the standard CHSH test, in the x-z plane at
/// polar angles `0, pi/4, pi/2, 3 pi/4`, returned as `[a, b, a', b']`.
pub fn chsh_standard_settings() -> [Direction; 4] {
    [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0].map(|t| Direction::new(t, 0.0).expect("in range"))
}

/// `|E(a,b) - E(a,b') + E(a',b) + E(a',b')|` from the oracle channel.
pub fn chsh_value(state: &TwoElectronSpinState, settings: [Direction; 4]) -> Result<f64> {
    let [a, b, a2, b2] = settings;
    let spec = QuadratureSpec::four_angle_default();
    let e = |x, y| epr_correlation(state, x, y, CorrelationChannel::Oracle, &spec);
    Ok((e(a, b)? - e(a, b2)? + e(a2, b)? + e(a2, b2)?).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::four_angle_inner_product;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn product_state_examples() {
        let s = product_state(&Spinor2::alpha(), &Spinor2::beta()).unwrap();
        assert_eq!(s.coeffs, [ZERO, c(1.0), ZERO, ZERO]);
        let eq = bloch_state(Direction::new(PI / 2.0, 0.0).unwrap());
        let s = product_state(&eq, &Spinor2::alpha()).unwrap();
        for (x, y) in s.coeffs.iter().zip([FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0]) {
            assert!((x - c(y)).norm() < 2e-16);
        }
        let bad = Spinor2::new(c(1.0), c(1.0)).unwrap();
        assert!(product_state(&bad, &Spinor2::alpha()).is_err());
    }

    #[test]
    fn tilted_pair_is_neither_parallel_nor_antiparallel() {
        let tilted = bloch_state(Direction::new(1.0, 0.0).unwrap());
        let s = product_state(&tilted, &Spinor2::alpha()).unwrap();
        assert!(s.is_physical());
        // overlap with both aligned configurations is partial
        let up_up = product_state(&Spinor2::alpha(), &Spinor2::alpha()).unwrap();
        let down_up = product_state(&Spinor2::beta(), &Spinor2::alpha()).unwrap();
        let p = s.inner(&up_up).norm_sqr();
        let q = s.inner(&down_up).norm_sqr();
        assert!(p > 0.0 && q > 0.0 && (p + q - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singlet_examples() {
        let s = singlet();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        let psi = s.coordinate_wavefunction(CoverConvention::Single);
        assert_eq!(psi.eval(PI / 2.0, 0.0, PI / 2.0, 0.0), ZERO);
        let spec = QuadratureSpec::four_angle_default();
        let n = four_angle_inner_product(
            |a, b, c, d| psi.eval(a, b, c, d),
            |a, b, c, d| psi.eval(a, b, c, d),
            &spec,
        )
        .unwrap();
        assert!((n - 1.0).norm() < 1e-10);
    }

    #[test]
    fn basis_state_value_and_winding() {
        let ab = product_state(&Spinor2::alpha(), &Spinor2::beta()).unwrap();
        let psi = ab.coordinate_wavefunction(CoverConvention::Single);
        assert!((psi.eval(PI / 2.0, 0.0, PI / 2.0, 0.0) - c(1.0 / (PI * PI))).norm() < 1e-16);
        for k in 0..4 {
            let mut coeffs = [ZERO; 4];
            coeffs[k] = c(1.0);
            let psi = TwoElectronSpinState::new(coeffs, "basis").unwrap().coordinate_wavefunction(CoverConvention::Single);
            let v = psi.eval(0.9, 0.4, 2.1, -1.3);
            assert!((psi.eval(0.9, 0.4 + 2.0 * PI, 2.1, -1.3) + v).norm() < 1e-15);
            assert!((psi.eval(0.9, 0.4, 2.1, -1.3 + 2.0 * PI) + v).norm() < 1e-15);
        }
    }

    #[test]
    fn singlet_oracle_correlations() {
        let spec = QuadratureSpec::four_angle_default();
        let s = singlet();
        let z = Direction::new(0.0, 0.0).unwrap();
        let e = |b| epr_correlation(&s, z, b, CorrelationChannel::Oracle, &spec).unwrap();
        assert!((e(z) + 1.0).abs() < 1e-15);
        assert!(e(Direction::new(PI / 2.0, 0.0).unwrap()).abs() < 1e-15);
        assert!((e(Direction::new(PI, 0.0).unwrap()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quadrature_channel_matches_oracle() {
        let spec = QuadratureSpec::four_angle_default();
        let s = singlet();
        let a = Direction::new(0.3, 1.0).unwrap();
        let b = Direction::new(2.0, 4.0).unwrap();
        let o = epr_correlation(&s, a, b, CorrelationChannel::Oracle, &spec).unwrap();
        let q = epr_correlation(&s, a, b, CorrelationChannel::Quadrature, &spec).unwrap();
        assert!((o + a.angle_to(&b).cos()).abs() < 1e-14);
        assert!((o - q).abs() < 1e-6, "{o} {q}");
    }

    #[test]
    fn chsh_reaches_tsirelson_bound() {
        let v = chsh_value(&singlet(), chsh_standard_settings()).unwrap();
        assert!((v - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn curve_needs_two_points() {
        let spec = QuadratureSpec::new(8, 4, CoverConvention::Single).unwrap();
        assert!(correlation_curve(&singlet(), 1, &spec).is_err());
        let pts = correlation_curve(&singlet(), 2, &spec).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[1].angle_between_detectors, PI);
    }

    #[test]
    fn unphysical_state_rejected() {
        let s = TwoElectronSpinState::new([c(1.0), c(1.0), ZERO, ZERO], "x").unwrap();
        let z = Direction::new(0.0, 0.0).unwrap();
        let spec = QuadratureSpec::four_angle_default();
        assert!(epr_correlation(&s, z, z, CorrelationChannel::Oracle, &spec).is_err());
    }
}
