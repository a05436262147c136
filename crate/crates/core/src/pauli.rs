//! Two-component (Pauli) representation of spin 1/2, used as the independent
//! reference for the coordinate representation.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, SpinError};
use crate::harmonics::CoverConvention;
use crate::operators::SpinorField;
use crate::quadrature::{full_inner_product, QuadratureSpec};

/// Tolerance on `|c_alpha|^2 + |c_beta|^2 - 1` for a spinor to count as normalized.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Sign of the lower component of the beta spinor. Some texts use `(0, -1)`.
pub const BETA_SIGN: f64 = 1.0;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Coefficients over the `(alpha, beta)` basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spinor2 {
    pub c_alpha: Complex64,
    pub c_beta: Complex64,
}

impl Spinor2 {
    pub fn new(c_alpha: Complex64, c_beta: Complex64) -> Result<Self> {
        let s = Self { c_alpha, c_beta };
        if !s.is_finite() {
            return Err(SpinError::InvalidArgument("spinor components must be finite".into()));
        }
        Ok(s)
    }

    pub fn alpha() -> Self {
        Self { c_alpha: ONE, c_beta: ZERO }
    }

    pub fn beta() -> Self {
        Self { c_alpha: ZERO, c_beta: Complex64::new(BETA_SIGN, 0.0) }
    }

    fn is_finite(&self) -> bool {
        [self.c_alpha, self.c_beta].iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c_alpha.norm_sqr() + self.c_beta.norm_sqr()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORMALIZATION_TOL
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(SpinError::NotNormalized { norm_sqr: self.norm_sqr() })
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(SpinError::NotNormalized { norm_sqr: self.norm_sqr() });
        }
        Ok(*self * Complex64::new(1.0 / n, 0.0))
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Spinor2) -> Complex64 {
        self.c_alpha.conj() * other.c_alpha + self.c_beta.conj() * other.c_beta
    }

    /// The orthogonal spinor `(-conj(c_beta), conj(c_alpha))`.
    pub fn orthogonal(&self) -> Self {
        Self { c_alpha: -self.c_beta.conj(), c_beta: self.c_alpha.conj() }
    }

    pub fn distance(&self, other: &Spinor2) -> f64 {
        (*self - *other).norm_sqr().sqrt()
    }

    /// `c_alpha * alpha + c_beta * beta` as a coordinate-space field.
    pub fn to_field(&self, cover: CoverConvention) -> SpinorField {
        let a = SpinorField::alpha(cover);
        let b = SpinorField::beta(cover);
        // beta field is the image of the (0, BETA_SIGN) spinor
        SpinorField::linear_combination(&[(self.c_alpha, &a), (self.c_beta * BETA_SIGN, &b)])
    }
}

impl Add for Spinor2 {
    type Output = Spinor2;
    fn add(self, o: Spinor2) -> Spinor2 {
        Spinor2 { c_alpha: self.c_alpha + o.c_alpha, c_beta: self.c_beta + o.c_beta }
    }
}

impl Sub for Spinor2 {
    type Output = Spinor2;
    fn sub(self, o: Spinor2) -> Spinor2 {
        Spinor2 { c_alpha: self.c_alpha - o.c_alpha, c_beta: self.c_beta - o.c_beta }
    }
}

impl Mul<Complex64> for Spinor2 {
    type Output = Spinor2;
    fn mul(self, c: Complex64) -> Spinor2 {
        Spinor2 { c_alpha: self.c_alpha * c, c_beta: self.c_beta * c }
    }
}

/// Polar and azimuthal orientation of a spin or detector axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    /// `theta` in `[0, pi]`, `phi` in `[0, 2 pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) || !(0.0..=PI).contains(&theta) || !(0.0..TAU).contains(&phi) {
            return Err(SpinError::InvalidDirection { theta, phi });
        }
        Ok(Self { theta, phi })
    }

    /// Direction of a nonzero 3-vector, with phi reduced to `[0, 2 pi)`.
    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(r > 0.0 && r.is_finite()) {
            return Err(SpinError::InvalidArgument("zero or non-finite direction vector".into()));
        }
        let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
        let mut phi = v[1].atan2(v[0]);
        if phi < 0.0 {
            phi += TAU;
        }
        if phi >= TAU {
            phi = 0.0;
        }
        Self::new(theta, phi)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Angle between two directions.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        let (u, v) = (self.unit_vector(), other.unit_vector());
        (u[0] * v[0] + u[1] * v[1] + u[2] * v[2]).clamp(-1.0, 1.0).acos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MatrixTag {
    Sx,
    Sy,
    Sz,
    S2,
    Sn(Direction),
    Other,
}

/// A 2x2 complex spin operator in the `(alpha, beta)` basis (hbar = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMatrix {
    pub entries: [[Complex64; 2]; 2],
    pub tag: MatrixTag,
}

impl SpinMatrix {
    pub fn new(entries: [[Complex64; 2]; 2], tag: MatrixTag) -> Self {
        Self { entries, tag }
    }

    pub fn identity() -> Self {
        Self::new([[ONE, ZERO], [ZERO, ONE]], MatrixTag::Other)
    }

    pub fn sx() -> Self {
        let h = Complex64::new(0.5, 0.0);
        Self::new([[ZERO, h], [h, ZERO]], MatrixTag::Sx)
    }

    pub fn sy() -> Self {
        let h = Complex64::new(0.0, 0.5);
        Self::new([[ZERO, -h], [h, ZERO]], MatrixTag::Sy)
    }

    pub fn sz() -> Self {
        Self::new([[Complex64::new(0.5, 0.0), ZERO], [ZERO, Complex64::new(-0.5, 0.0)]], MatrixTag::Sz)
    }

    /// `Sx^2 + Sy^2 + Sz^2`.
    pub fn s2() -> Self {
        let (x, y, z) = (Self::sx(), Self::sy(), Self::sz());
        let mut m = x * x + y * y + z * z;
        m.tag = MatrixTag::S2;
        m
    }

    /// `S . n` for the unit vector of `d`.
    pub fn along(d: Direction) -> Self {
        let [nx, ny, nz] = d.unit_vector();
        let mut m = Self::sx().scale(nx) + Self::sy().scale(ny) + Self::sz().scale(nz);
        m.tag = MatrixTag::Sn(d);
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut e = self.entries;
        for row in &mut e {
            for x in row.iter_mut() {
                *x *= s;
            }
        }
        Self::new(e, self.tag)
    }

    pub fn apply(&self, s: &Spinor2) -> Spinor2 {
        let e = &self.entries;
        Spinor2 {
            c_alpha: e[0][0] * s.c_alpha + e[0][1] * s.c_beta,
            c_beta: e[1][0] * s.c_alpha + e[1][1] * s.c_beta,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        let e = &self.entries;
        e[0][1] == e[1][0].conj() && e[0][0].im == 0.0 && e[1][1].im == 0.0
    }

    pub fn commutator(&self, other: &SpinMatrix) -> SpinMatrix {
        let mut m = *self * *other - *other * *self;
        m.tag = MatrixTag::Other;
        m
    }

    pub fn max_abs_diff(&self, other: &SpinMatrix) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        worst
    }
}

impl Add for SpinMatrix {
    type Output = SpinMatrix;
    fn add(self, o: SpinMatrix) -> SpinMatrix {
        let mut e = self.entries;
        for (i, row) in e.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x += o.entries[i][j];
            }
        }
        SpinMatrix::new(e, MatrixTag::Other)
    }
}

impl Sub for SpinMatrix {
    type Output = SpinMatrix;
    fn sub(self, o: SpinMatrix) -> SpinMatrix {
        self + o.scale(-1.0)
    }
}

impl Mul for SpinMatrix {
    type Output = SpinMatrix;
    fn mul(self, o: SpinMatrix) -> SpinMatrix {
        let mut e = [[ZERO; 2]; 2];
        for (i, row) in e.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.entries[i][0] * o.entries[0][j] + self.entries[i][1] * o.entries[1][j];
            }
        }
        SpinMatrix::new(e, MatrixTag::Other)
    }
}

impl Mul<Complex64> for SpinMatrix {
    type Output = SpinMatrix;
    fn mul(self, c: Complex64) -> SpinMatrix {
        let mut e = self.entries;
        for row in &mut e {
            for x in row.iter_mut() {
                *x *= c;
            }
        }
        SpinMatrix::new(e, self.tag)
    }
}

/// Eigenvalues of S^2 and S_z on a basis spinor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenReport {
    pub s2_eigenvalue: f64,
    pub sz_eigenvalue: f64,
    /// `max(||S^2 s - l s||, ||S_z s - m s||)`
    pub residual: f64,
}

/// Verifies that `s` (alpha or beta) is a joint eigenvector of S^2 and S_z.
pub fn abstract_eigencheck(s: &Spinor2) -> Result<EigenReport> {
    let up = s.c_beta.norm() == 0.0 && (s.c_alpha.norm() - 1.0).abs() <= NORMALIZATION_TOL;
    let down = s.c_alpha.norm() == 0.0 && (s.c_beta.norm() - 1.0).abs() <= NORMALIZATION_TOL;
    if !(up || down) {
        return Err(SpinError::NotBasisSpinor);
    }
    let pick = |v: &Spinor2| if up { v.c_alpha / s.c_alpha } else { v.c_beta / s.c_beta };
    let s2v = SpinMatrix::s2().apply(s);
    let szv = SpinMatrix::sz().apply(s);
    let l = pick(&s2v).re;
    let m = pick(&szv).re;
    let residual = s2v
        .distance(&(*s * Complex64::new(l, 0.0)))
        .max(szv.distance(&(*s * Complex64::new(m, 0.0))));
    Ok(EigenReport { s2_eigenvalue: l, sz_eigenvalue: m, residual })
}

/// The four scalar products of the basis spinors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthonormalityReport {
    pub alpha_alpha: Complex64,
    pub beta_beta: Complex64,
    pub alpha_beta: Complex64,
    pub beta_alpha: Complex64,
}

impl OrthonormalityReport {
    pub fn max_deviation(&self) -> f64 {
        (self.alpha_alpha - 1.0)
            .norm()
            .max((self.beta_beta - 1.0).norm())
            .max(self.alpha_beta.norm())
            .max(self.beta_alpha.norm())
    }
}

pub fn orthonormality_check() -> OrthonormalityReport {
    let (a, b) = (Spinor2::alpha(), Spinor2::beta());
    OrthonormalityReport {
        alpha_alpha: a.inner(&a),
        beta_beta: b.inner(&b),
        alpha_beta: a.inner(&b),
        beta_alpha: b.inner(&a),
    }
}

/// Coordinate-to-spinor map: `c_alpha = <alpha|f>`, `c_beta = <beta|f>`, with
/// alpha and beta taken on the spec's cover.
pub fn project_to_spinor(f: &SpinorField, spec: &QuadratureSpec) -> Result<Spinor2> {
    let a = SpinorField::alpha(spec.cover());
    let b = SpinorField::beta(spec.cover());
    let c_alpha = full_inner_product(&a, f, spec)?;
    let c_beta = full_inner_product(&b, f, spec)? * BETA_SIGN;
    Spinor2::new(c_alpha, c_beta)
}

/// Spin state polarized along `d`, with `c_alpha` real and non-negative.
pub fn bloch_state(d: Direction) -> Spinor2 {
    let half = 0.5 * d.theta();
    Spinor2 {
        c_alpha: Complex64::new(half.cos(), 0.0),
        c_beta: Complex64::from_polar(half.sin(), d.phi()) * BETA_SIGN,
    }
}

/// `s^dagger M s` for a normalized spinor.
pub fn expectation(s: &Spinor2, m: &SpinMatrix) -> Result<f64> {
    s.require_normalized()?;
    Ok(s.inner(&m.apply(s)).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    const I: Complex64 = Complex64::new(0.0, 1.0);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_eigencheck() {
        let r = abstract_eigencheck(&Spinor2::alpha()).unwrap();
        assert_eq!((r.s2_eigenvalue, r.sz_eigenvalue, r.residual), (0.75, 0.5, 0.0));
        let r = abstract_eigencheck(&Spinor2::beta()).unwrap();
        assert_eq!((r.s2_eigenvalue, r.sz_eigenvalue, r.residual), (0.75, -0.5, 0.0));
        let mixed = Spinor2::new(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap();
        assert_eq!(abstract_eigencheck(&mixed), Err(SpinError::NotBasisSpinor));
    }

    #[test]
    fn orthonormality() {
        let r = orthonormality_check();
        assert_eq!(r.alpha_alpha, ONE);
        assert_eq!(r.beta_beta, ONE);
        assert_eq!(r.alpha_beta, ZERO);
        assert_eq!(r.beta_alpha, ZERO);
        assert_eq!(r.max_deviation(), 0.0);
    }

    #[test]
    fn beta_sign_convention() {
        assert_eq!(Spinor2::beta().c_beta, c(BETA_SIGN, 0.0));
        let f = Spinor2::beta().to_field(CoverConvention::Single);
        let b = SpinorField::beta(CoverConvention::Single);
        for (t, p) in [(0.5, 0.1), (2.0, -3.0)] {
            assert!((f.value(t, p) - b.value(t, p) * BETA_SIGN * BETA_SIGN).norm() < 1e-16);
        }
    }

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (SpinMatrix::sx(), SpinMatrix::sy(), SpinMatrix::sz());
        assert_eq!(x.commutator(&y).max_abs_diff(&(z * I)), 0.0);
        assert_eq!(y.commutator(&z).max_abs_diff(&(x * I)), 0.0);
        assert_eq!(z.commutator(&x).max_abs_diff(&(y * I)), 0.0);
        assert_eq!(SpinMatrix::s2().max_abs_diff(&SpinMatrix::identity().scale(0.75)), 0.0);
        for m in [x, y, z, SpinMatrix::s2()] {
            assert!(m.is_hermitian());
        }
    }

    #[test]
    fn bloch_examples() {
        let s = bloch_state(Direction::new(0.0, 0.0).unwrap());
        assert_eq!(s, Spinor2::alpha());
        let s = bloch_state(Direction::new(PI, 0.0).unwrap());
        assert!(s.distance(&Spinor2::beta()) < 1e-16);
        let s = bloch_state(Direction::new(PI / 2.0, 0.0).unwrap());
        assert!(s.distance(&Spinor2::new(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap()) < 2e-16);
        assert!((expectation(&s, &SpinMatrix::sx()).unwrap() - 0.5).abs() < 1e-15);
        assert!(expectation(&s, &SpinMatrix::sz()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(expectation(&Spinor2::alpha(), &SpinMatrix::s2()).unwrap(), 0.75);
        assert_eq!(expectation(&Spinor2::beta(), &SpinMatrix::sz()).unwrap(), -0.5);
        let bad = Spinor2::new(ONE, ONE).unwrap();
        assert!(matches!(expectation(&bad, &SpinMatrix::sz()), Err(SpinError::NotNormalized { .. })));
    }

    #[test]
    fn direction_validation() {
        assert!(Direction::new(-0.1, 0.0).is_err());
        assert!(Direction::new(0.1, TAU).is_err());
        assert!(Direction::new(0.1, -0.1).is_err());
        let d = Direction::from_vector([0.0, -1.0, 0.0]).unwrap();
        assert!((d.theta() - PI / 2.0).abs() < 1e-15 && (d.phi() - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn projection_examples() {
        let spec = QuadratureSpec::default();
        let s = project_to_spinor(&SpinorField::alpha(CoverConvention::Single), &spec).unwrap();
        assert!(s.distance(&Spinor2::alpha()) < 1e-12);

        let target = Spinor2::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)).unwrap();
        let s = project_to_spinor(&target.to_field(CoverConvention::Single), &spec).unwrap();
        assert!(s.distance(&target) < 1e-12);

        let shifted = SpinorField::alpha(CoverConvention::Single).times_phase(1.0);
        let s = project_to_spinor(&shifted, &spec).unwrap();
        assert!(s.norm_sqr().sqrt() < 1e-12);
    }
}
