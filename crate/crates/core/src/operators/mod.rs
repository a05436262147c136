//! Angular-momentum differential operators on spinor fields (hbar = 1).
//!
//! ```text
//! S^2 f = -[ (1/sin t) d_t(sin t d_t f) + (1/sin^2 t) d_pp f ]
//! S_z f = -i d_p f
//! S_+ f = e^{+ip} ( d_t f + i cot t d_p f)
//! S_- f = e^{-ip} (-d_t f + i cot t d_p f)
//! ```
//!
//! Each partial is taken from the field's analytic partials when present and
//! from a central second-order difference otherwise.

mod field;

use std::f64::consts::PI;


use num_complex::Complex64;
use serde::Serialize;

pub use field::{Partials, PartialsCheck, ScalarMap, SpinorField};

use crate::error::{Result, SpinError};
use crate::harmonics::{AnglePair, CoverConvention};
use crate::quadrature::{full_inner_product, QuadratureSpec};

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-4;
/// Default half-width of the excluded band around each pole.
pub const DEFAULT_POLE_GUARD: f64 = 1e-6;
/// Default distance from each pole of the pointwise residual grid.
pub const DEFAULT_RESIDUAL_MARGIN: f64 = 0.15;

/// Which derivative source the operators use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeChannel {
    /// Analytic partials where the field provides them, differences otherwise.
    #[default]
    Analytic,
    /// Central differences for every partial.
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSettings {
    pub fd_step: f64,
    pub pole_guard: f64,
    pub channel: DerivativeChannel,
}

impl Default for OperatorSettings {
    fn default() -> Self {
        Self {
            fd_step: DEFAULT_FD_STEP,
            pole_guard: DEFAULT_POLE_GUARD,
            channel: DerivativeChannel::Analytic,
        }
    }
}

impl OperatorSettings {
    pub fn finite_difference(fd_step: f64) -> Self {
        Self { fd_step, channel: DerivativeChannel::FiniteDifference, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fd_step.is_finite() && self.fd_step > 0.0 && self.fd_step < 1.0) {
            return Err(SpinError::InvalidSettings(format!(
                "fd_step {} must lie in (0, 1)",
                self.fd_step
            )));
        }
        if !(self.pole_guard.is_finite() && self.pole_guard >= 0.0 && self.pole_guard < PI / 2.0) {
            return Err(SpinError::InvalidSettings(format!(
                "pole_guard {} must lie in [0, pi/2)",
                self.pole_guard
            )));
        }
        Ok(())
    }
}

/// Operators whose eigen-residuals can be measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpinOperator {
    S2,
    Sz,
    SPlus,
    SMinus,
}

impl SpinOperator {
    pub fn apply(self, f: &SpinorField, a: AnglePair, settings: &OperatorSettings) -> Result<Complex64> {
        match self {
            SpinOperator::S2 => apply_s2(f, a, settings),
            SpinOperator::Sz => apply_sz(f, a, settings),
            SpinOperator::SPlus => apply_splus(f, a, settings),
            SpinOperator::SMinus => apply_sminus(f, a, settings),
        }
    }

    /// `O f` as a new field. Points where the operator fails evaluate to NaN,
    /// which quadrature rejects.
    pub fn field(self, f: &SpinorField, settings: OperatorSettings) -> SpinorField {
        let src = f.clone();
        let label = format!("{self:?}[{}]", f.label());
        SpinorField::new(label, move |t, p| match AnglePair::new(t, p) {
            Ok(a) => self.apply(&src, a, &settings).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        })
    }
}

struct Derivs<'a> {
    f: &'a SpinorField,
    theta: f64,
    phi: f64,
    settings: &'a OperatorSettings,
}

impl<'a> Derivs<'a> {
    fn new(f: &'a SpinorField, a: AnglePair, settings: &'a OperatorSettings) -> Result<Self> {
        settings.validate()?;
        let theta = a.theta();
        let guard = settings.pole_guard;
        if theta <= guard || theta >= PI - guard {
            return Err(SpinError::PoleProximity { theta, guard });
        }
        Ok(Self { f, theta, phi: a.phi(), settings })
    }

    fn analytic(&self, pick: fn(&Partials) -> Option<&ScalarMap>) -> Option<&ScalarMap> {
        match self.settings.channel {
            DerivativeChannel::Analytic => pick(self.f.partials()),
            DerivativeChannel::FiniteDifference => None,
        }
    }

    fn theta_stencil(&self) -> Result<(Complex64, Complex64, Complex64)> {
        let h = self.settings.fd_step;
        if self.theta - h < 0.0 || self.theta + h > PI {
            return Err(SpinError::PoleProximity { theta: self.theta, guard: h });
        }
        Ok((
            self.f.value(self.theta - h, self.phi),
            self.f.value(self.theta, self.phi),
            self.f.value(self.theta + h, self.phi),
        ))
    }

    fn phi_stencil(&self) -> (Complex64, Complex64, Complex64) {
        let h = self.settings.fd_step;
        (
            self.f.value(self.theta, self.phi - h),
            self.f.value(self.theta, self.phi),
            self.f.value(self.theta, self.phi + h),
        )
    }

    fn d_theta(&self) -> Result<Complex64> {
        if let Some(d) = self.analytic(|p| p.d_theta.as_ref()) {
            return Ok(d(self.theta, self.phi));
        }
        let (m, _, p) = self.theta_stencil()?;
        Ok((p - m) / (2.0 * self.settings.fd_step))
    }

    fn d2_theta(&self) -> Result<Complex64> {
        if let Some(d) = self.analytic(|p| p.d2_theta.as_ref()) {
            return Ok(d(self.theta, self.phi));
        }
        let h = self.settings.fd_step;
        let (m, c, p) = self.theta_stencil()?;
        Ok((p - 2.0 * c + m) / (h * h))
    }

    fn d_phi(&self) -> Complex64 {
        if let Some(d) = self.analytic(|p| p.d_phi.as_ref()) {
            return d(self.theta, self.phi);
        }
        let (m, _, p) = self.phi_stencil();
        (p - m) / (2.0 * self.settings.fd_step)
    }

    fn d2_phi(&self) -> Complex64 {
        if let Some(d) = self.analytic(|p| p.d2_phi.as_ref()) {
            return d(self.theta, self.phi);
        }
        let h = self.settings.fd_step;
        let (m, c, p) = self.phi_stencil();
        (p - 2.0 * c + m) / (h * h)
    }
}

pub fn apply_s2(f: &SpinorField, a: AnglePair, settings: &OperatorSettings) -> Result<Complex64> {
    let d = Derivs::new(f, a, settings)?;
    let (s, c) = d.theta.sin_cos();
    let polar = d.d2_theta()? + d.d_theta()? * (c / s);
    let azimuthal = d.d2_phi() / (s * s);
    Ok(-(polar + azimuthal))
}

pub fn apply_sz(f: &SpinorField, a: AnglePair, settings: &OperatorSettings) -> Result<Complex64> {
    let d = Derivs::new(f, a, settings)?;
    Ok(Complex64::new(0.0, -1.0) * d.d_phi())
}

pub fn apply_splus(f: &SpinorField, a: AnglePair, settings: &OperatorSettings) -> Result<Complex64> {
    ladder(f, a, settings, 1.0)
}

pub fn apply_sminus(f: &SpinorField, a: AnglePair, settings: &OperatorSettings) -> Result<Complex64> {
    ladder(f, a, settings, -1.0)
}

fn ladder(f: &SpinorField, a: AnglePair, settings: &OperatorSettings, sign: f64) -> Result<Complex64> {
    let d = Derivs::new(f, a, settings)?;
    let cot = d.theta.cos() / d.theta.sin();
    let inner = d.d_theta()? * sign + Complex64::new(0.0, cot) * d.d_phi();
    Ok(Complex64::from_polar(1.0, sign * d.phi) * inner)
}

/// Uniform tensor grid for pointwise residuals: `n_theta` points spanning
/// `[margin, pi - margin]` and `n_phi` points over one period of the cover.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    pub theta_margin: f64,
    pub cover: CoverConvention,
}

impl ResidualGrid {
    pub fn from_spec(spec: &QuadratureSpec) -> Self {
        Self {
            n_theta: spec.n_theta(),
            n_phi: spec.n_phi(),
            theta_margin: DEFAULT_RESIDUAL_MARGIN,
            cover: spec.cover(),
        }
    }

    pub fn points(&self) -> Vec<AnglePair> {
        let span = PI - 2.0 * self.theta_margin;
        let dt = span / (self.n_theta.max(2) - 1) as f64;
        let dp = self.cover.period() / self.n_phi as f64;
        let mut pts = Vec::with_capacity(self.n_theta * self.n_phi);
        for i in 0..self.n_theta {
            let t = self.theta_margin + dt * i as f64;
            for j in 0..self.n_phi {
                pts.push(AnglePair::new(t, dp * j as f64).expect("grid inside [0, pi]"));
            }
        }
        pts
    }
}

/// Eigenvalue check of one operator on one field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorResidual {
    pub operator: SpinOperator,
    /// `<f|O f> / <f|f>` on the quadrature grid.
    pub rayleigh_quotient: Complex64,
    /// `max |O f - lambda f|` over the residual grid.
    pub max_pointwise_residual: f64,
    pub grid_spec: QuadratureSpec,
    pub residual_grid: ResidualGrid,
    pub lambda_ref: f64,
}

pub fn eigen_residual(
    op: SpinOperator,
    f: &SpinorField,
    lambda_ref: f64,
    grid: &QuadratureSpec,
    settings: &OperatorSettings,
) -> Result<OperatorResidual> {
    eigen_residual_on(op, f, lambda_ref, grid, &ResidualGrid::from_spec(grid), settings)
}

/// As [`eigen_residual`], with an explicit pointwise grid.
pub fn eigen_residual_on(
    op: SpinOperator,
    f: &SpinorField,
    lambda_ref: f64,
    grid: &QuadratureSpec,
    residual_grid: &ResidualGrid,
    settings: &OperatorSettings,
) -> Result<OperatorResidual> {
    settings.validate()?;
    let mut worst = 0.0_f64;
    for a in residual_grid.points() {
        let r = (op.apply(f, a, settings)? - f.eval(a) * lambda_ref).norm();
        if !r.is_finite() {
            return Err(SpinError::NonFiniteNode { theta: a.theta(), phi: a.phi() });
        }
        worst = worst.max(r);
    }
    let of = op.field(f, *settings);
    let num = full_inner_product(f, &of, grid)?;
    let den = full_inner_product(f, f, grid)?;
    Ok(OperatorResidual {
        operator: op,
        rayleigh_quotient: num / den,
        max_pointwise_residual: worst,
        grid_spec: *grid,
        residual_grid: *residual_grid,
        lambda_ref,
    })
}

/// How far the differential raising operator is from mapping beta onto alpha.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderDefect {
    /// `||S_+ beta||`
    pub norm_of_splus_beta: f64,
    /// `<alpha|S_+ beta>`
    pub overlap_with_alpha: Complex64,
    /// `||S_+ beta - alpha||`
    pub defect_norm: f64,
}

/// Measures `S_+ beta` against the abstract relation `S_+ beta = alpha`
/// using the quadrature spec's cover and measure.
pub fn ladder_defect(spec: &QuadratureSpec, settings: &OperatorSettings) -> Result<LadderDefect> {
    settings.validate()?;
    let alpha = SpinorField::alpha(spec.cover());
    let beta = SpinorField::beta(spec.cover());
    let raised = SpinOperator::SPlus.field(&beta, *settings);
    let norm_sq = full_inner_product(&raised, &raised, spec)?;
    let overlap = full_inner_product(&alpha, &raised, spec)?;
    let one = Complex64::new(1.0, 0.0);
    let diff = SpinorField::linear_combination(&[(one, &raised), (-one, &alpha)]);
    let diff_sq = full_inner_product(&diff, &diff, spec)?;
    Ok(LadderDefect {
        norm_of_splus_beta: norm_sq.re.max(0.0).sqrt(),
        overlap_with_alpha: overlap,
        defect_norm: diff_sq.re.max(0.0).sqrt(),
    })
}

/// Closed form of `S_+ beta` on the single cover:
/// `cos t / (pi sqrt(sin t)) * exp(i p / 2)`.
pub fn splus_beta_closed_form(cover: CoverConvention) -> SpinorField {
    let c = cover.norm_constant();
    SpinorField::new("S+beta(closed)", move |t: f64, p: f64| {
        Complex64::from_polar(c * t.cos() / t.sin().sqrt(), 0.5 * p)
    })
}
