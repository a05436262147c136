use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Result, SpinError};
use crate::harmonics::{AnglePair, CoverConvention, SpinHarmonic};

/// A complex map of `(theta, phi)`. Implementations are expected to be
/// defined on the open interior `0 < theta < pi`; outside that range they may
/// return NaN.
pub type ScalarMap = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;

/// Analytic partial derivatives a field may carry. Any subset may be present;
/// operators fall back to central differences for the missing ones.
#[derive(Clone, Default)]
pub struct Partials {
    pub d_theta: Option<ScalarMap>,
    pub d2_theta: Option<ScalarMap>,
    pub d_phi: Option<ScalarMap>,
    pub d2_phi: Option<ScalarMap>,
}

impl Partials {
    fn is_complete(&self) -> bool {
        self.d_theta.is_some()
            && self.d2_theta.is_some()
            && self.d_phi.is_some()
            && self.d2_phi.is_some()
    }
}

/// Complex-valued function on the spin sphere with optional analytic partials.
#[derive(Clone)]
pub struct SpinorField {
    label: String,
    value: ScalarMap,
    partials: Partials,
}

impl fmt::Debug for SpinorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpinorField")
            .field("label", &self.label)
            .field("d_theta", &self.partials.d_theta.is_some())
            .field("d2_theta", &self.partials.d2_theta.is_some())
            .field("d_phi", &self.partials.d_phi.is_some())
            .field("d2_phi", &self.partials.d2_phi.is_some())
            .finish()
    }
}

impl SpinorField {
    /// A field known only through its values.
    pub fn new<F>(label: impl Into<String>, value: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            value: Arc::new(value),
            partials: Partials::default(),
        }
    }

    pub fn with_partials(mut self, partials: Partials) -> Self {
        self.partials = partials;
        self
    }

    /// Drops all analytic partials, forcing finite differences.
    pub fn without_partials(mut self) -> Self {
        self.partials = Partials::default();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn partials(&self) -> &Partials {
        &self.partials
    }

    pub fn has_complete_partials(&self) -> bool {
        self.partials.is_complete()
    }

    /// Raw evaluation; no domain checks.
    pub fn value(&self, theta: f64, phi: f64) -> Complex64 {
        (self.value)(theta, phi)
    }

    pub fn eval(&self, a: AnglePair) -> Complex64 {
        self.value(a.theta(), a.phi())
    }

    /// The harmonic as a field with all four analytic partials.
    pub fn from_harmonic(h: SpinHarmonic) -> Self {
        let label = match h.projection() {
            crate::harmonics::SpinProjection::Up => "alpha",
            crate::harmonics::SpinProjection::Down => "beta",
        };
        Self {
            label: label.to_string(),
            value: Arc::new(move |t, p| h.value_unchecked(t, p)),
            partials: Partials {
                d_theta: Some(Arc::new(move |t, p| h.d_theta_unchecked(t, p))),
                d2_theta: Some(Arc::new(move |t, p| h.d2_theta_unchecked(t, p))),
                d_phi: Some(Arc::new(move |t, p| h.d_phi_unchecked(t, p))),
                d2_phi: Some(Arc::new(move |t, p| h.d2_phi_unchecked(t, p))),
            },
        }
    }

    pub fn alpha(cover: CoverConvention) -> Self {
        Self::from_harmonic(SpinHarmonic::alpha(cover))
    }

    pub fn beta(cover: CoverConvention) -> Self {
        Self::from_harmonic(SpinHarmonic::beta(cover))
    }

    /// The constant function `c`, with zero partials.
    pub fn constant(c: Complex64) -> Self {
        let zero: ScalarMap = Arc::new(|_, _| Complex64::new(0.0, 0.0));
        Self {
            label: format!("const({c})"),
            value: Arc::new(move |_, _| c),
            partials: Partials {
                d_theta: Some(zero.clone()),
                d2_theta: Some(zero.clone()),
                d_phi: Some(zero.clone()),
                d2_phi: Some(zero),
            },
        }
    }

    /// `sum_k c_k f_k`. A partial is kept only when every term carries it.
    pub fn linear_combination(terms: &[(Complex64, &SpinorField)]) -> Self {
        let label = terms
            .iter()
            .map(|(c, f)| format!("({c})*{}", f.label))
            .collect::<Vec<_>>()
            .join(" + ");
        let owned: Vec<(Complex64, SpinorField)> =
            terms.iter().map(|(c, f)| (*c, (*f).clone())).collect();
        let owned = Arc::new(owned);

        let combine = |pick: fn(&Partials) -> Option<&ScalarMap>| -> Option<ScalarMap> {
            let maps: Option<Vec<(Complex64, ScalarMap)>> = owned
                .iter()
                .map(|(c, f)| pick(&f.partials).map(|m| (*c, m.clone())))
                .collect();
            maps.map(|maps| -> ScalarMap {
                Arc::new(move |t, p| maps.iter().map(|(c, m)| c * m(t, p)).sum())
            })
        };

        let partials = Partials {
            d_theta: combine(|p| p.d_theta.as_ref()),
            d2_theta: combine(|p| p.d2_theta.as_ref()),
            d_phi: combine(|p| p.d_phi.as_ref()),
            d2_phi: combine(|p| p.d2_phi.as_ref()),
        };
        let values = owned.clone();
        Self {
            label,
            value: Arc::new(move |t, p| values.iter().map(|(c, f)| c * f.value(t, p)).sum()),
            partials,
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::linear_combination(&[(c, self)])
    }

    /// `f(theta, phi) * exp(i k phi)`, shifting m by `k`.
    pub fn times_phase(&self, k: f64) -> Self {
        let f = self.clone();
        let e = move |p: f64| Complex64::from_polar(1.0, k * p);
        let ik = Complex64::new(0.0, k);

        let d_theta = f.partials.d_theta.clone().map(|d| -> ScalarMap {
            Arc::new(move |t, p| d(t, p) * e(p))
        });
        let d2_theta = f.partials.d2_theta.clone().map(|d| -> ScalarMap {
            Arc::new(move |t, p| d(t, p) * e(p))
        });
        let d_phi = f.partials.d_phi.clone().map(|d| -> ScalarMap {
            let v = f.value.clone();
            Arc::new(move |t, p| (d(t, p) + ik * v(t, p)) * e(p))
        });
        let d2_phi = match (&f.partials.d_phi, &f.partials.d2_phi) {
            (Some(d1), Some(d2)) => {
                let (d1, d2, v) = (d1.clone(), d2.clone(), f.value.clone());
                Some(Arc::new(move |t: f64, p: f64| {
                    (d2(t, p) + 2.0 * ik * d1(t, p) - k * k * v(t, p)) * e(p)
                }) as ScalarMap)
            }
            _ => None,
        };
        let v = f.value.clone();
        Self {
            label: format!("{}*exp(i*{k}*phi)", f.label),
            value: Arc::new(move |t, p| v(t, p) * e(p)),
            partials: Partials {
                d_theta,
                d2_theta,
                d_phi,
                d2_phi,
            },
        }
    }

    /// Cross-checks every analytic partial against a central difference of
    /// the next-lower derivative (value for first derivatives, the analytic
    /// first derivative for second derivatives).
    pub fn check_partials(&self, points: &[AnglePair], step: f64, rel_tol: f64) -> Result<PartialsCheck> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(SpinError::InvalidSettings(format!("step {step} must be positive")));
        }
        let mut worst = 0.0_f64;
        let mut checked = 0usize;
        for a in points {
            let (t, p) = (a.theta(), a.phi());
            if t - step <= 0.0 || t + step >= std::f64::consts::PI {
                return Err(SpinError::PoleProximity { theta: t, guard: step });
            }
            let v = self.value(t, p);
            let mut compare = |analytic: Complex64, fd: Complex64| {
                let scale = analytic.norm().max(fd.norm()).max(v.norm());
                let rel = if scale > 0.0 { (analytic - fd).norm() / scale } else { 0.0 };
                worst = worst.max(rel);
                checked += 1;
            };
            let central = |g: &dyn Fn(f64, f64) -> Complex64, along_theta: bool| {
                if along_theta {
                    (g(t + step, p) - g(t - step, p)) / (2.0 * step)
                } else {
                    (g(t, p + step) - g(t, p - step)) / (2.0 * step)
                }
            };
            let value = |t, p| self.value(t, p);
            if let Some(d) = &self.partials.d_theta {
                compare(d(t, p), central(&value, true));
                if let Some(d2) = &self.partials.d2_theta {
                    compare(d2(t, p), central(&|t, p| d(t, p), true));
                }
            }
            if let Some(d) = &self.partials.d_phi {
                compare(d(t, p), central(&value, false));
                if let Some(d2) = &self.partials.d2_phi {
                    compare(d2(t, p), central(&|t, p| d(t, p), false));
                }
            }
        }
        Ok(PartialsCheck {
            max_relative_error: worst,
            comparisons: checked,
            passed: worst <= rel_tol,
        })
    }
}

/// Outcome of [`SpinorField::check_partials`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialsCheck {
    pub max_relative_error: f64,
    pub comparisons: usize,
    pub passed: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn interior_points() -> Vec<AnglePair> {
        let mut pts = Vec::new();
        for i in 1..10 {
            for j in 0..7 {
                pts.push(AnglePair::new(PI * i as f64 / 10.0, -3.0 + j as f64).unwrap());
            }
        }
        pts
    }

    #[test]
    fn harmonic_partials_self_test() {
        for f in [SpinorField::alpha(CoverConvention::Single), SpinorField::beta(CoverConvention::Double)] {
            let r = f.check_partials(&interior_points(), 1e-5, 1e-7).unwrap();
            assert!(r.passed, "{r:?}");
            assert_eq!(r.comparisons, 63 * 4);
        }
    }

    #[test]
    fn shifted_and_combined_partials_self_test() {
        let a = SpinorField::alpha(CoverConvention::Single);
        let b = SpinorField::beta(CoverConvention::Single);
        let f = SpinorField::linear_combination(&[
            (Complex64::new(0.3, -0.2), &a.times_phase(1.0)),
            (Complex64::new(0.0, 1.1), &b),
        ]);
        assert!(f.has_complete_partials());
        let r = f.check_partials(&interior_points(), 1e-5, 1e-7).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn broken_partial_is_caught() {
        let a = SpinorField::alpha(CoverConvention::Single);
        let mut partials = a.partials().clone();
        partials.d_phi = Some(Arc::new(|_, _| Complex64::new(1.0, 0.0)));
        let bad = a.with_partials(partials);
        let r = bad.check_partials(&interior_points(), 1e-5, 1e-7).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn check_rejects_points_near_poles() {
        let a = SpinorField::alpha(CoverConvention::Single);
        let p = AnglePair::new(1e-6, 0.0).unwrap();
        assert!(matches!(
            a.check_partials(&[p], 1e-5, 1e-7),
            Err(SpinError::PoleProximity { .. })
        ));
    }

    #[test]
    fn partial_kept_only_when_all_terms_have_it() {
        let a = SpinorField::alpha(CoverConvention::Single);
        let raw = SpinorField::new("raw", |t: f64, _p: f64| Complex64::new(t.sin(), 0.0));
        let f = SpinorField::linear_combination(&[(Complex64::new(1.0, 0.0), &a), (Complex64::new(1.0, 0.0), &raw)]);
        assert!(f.partials().d_theta.is_none());
        assert!(!f.has_complete_partials());
        let v = f.value(1.0, 0.5);
        assert!((v - (a.value(1.0, 0.5) + 1.0_f64.sin())).norm() < 1e-16);
    }
}
