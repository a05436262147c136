//! Tensor-product quadrature over the spin sphere.
//!
//! Theta uses Gauss-Legendre nodes mapped from `[-1, 1]` to `[0, pi]` (nodes
//! never land on a pole); phi uses the periodic trapezoid rule over one
//! period of the chosen cover, which is exact for `exp(i k phi)` whenever
//! `|k| < n_phi` in units of the base frequency.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::harmonics::CoverConvention;
use crate::operators::SpinorField;

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes via Newton iteration on `P_n` from Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(SpinError::InvalidSpec("Gauss-Legendre needs n >= 1".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights for `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nodes = self.nodes.iter().map(|x| mid + half * x).collect();
        let weights = self.weights.iter().map(|w| half * w).collect();
        (nodes, weights)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Node counts and cover convention for angle integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    n_theta: usize,
    n_phi: usize,
    cover: CoverConvention,
}

impl QuadratureSpec {
    pub fn new(n_theta: usize, n_phi: usize, cover: CoverConvention) -> Result<Self> {
        if n_theta < 4 {
            return Err(SpinError::InvalidSpec(format!("n_theta = {n_theta} must be >= 4")));
        }
        if n_phi < 4 || !n_phi.is_multiple_of(2) {
            return Err(SpinError::InvalidSpec(format!(
                "n_phi = {n_phi} must be even and >= 4"
            )));
        }
        Ok(Self { n_theta, n_phi, cover })
    }

    /// Per-electron default for two-electron integrals: 32 x 16.
    pub fn four_angle_default() -> Self {
        Self { n_theta: 32, n_phi: 16, cover: CoverConvention::Single }
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn cover(&self) -> CoverConvention {
        self.cover
    }

    pub fn with_cover(self, cover: CoverConvention) -> Self {
        Self { cover, ..self }
    }

    /// Same rule with both node counts doubled.
    pub fn refined(self) -> Self {
        Self { n_theta: 2 * self.n_theta, n_phi: 2 * self.n_phi, cover: self.cover }
    }

    pub fn grid(&self) -> AngleGrid {
        AngleGrid::new(self)
    }
}

impl Default for QuadratureSpec {
    /// 64 x 64 on the single cover.
    fn default() -> Self {
        Self { n_theta: 64, n_phi: 64, cover: CoverConvention::Single }
    }
}

/// Materialized nodes and weights of a [`QuadratureSpec`]. Theta weights
/// include the `sin theta` measure factor.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrid {
    pub thetas: Vec<f64>,
    /// Gauss-Legendre weights times `sin theta`.
    pub theta_weights: Vec<f64>,
    pub phis: Vec<f64>,
    pub phi_weight: f64,
}

impl AngleGrid {
    fn new(spec: &QuadratureSpec) -> Self {
        let rule = GaussLegendre::new(spec.n_theta).expect("validated spec");
        let (thetas, w) = rule.mapped(0.0, PI);
        let theta_weights = thetas.iter().zip(&w).map(|(t, w)| w * t.sin()).collect();
        let period = spec.cover.period();
        let h = period / spec.n_phi as f64;
        let phis = (0..spec.n_phi).map(|j| j as f64 * h).collect();
        Self { thetas, theta_weights, phis, phi_weight: h }
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, &mut self.re_c, z.re);
        neumaier(&mut self.im, &mut self.im_c, z.im);
    }

    pub fn total(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

fn finite(z: Complex64, theta: f64, phi: f64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(SpinError::NonFiniteNode { theta, phi })
    }
}

/// `integral of h(theta, phi) sin theta dtheta dphi` over the spec's domain.
pub fn integrate_sphere<H>(h: H, spec: &QuadratureSpec) -> Result<Complex64>
where
    H: Fn(f64, f64) -> Complex64,
{
    let grid = spec.grid();
    let mut acc = CompensatedSum::default();
    for (&t, &wt) in grid.thetas.iter().zip(&grid.theta_weights) {
        let mut row = CompensatedSum::default();
        for &p in &grid.phis {
            row.add(finite(h(t, p), t, p)?);
        }
        acc.add(row.total() * (wt * grid.phi_weight));
    }
    Ok(acc.total())
}

/// `<f|g>` with the `sin theta` measure over `[0, pi] x [0, period)`.
pub fn full_inner_product(f: &SpinorField, g: &SpinorField, spec: &QuadratureSpec) -> Result<Complex64> {
    integrate_sphere(|t, p| f.value(t, p).conj() * g.value(t, p), spec)
}

/// `integral of f* g dphi` at fixed theta, without the `sin theta` weight.
pub fn phi_inner_product(
    f: &SpinorField,
    g: &SpinorField,
    theta: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(SpinError::ThetaOutOfRange { theta });
    }
    let grid = spec.grid();
    let mut acc = CompensatedSum::default();
    for &p in &grid.phis {
        acc.add(finite(f.value(theta, p).conj() * g.value(theta, p), theta, p)?);
    }
    Ok(acc.total() * grid.phi_weight)
}

/// `<F|G>` over both electrons' angles with weight `sin theta_1 sin theta_2`,
/// using the same rule for each electron. Rows in `theta_1` are evaluated in
/// parallel and combined in index order, so results do not depend on
/// scheduling.
pub fn four_angle_inner_product<F, G>(f: F, g: G, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(f64, f64, f64, f64) -> Complex64 + Sync,
    G: Fn(f64, f64, f64, f64) -> Complex64 + Sync,
{
    let grid = spec.grid();
    let rows: Vec<Result<Complex64>> = grid
        .thetas
        .par_iter()
        .zip(grid.theta_weights.par_iter())
        .map(|(&t1, &w1)| {
            let mut row = CompensatedSum::default();
            for &p1 in &grid.phis {
                for (&t2, &w2) in grid.thetas.iter().zip(&grid.theta_weights) {
                    let mut inner = CompensatedSum::default();
                    for &p2 in &grid.phis {
                        let z = f(t1, p1, t2, p2).conj() * g(t1, p1, t2, p2);
                        if !(z.re.is_finite() && z.im.is_finite()) {
                            return Err(SpinError::NonFiniteNode { theta: t1, phi: p1 });
                        }
                        inner.add(z);
                    }
                    row.add(inner.total() * w2);
                }
            }
            Ok(row.total() * w1)
        })
        .collect();
    let mut acc = CompensatedSum::default();
    for r in rows {
        acc.add(r?);
    }
    Ok(acc.total() * (grid.phi_weight * grid.phi_weight))
}

/// One term `coeff * first(electron 1) * second(electron 2)` of a separable
/// two-electron function.
#[derive(Debug, Clone)]
pub struct ProductTerm {
    pub coeff: Complex64,
    pub first: SpinorField,
    pub second: SpinorField,
}

/// Four-angle inner product of two sums of product terms, computed from
/// single-electron integrals: `sum conj(c_k) d_l <f_k|g_l>_1 <f'_k|g'_l>_2`.
pub fn factored_four_angle_inner_product(
    f: &[ProductTerm],
    g: &[ProductTerm],
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let mut acc = CompensatedSum::default();
    for a in f {
        for b in g {
            let first = full_inner_product(&a.first, &b.first, spec)?;
            let second = full_inner_product(&a.second, &b.second, spec)?;
            acc.add(a.coeff.conj() * b.coeff * first * second);
        }
    }
    Ok(acc.total())
}
