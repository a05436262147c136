use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;

use spincoord::entangle::{epr_correlation, singlet, CorrelationChannel};
use spincoord::operators::{apply_s2, apply_sz, ladder_defect, OperatorSettings, SpinOperator};
use spincoord::pauli::{bloch_state, Direction, SpinMatrix};
use spincoord::quadrature::full_inner_product;
use spincoord::{AnglePair, CoverConvention, QuadratureSpec, SpinHarmonic, SpinorField};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit_disk() -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..TAU).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

fn harmonic() -> impl Strategy<Value = SpinHarmonic> {
    (any::<bool>(), any::<bool>()).prop_map(|(up, single)| {
        let cover = if single { CoverConvention::Single } else { CoverConvention::Double };
        if up {
            SpinHarmonic::alpha(cover)
        } else {
            SpinHarmonic::beta(cover)
        }
    })
}

fn direction() -> impl Strategy<Value = Direction> {
    (0.0..=PI, 0.0..TAU).prop_map(|(t, p)| Direction::new(t, p).unwrap())
}

proptest! {
    #[test]
    fn one_turn_flips_sign(h in harmonic(), t in 1e-3..(PI - 1e-3), p in -20.0..20.0f64) {
        let a = AnglePair::new(t, p).unwrap();
        let (y, y1) = (h.eval(a), h.eval(a.wound(1)));
        prop_assert!((y1 + y).norm() <= 1e-14 * y.norm().max(1e-300) * (1.0 + p.abs()));
        let y2 = h.eval(a.wound(2));
        prop_assert!((y2 - y).norm() <= 1e-14 * y.norm() * (1.0 + p.abs()));
    }

    #[test]
    fn density_is_modulus_squared_and_phi_free(h in harmonic(), t in 0.0..=PI, p in -20.0..20.0f64) {
        let a = AnglePair::new(t, p).unwrap();
        prop_assert!((h.eval(a).norm_sqr() - h.density(a)).abs() <= 1e-15);
        prop_assert_eq!(h.density(a), h.density(AnglePair::new(t, 0.0).unwrap()));
        let other = SpinHarmonic::new(
            match h.projection() {
                spincoord::SpinProjection::Up => spincoord::SpinProjection::Down,
                spincoord::SpinProjection::Down => spincoord::SpinProjection::Up,
            },
            h.cover(),
        );
        prop_assert_eq!(h.density(a), other.density(a));
    }

    #[test]
    fn s2_is_linear(c1 in unit_disk(), c2 in unit_disk(), t in 0.05..(PI - 0.05), p in -7.0..7.0f64) {
        let s = OperatorSettings::default();
        let f = SpinorField::alpha(CoverConvention::Single);
        let g = SpinorField::beta(CoverConvention::Single).times_phase(1.0);
        let h = SpinorField::linear_combination(&[(c1, &f), (c2, &g)]);
        let a = AnglePair::new(t, p).unwrap();
        let lhs = apply_s2(&h, a, &s).unwrap();
        let rhs = c1 * apply_s2(&f, a, &s).unwrap() + c2 * apply_s2(&g, a, &s).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10);
    }

    #[test]
    fn bloch_state_is_plus_half_eigenvector(d in direction()) {
        let s = bloch_state(d);
        prop_assert!(s.is_normalized());
        prop_assert!(s.c_alpha.im == 0.0 && s.c_alpha.re >= 0.0);
        let r = SpinMatrix::along(d).apply(&s).distance(&(s * c(0.5, 0.0)));
        prop_assert!(r <= 1e-14);
    }

    #[test]
    fn singlet_correlation_is_symmetric(a in direction(), b in direction()) {
        let spec = QuadratureSpec::four_angle_default();
        let e = |x, y| epr_correlation(&singlet(), x, y, CorrelationChannel::Oracle, &spec).unwrap();
        prop_assert!((e(a, b) - e(b, a)).abs() <= 1e-12);
        prop_assert!(e(a, b).abs() <= 1.0 + 1e-9);
        prop_assert!((e(a, b) + a.angle_to(&b).cos()).abs() <= 1e-12);
    }

    #[test]
    fn inner_product_is_sesquilinear(c1 in unit_disk(), c2 in unit_disk(), d1 in unit_disk()) {
        let spec = QuadratureSpec::new(16, 8, CoverConvention::Single).unwrap();
        let a = SpinorField::alpha(CoverConvention::Single);
        let b = SpinorField::beta(CoverConvention::Single);
        let shifted = a.times_phase(-1.0);
        let f = SpinorField::linear_combination(&[(c1, &a), (c2, &b)]);
        let g = SpinorField::linear_combination(&[(d1, &b), (c(1.0, 0.0), &shifted)]);
        let fg = full_inner_product(&f, &g, &spec).unwrap();
        let gf = full_inner_product(&g, &f, &spec).unwrap();
        prop_assert!((fg - gf.conj()).norm() <= 1e-14);
        let ip = |x: &SpinorField, y: &SpinorField| full_inner_product(x, y, &spec).unwrap();
        let expanded = c1.conj() * (d1 * ip(&a, &b) + ip(&a, &shifted))
            + c2.conj() * (d1 * ip(&b, &b) + ip(&b, &shifted));
        prop_assert!((fg - expanded).norm() <= 1e-12);
    }
}

#[test]
fn finite_differences_agree_with_analytic_partials() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let analytic = OperatorSettings::default();
    let fd = OperatorSettings::finite_difference(1e-4);
    for f in [SpinorField::alpha(CoverConvention::Single), SpinorField::beta(CoverConvention::Single)] {
        for _ in 0..1000 {
            let a = AnglePair::new(rng.gen_range(0.15..PI - 0.15), rng.gen_range(-TAU..TAU)).unwrap();
            let d = (apply_s2(&f, a, &fd).unwrap() - apply_s2(&f, a, &analytic).unwrap()).norm();
            assert!(d <= 1e-6, "{} at {a:?}: {d}", f.label());
        }
    }
}

#[test]
fn s2_is_hermitian_on_the_spin_space() {
    let spec = QuadratureSpec::default();
    let s = OperatorSettings::default();
    let a = SpinorField::alpha(CoverConvention::Single);
    let b = SpinorField::beta(CoverConvention::Single);
    let ab = SpinorField::linear_combination(&[(c(1.0, 0.0), &a), (c(1.0, 0.0), &b)]);
    let fields = [a, b, ab];
    for f in &fields {
        for g in &fields {
            let lhs = full_inner_product(f, &SpinOperator::S2.field(g, s), &spec).unwrap();
            let rhs = full_inner_product(&SpinOperator::S2.field(f, s), g, &spec).unwrap();
            assert!((lhs - rhs).norm() <= 1e-8, "{} {}: {lhs} vs {rhs}", f.label(), g.label());
        }
    }
}

#[test]
fn shifted_harmonic_has_m_three_halves() {
    let s = OperatorSettings::default();
    let f = SpinorField::alpha(CoverConvention::Single).times_phase(1.0);
    for i in 1..20 {
        let a = AnglePair::new(PI * i as f64 / 20.0, 0.37 * i as f64).unwrap();
        assert!((apply_sz(&f, a, &s).unwrap() - f.eval(a) * 1.5).norm() <= 1e-12);
    }
}

#[test]
fn normalization_error_shrinks_with_theta_nodes() {
    let a = SpinorField::alpha(CoverConvention::Single);
    let mut last = f64::INFINITY;
    for n in [8, 16, 32, 64] {
        let spec = QuadratureSpec::new(n, 4, CoverConvention::Single).unwrap();
        let err = (full_inner_product(&a, &a, &spec).unwrap() - 1.0).norm();
        assert!(err <= last, "n={n}: {err} > {last}");
        last = err;
    }
    assert!(last < 1e-14);
}

#[test]
fn covers_agree_with_their_own_constants() {
    let single = QuadratureSpec::default();
    let double = QuadratureSpec::new(64, 64, CoverConvention::Double).unwrap();
    let pairs = |cover| {
        let a = SpinorField::alpha(cover);
        let b = SpinorField::beta(cover);
        let mix = SpinorField::linear_combination(&[(c(0.3, 0.4), &a), (c(-0.5, 0.1), &b)]);
        vec![(a.clone(), a.clone()), (a, b.clone()), (b, mix.clone()), (mix.clone(), mix)]
    };
    for ((f1, g1), (f2, g2)) in pairs(CoverConvention::Single).iter().zip(pairs(CoverConvention::Double).iter()) {
        let s = full_inner_product(f1, g1, &single).unwrap();
        let d = full_inner_product(f2, g2, &double).unwrap();
        assert!((s - d).norm() <= 1e-12, "{s} vs {d}");
    }
}

#[test]
fn ladder_defect_is_grid_stable() {
    let s = OperatorSettings::default();
    let coarse = QuadratureSpec::default();
    let d1 = ladder_defect(&coarse, &s).unwrap();
    let d2 = ladder_defect(&coarse.refined(), &s).unwrap();
    assert!((d1.norm_of_splus_beta - d2.norm_of_splus_beta).abs() <= 1e-9);
    assert!((d1.overlap_with_alpha - d2.overlap_with_alpha).norm() <= 1e-9);
    assert!((d1.defect_norm - d2.defect_norm).abs() <= 1e-9);
}

/// Rodrigues rotation of `v` about the unit axis `k` by `angle`.
fn rotate(v: [f64; 3], k: [f64; 3], angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    let dot = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
    let cross = [k[1] * v[2] - k[2] * v[1], k[2] * v[0] - k[0] * v[2], k[0] * v[1] - k[1] * v[0]];
    std::array::from_fn(|i| v[i] * c + cross[i] * s + k[i] * dot * (1.0 - c))
}

#[test]
fn singlet_correlation_is_rotation_invariant() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let spec = QuadratureSpec::four_angle_default();
    let a = Direction::new(0.4, 1.0).unwrap();
    let b = Direction::new(2.2, 5.0).unwrap();
    let base = epr_correlation(&singlet(), a, b, CorrelationChannel::Oracle, &spec).unwrap();
    for _ in 0..20 {
        let axis = Direction::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU)).unwrap().unit_vector();
        let angle = rng.gen_range(0.0..TAU);
        let ra = Direction::from_vector(rotate(a.unit_vector(), axis, angle)).unwrap();
        let rb = Direction::from_vector(rotate(b.unit_vector(), axis, angle)).unwrap();
        let e = epr_correlation(&singlet(), ra, rb, CorrelationChannel::Oracle, &spec).unwrap();
        assert!((e - base).abs() <= 1e-9, "{e} vs {base}");
    }
}
