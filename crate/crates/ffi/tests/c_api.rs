use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI, SQRT_2};
use std::ffi::c_char;
use std::ptr;

use spincoord_ffi::*;

const SINGLE: i32 = 0;
const DOUBLE: i32 = 1;
const ALPHA: i32 = 0;
const BETA: i32 = 1;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let n = unsafe { sc_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(255)].iter().map(|&b| b as u8).collect();
    String::from_utf8(bytes).unwrap()
}

fn c(re: f64, im: f64) -> ScComplex {
    ScComplex { re, im }
}

#[test]
fn harmonic_values_match_reference_points() {
    let mut z = ScComplex::default();
    assert_eq!(unsafe { sc_harmonic_eval(BETA, SINGLE, FRAC_PI_6, PI, &mut z) }, ScStatus::Ok);
    assert!(z.re.abs() <= 1e-15 && (z.im + 0.2250790790392765).abs() <= 1e-15);

    assert_eq!(unsafe { sc_harmonic_eval(ALPHA, SINGLE, 1.234, 0.567, &mut z) }, ScStatus::Ok);
    assert!((z.re - 0.296_894_922_658_605).abs() <= 1e-15);
    assert!((z.im - 0.086_499_612_811_680_4).abs() <= 1e-15);

    let mut d = 0.0;
    assert_eq!(unsafe { sc_harmonic_density(ALPHA, DOUBLE, FRAC_PI_2, 3.0, &mut d) }, ScStatus::Ok);
    assert!((d - 1.0 / (2.0 * PI * PI)).abs() <= 1e-16);
}

#[test]
fn bad_inputs_report_status_and_message() {
    let mut z = ScComplex::default();
    assert_eq!(unsafe { sc_harmonic_eval(ALPHA, SINGLE, 4.0, 0.0, &mut z) }, ScStatus::Domain);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { sc_harmonic_eval(ALPHA, SINGLE, 1.0, f64::NAN, &mut z) }, ScStatus::NonFinite);
    assert_eq!(unsafe { sc_harmonic_eval(ALPHA, 7, 1.0, 0.0, &mut z) }, ScStatus::InvalidArgument);
    assert_eq!(unsafe { sc_harmonic_eval(2, SINGLE, 1.0, 0.0, &mut z) }, ScStatus::InvalidArgument);
    assert_eq!(
        unsafe { sc_harmonic_eval(ALPHA, SINGLE, 1.0, 0.0, ptr::null_mut()) },
        ScStatus::NullPointer
    );
    assert_eq!(unsafe { sc_harmonic_eval(ALPHA, SINGLE, 1.0, 0.0, &mut z) }, ScStatus::Ok);
    assert_eq!(last_error(), "");

    let mut d = ScLadderDefect::default();
    assert_eq!(unsafe { sc_ladder_defect(64, 63, SINGLE, &mut d) }, ScStatus::InvalidSpec);
    assert!(sc_field_harmonic(ALPHA, 5).is_null());
}

#[test]
fn error_message_truncates_to_buffer() {
    let mut z = ScComplex::default();
    unsafe { sc_harmonic_eval(ALPHA, SINGLE, -1.0, 0.0, &mut z) };
    let mut buf = [0x7f as c_char; 4];
    let n = unsafe { sc_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 3);
    assert_eq!(buf[3], 0);
    assert_eq!(unsafe { sc_last_error_message(ptr::null_mut(), 0) }, n);
}

#[test]
fn operators_through_handles() {
    let alpha = sc_field_harmonic(ALPHA, SINGLE);
    let beta = sc_field_harmonic(BETA, SINGLE);
    assert!(!alpha.is_null() && !beta.is_null());
    let (t, p) = (FRAC_PI_3, 1.0);
    let mut a = ScComplex::default();
    let mut out = ScComplex::default();
    unsafe {
        sc_field_eval(alpha, t, p, &mut a);
        assert_eq!(sc_apply_operator(0, alpha, t, p, 0.0, &mut out), ScStatus::Ok);
        assert!((out.re - 0.75 * a.re).abs() <= 1e-12 && (out.im - 0.75 * a.im).abs() <= 1e-12);
        assert_eq!(sc_apply_operator(1, alpha, t, p, 1e-4, &mut out), ScStatus::Ok);
        assert!((out.re - 0.5 * a.re).abs() <= 1e-6 && (out.im - 0.5 * a.im).abs() <= 1e-6);
        assert_eq!(sc_apply_operator(2, beta, t, p, 0.0, &mut out), ScStatus::Ok);
        assert!((out.re - 0.15008690458683516).abs() <= 1e-14);
        assert!((out.im - 0.08199284966873546).abs() <= 1e-14);
        assert_eq!(sc_apply_operator(2, alpha, t, p, 0.0, &mut out), ScStatus::Ok);
        assert!(out.re.abs() <= 1e-14 && out.im.abs() <= 1e-14);
        assert_eq!(sc_apply_operator(9, alpha, t, p, 0.0, &mut out), ScStatus::InvalidArgument);
        assert_eq!(sc_apply_operator(0, alpha, 5e-5, p, 1e-4, &mut out), ScStatus::PoleProximity);
        sc_field_free(alpha);
        sc_field_free(beta);
        sc_field_free(ptr::null_mut());
    }
}

#[test]
fn inner_products_and_projection() {
    let alpha = sc_field_harmonic(ALPHA, SINGLE);
    let beta = sc_field_harmonic(BETA, SINGLE);
    let mix = unsafe { sc_field_combine(c(0.6, 0.0), alpha, c(0.0, 0.8), beta) };
    assert!(!mix.is_null());
    let mut z = ScComplex::default();
    let mut s = ScSpinor::default();
    unsafe {
        assert_eq!(sc_full_inner_product(alpha, alpha, 64, 64, SINGLE, &mut z), ScStatus::Ok);
        assert!((z.re - 1.0).abs() <= 1e-12 && z.im.abs() <= 1e-12);
        assert_eq!(sc_full_inner_product(alpha, beta, 64, 64, SINGLE, &mut z), ScStatus::Ok);
        assert!(z.re.hypot(z.im) <= 1e-14);
        assert_eq!(sc_phi_inner_product(alpha, beta, 1.0, 64, SINGLE, &mut z), ScStatus::Ok);
        assert!(z.re.hypot(z.im) <= 1e-14);
        assert_eq!(sc_project_to_spinor(mix, 64, 64, SINGLE, &mut s), ScStatus::Ok);
        assert!((s.c_alpha.re - 0.6).abs() <= 1e-12 && (s.c_beta.im - 0.8).abs() <= 1e-12);
        assert_eq!(
            sc_full_inner_product(alpha, ptr::null(), 64, 64, SINGLE, &mut z),
            ScStatus::NullPointer
        );
        assert!(sc_field_combine(c(1.0, 0.0), alpha, c(1.0, 0.0), ptr::null()).is_null());
        sc_field_free(mix);
        sc_field_free(alpha);
        sc_field_free(beta);
    }
}

#[test]
fn spinor_field_round_trip() {
    let spinor = ScSpinor { c_alpha: c(0.0, SQRT_2 / 2.0), c_beta: c(-SQRT_2 / 2.0, 0.0) };
    let f = sc_field_from_spinor(spinor, DOUBLE);
    assert!(!f.is_null());
    let mut s = ScSpinor::default();
    unsafe {
        assert_eq!(sc_project_to_spinor(f, 64, 64, DOUBLE, &mut s), ScStatus::Ok);
        sc_field_free(f);
    }
    assert!((s.c_alpha.im - SQRT_2 / 2.0).abs() <= 1e-12);
    assert!((s.c_beta.re + SQRT_2 / 2.0).abs() <= 1e-12);
}

#[test]
fn ladder_defect_values() {
    let mut d = ScLadderDefect::default();
    assert_eq!(unsafe { sc_ladder_defect(64, 64, SINGLE, &mut d) }, ScStatus::Ok);
    assert!((d.norm_of_splus_beta - 1.0).abs() <= 1e-8);
    assert!(d.overlap_with_alpha.re.hypot(d.overlap_with_alpha.im) <= 1e-8);
    assert!((d.defect_norm - SQRT_2).abs() <= 1e-8);
}

#[test]
fn singlet_correlations() {
    let st = sc_state_singlet();
    let mut e = 0.0;
    unsafe {
        assert_eq!(sc_epr_correlation(st, 0.0, 0.0, FRAC_PI_3, 0.0, 0, 32, 16, SINGLE, &mut e), ScStatus::Ok);
        assert!((e + 0.5).abs() <= 1e-12);
        assert_eq!(sc_epr_correlation(st, 0.3, 1.0, 2.0, 4.0, 1, 32, 16, SINGLE, &mut e), ScStatus::Ok);
        let mut o = 0.0;
        sc_epr_correlation(st, 0.3, 1.0, 2.0, 4.0, 0, 32, 16, SINGLE, &mut o);
        assert!((e - o).abs() <= 1e-6);
        assert_eq!(sc_epr_correlation(st, 0.0, 0.0, 0.0, 7.0, 0, 32, 16, SINGLE, &mut e), ScStatus::Domain);
        assert_eq!(
            sc_epr_correlation(st, 0.0, 0.0, 0.0, 0.0, 3, 32, 16, SINGLE, &mut e),
            ScStatus::InvalidArgument
        );

        let mut pts = vec![ScCorrelationPoint::default(); 5];
        assert_eq!(sc_correlation_curve(st, 5, 32, 16, SINGLE, pts.as_mut_ptr(), 5), ScStatus::Ok);
        for (k, p) in pts.iter().enumerate() {
            assert!((p.angle - PI * k as f64 / 4.0).abs() <= 1e-15);
            assert!((p.e_oracle + p.angle.cos()).abs() <= 1e-12);
            assert!(p.abs_diff <= 1e-6);
        }
        assert_eq!(
            sc_correlation_curve(st, 6, 32, 16, SINGLE, pts.as_mut_ptr(), 5),
            ScStatus::BufferTooSmall
        );
        sc_state_free(st);
    }
}

#[test]
fn product_state_needs_normalized_factors() {
    let up = ScSpinor { c_alpha: c(1.0, 0.0), c_beta: c(0.0, 0.0) };
    let down = ScSpinor { c_alpha: c(0.0, 0.0), c_beta: c(1.0, 0.0) };
    let st = sc_state_product(up, down);
    assert!(!st.is_null());
    let mut e = 0.0;
    unsafe {
        assert_eq!(sc_epr_correlation(st, 0.0, 0.0, 0.0, 0.0, 0, 32, 16, SINGLE, &mut e), ScStatus::Ok);
        sc_state_free(st);
    }
    assert!((e + 1.0).abs() <= 1e-12);
    let mut s = ScSpinor::default();
    assert_eq!(unsafe { sc_bloch_state(FRAC_PI_2, 0.0, &mut s) }, ScStatus::Ok);
    assert!((s.c_alpha.re - SQRT_2 / 2.0).abs() <= 1e-15 && (s.c_beta.re - SQRT_2 / 2.0).abs() <= 1e-15);
    let bad = ScSpinor { c_alpha: c(2.0, 0.0), c_beta: c(0.0, 0.0) };
    assert!(sc_state_product(bad, down).is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/spincoord.h")).unwrap();
    for name in [
        "sc_last_error_message",
        "sc_harmonic_eval",
        "sc_harmonic_density",
        "sc_field_harmonic",
        "sc_field_from_spinor",
        "sc_field_combine",
        "sc_field_free",
        "sc_field_eval",
        "sc_apply_operator",
        "sc_full_inner_product",
        "sc_phi_inner_product",
        "sc_project_to_spinor",
        "sc_bloch_state",
        "sc_ladder_defect",
        "sc_state_singlet",
        "sc_state_product",
        "sc_state_free",
        "sc_epr_correlation",
        "sc_correlation_curve",
        "typedef struct ScField ScField;",
        "typedef struct ScState ScState;",
        "SC_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
