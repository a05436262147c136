//! C ABI for `spincoord`.
//!
//! Conventions:
//! - every fallible call returns an [`ScStatus`]; results go through out-pointers
//! - fields and two-electron states are opaque heap handles, released with
//!   `sc_field_free` / `sc_state_free`
//! - on failure a message is stored per thread; read it with
//!   `sc_last_error_message`
//! - `cover` is 0 for the single circle, 1 for the double circle
//! - `harmonic` is 0 for alpha (m = +1/2), 1 for beta (m = -1/2)

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use spincoord::entangle::{
    correlation_curve, epr_correlation, product_state, singlet, CorrelationChannel, TwoElectronSpinState,
};
use spincoord::operators::{ladder_defect, DerivativeChannel, OperatorSettings, SpinOperator, SpinorField};
use spincoord::pauli::{bloch_state, project_to_spinor, Direction, Spinor2};
use spincoord::quadrature::{full_inner_product, phi_inner_product};
use spincoord::{AnglePair, CoverConvention, QuadratureSpec, SpinError, SpinHarmonic};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    PoleProximity = 3,
    NonFinite = 4,
    InvalidSpec = 5,
    InvalidArgument = 6,
    NotNormalized = 7,
    NotBasisSpinor = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ScComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ScComplex> for Complex64 {
    fn from(z: ScComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Coefficients over (alpha, beta).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScSpinor {
    pub c_alpha: ScComplex,
    pub c_beta: ScComplex,
}

impl From<Spinor2> for ScSpinor {
    fn from(s: Spinor2) -> Self {
        Self { c_alpha: s.c_alpha.into(), c_beta: s.c_beta.into() }
    }
}

impl From<ScSpinor> for Spinor2 {
    fn from(s: ScSpinor) -> Self {
        Spinor2 { c_alpha: s.c_alpha.into(), c_beta: s.c_beta.into() }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScLadderDefect {
    pub norm_of_splus_beta: f64,
    pub overlap_with_alpha: ScComplex,
    pub defect_norm: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScCorrelationPoint {
    pub angle: f64,
    pub e_oracle: f64,
    pub e_quadrature: f64,
    pub abs_diff: f64,
}

/// Opaque spinor field handle.
pub struct ScField(SpinorField);

/// Opaque two-electron state handle.
pub struct ScState(TwoElectronSpinState);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &SpinError) -> ScStatus {
    match e {
        SpinError::ThetaOutOfRange { .. } | SpinError::InvalidDirection { .. } => ScStatus::Domain,
        SpinError::NonFiniteAngle { .. } | SpinError::NonFiniteNode { .. } => ScStatus::NonFinite,
        SpinError::PoleProximity { .. } => ScStatus::PoleProximity,
        SpinError::InvalidSpec(_) => ScStatus::InvalidSpec,
        SpinError::InvalidSettings(_) | SpinError::InvalidArgument(_) => ScStatus::InvalidArgument,
        SpinError::NotBasisSpinor => ScStatus::NotBasisSpinor,
        SpinError::NotNormalized { .. } => ScStatus::NotNormalized,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard<F>(f: F) -> ScStatus
where
    F: FnOnce() -> Result<(), ScFail>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ScStatus::Ok
        }
        Ok(Err(ScFail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside spincoord");
            ScStatus::Panic
        }
    }
}

struct ScFail(ScStatus, String);

impl From<SpinError> for ScFail {
    fn from(e: SpinError) -> Self {
        ScFail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> ScFail {
    ScFail(ScStatus::NullPointer, format!("{what} is null"))
}

fn cover_of(cover: i32) -> Result<CoverConvention, ScFail> {
    match cover {
        0 => Ok(CoverConvention::Single),
        1 => Ok(CoverConvention::Double),
        other => Err(ScFail(ScStatus::InvalidArgument, format!("cover {other} is not 0 or 1"))),
    }
}

fn harmonic_of(harmonic: i32, cover: i32) -> Result<SpinHarmonic, ScFail> {
    let cover = cover_of(cover)?;
    match harmonic {
        0 => Ok(SpinHarmonic::alpha(cover)),
        1 => Ok(SpinHarmonic::beta(cover)),
        other => Err(ScFail(ScStatus::InvalidArgument, format!("harmonic {other} is not 0 or 1"))),
    }
}

fn spec_of(n_theta: u32, n_phi: u32, cover: i32) -> Result<QuadratureSpec, ScFail> {
    Ok(QuadratureSpec::new(n_theta as usize, n_phi as usize, cover_of(cover)?)?)
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), ScFail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: non-null checked; caller guarantees `out` is valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn field_ref<'a>(f: *const ScField) -> Result<&'a SpinorField, ScFail> {
    // SAFETY: caller passes a handle from an `sc_field_*` constructor or null.
    unsafe { f.as_ref() }.map(|f| &f.0).ok_or_else(|| null("field"))
}

unsafe fn state_ref<'a>(s: *const ScState) -> Result<&'a TwoElectronSpinState, ScFail> {
    // SAFETY: caller passes a handle from an `sc_state_*` constructor or null.
    unsafe { s.as_ref() }.map(|s| &s.0).ok_or_else(|| null("state"))
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes) and returns the full message length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes of writes.
#[no_mangle]
pub unsafe extern "C" fn sc_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            // SAFETY: caller guarantees `buf` holds `len` bytes; we write n + 1 <= len.
            unsafe {
                ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}

/// Evaluates alpha (`harmonic = 0`) or beta (`harmonic = 1`) at `(theta, phi)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_harmonic_eval(
    harmonic: i32,
    cover: i32,
    theta: f64,
    phi: f64,
    out: *mut ScComplex,
) -> ScStatus {
    guard(|| {
        let h = harmonic_of(harmonic, cover)?;
        let v = h.eval(AnglePair::new(theta, phi)?);
        unsafe { write(out, v.into()) }
    })
}

/// `|Y(theta, phi)|^2`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_harmonic_density(
    harmonic: i32,
    cover: i32,
    theta: f64,
    phi: f64,
    out: *mut f64,
) -> ScStatus {
    guard(|| {
        let h = harmonic_of(harmonic, cover)?;
        let v = h.density(AnglePair::new(theta, phi)?);
        unsafe { write(out, v) }
    })
}

/// New field for alpha or beta with analytic partials. Null on bad arguments.
#[no_mangle]
pub extern "C" fn sc_field_harmonic(harmonic: i32, cover: i32) -> *mut ScField {
    let mut handle = ptr::null_mut();
    let _ = guard(|| {
        let h = harmonic_of(harmonic, cover)?;
        handle = Box::into_raw(Box::new(ScField(SpinorField::from_harmonic(h))));
        Ok(())
    });
    handle
}

/// `c_alpha * alpha + c_beta * beta` as a field. Null on bad arguments.
#[no_mangle]
pub extern "C" fn sc_field_from_spinor(spinor: ScSpinor, cover: i32) -> *mut ScField {
    let mut handle = ptr::null_mut();
    let _ = guard(|| {
        let cover = cover_of(cover)?;
        let s = Spinor2::from(spinor);
        Spinor2::new(s.c_alpha, s.c_beta)?;
        handle = Box::into_raw(Box::new(ScField(s.to_field(cover))));
        Ok(())
    });
    handle
}

/// `c1 * f1 + c2 * f2`. Null if either handle is null.
///
/// # Safety
/// `f1`, `f2` must be null or live field handles.
#[no_mangle]
pub unsafe extern "C" fn sc_field_combine(
    c1: ScComplex,
    f1: *const ScField,
    c2: ScComplex,
    f2: *const ScField,
) -> *mut ScField {
    let mut handle = ptr::null_mut();
    let _ = guard(|| {
        let (f1, f2) = unsafe { (field_ref(f1)?, field_ref(f2)?) };
        let f = SpinorField::linear_combination(&[(c1.into(), f1), (c2.into(), f2)]);
        handle = Box::into_raw(Box::new(ScField(f)));
        Ok(())
    });
    handle
}

/// Releases a field handle. Null is ignored.
///
/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_field_free(f: *mut ScField) {
    if !f.is_null() {
        // SAFETY: handle came from Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(f) });
    }
}

/// # Safety
/// `f` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_field_eval(f: *const ScField, theta: f64, phi: f64, out: *mut ScComplex) -> ScStatus {
    guard(|| {
        let f = unsafe { field_ref(f)? };
        let v = f.eval(AnglePair::new(theta, phi)?);
        unsafe { write(out, v.into()) }
    })
}

/// Applies an operator at a point: `op` is 0 = S^2, 1 = S_z, 2 = S_+, 3 = S_-.
/// `fd_step <= 0` selects analytic partials (with the default step for any
/// missing ones); a positive `fd_step` forces central differences.
///
/// # Safety
/// `f` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_apply_operator(
    op: i32,
    f: *const ScField,
    theta: f64,
    phi: f64,
    fd_step: f64,
    out: *mut ScComplex,
) -> ScStatus {
    guard(|| {
        let f = unsafe { field_ref(f)? };
        let op = match op {
            0 => SpinOperator::S2,
            1 => SpinOperator::Sz,
            2 => SpinOperator::SPlus,
            3 => SpinOperator::SMinus,
            other => return Err(ScFail(ScStatus::InvalidArgument, format!("operator {other} is not 0..=3"))),
        };
        let settings = if fd_step > 0.0 {
            OperatorSettings { fd_step, channel: DerivativeChannel::FiniteDifference, ..OperatorSettings::default() }
        } else {
            OperatorSettings::default()
        };
        let v = op.apply(f, AnglePair::new(theta, phi)?, &settings)?;
        unsafe { write(out, v.into()) }
    })
}

/// `<f|g>` with the `sin theta` measure.
///
/// # Safety
/// `f`, `g` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_full_inner_product(
    f: *const ScField,
    g: *const ScField,
    n_theta: u32,
    n_phi: u32,
    cover: i32,
    out: *mut ScComplex,
) -> ScStatus {
    guard(|| {
        let (f, g) = unsafe { (field_ref(f)?, field_ref(g)?) };
        let v = full_inner_product(f, g, &spec_of(n_theta, n_phi, cover)?)?;
        unsafe { write(out, v.into()) }
    })
}

/// `integral of f* g dphi` at fixed theta.
///
/// # Safety
/// `f`, `g` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_phi_inner_product(
    f: *const ScField,
    g: *const ScField,
    theta: f64,
    n_phi: u32,
    cover: i32,
    out: *mut ScComplex,
) -> ScStatus {
    guard(|| {
        let (f, g) = unsafe { (field_ref(f)?, field_ref(g)?) };
        let v = phi_inner_product(f, g, theta, &spec_of(4, n_phi, cover)?)?;
        unsafe { write(out, v.into()) }
    })
}

/// Coordinates `(<alpha|f>, <beta|f>)`.
///
/// # Safety
/// `f` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_project_to_spinor(
    f: *const ScField,
    n_theta: u32,
    n_phi: u32,
    cover: i32,
    out: *mut ScSpinor,
) -> ScStatus {
    guard(|| {
        let f = unsafe { field_ref(f)? };
        let s = project_to_spinor(f, &spec_of(n_theta, n_phi, cover)?)?;
        unsafe { write(out, s.into()) }
    })
}

/// Spin state polarized along `(theta, phi)`, `phi` in `[0, 2 pi)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_bloch_state(theta: f64, phi: f64, out: *mut ScSpinor) -> ScStatus {
    guard(|| {
        let s = bloch_state(Direction::new(theta, phi)?);
        unsafe { write(out, s.into()) }
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_ladder_defect(n_theta: u32, n_phi: u32, cover: i32, out: *mut ScLadderDefect) -> ScStatus {
    guard(|| {
        let d = ladder_defect(&spec_of(n_theta, n_phi, cover)?, &OperatorSettings::default())?;
        unsafe {
            write(
                out,
                ScLadderDefect {
                    norm_of_splus_beta: d.norm_of_splus_beta,
                    overlap_with_alpha: d.overlap_with_alpha.into(),
                    defect_norm: d.defect_norm,
                },
            )
        }
    })
}

/// New singlet state handle.
#[no_mangle]
pub extern "C" fn sc_state_singlet() -> *mut ScState {
    Box::into_raw(Box::new(ScState(singlet())))
}

/// Product of two normalized spinors. Null if either is not normalized.
#[no_mangle]
pub extern "C" fn sc_state_product(s1: ScSpinor, s2: ScSpinor) -> *mut ScState {
    let mut handle = ptr::null_mut();
    let _ = guard(|| {
        let st = product_state(&s1.into(), &s2.into())?;
        handle = Box::into_raw(Box::new(ScState(st)));
        Ok(())
    });
    handle
}

/// Releases a state handle. Null is ignored.
///
/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_state_free(s: *mut ScState) {
    if !s.is_null() {
        // SAFETY: handle came from Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(s) });
    }
}

/// `E(a, b)`; `channel` 0 = 4x4 matrix oracle, 1 = four-angle quadrature.
///
/// # Safety
/// `s` must be a live handle and `out` valid for writes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn sc_epr_correlation(
    s: *const ScState,
    a_theta: f64,
    a_phi: f64,
    b_theta: f64,
    b_phi: f64,
    channel: i32,
    n_theta: u32,
    n_phi: u32,
    cover: i32,
    out: *mut f64,
) -> ScStatus {
    guard(|| {
        let s = unsafe { state_ref(s)? };
        let channel = match channel {
            0 => CorrelationChannel::Oracle,
            1 => CorrelationChannel::Quadrature,
            other => return Err(ScFail(ScStatus::InvalidArgument, format!("channel {other} is not 0 or 1"))),
        };
        let e = epr_correlation(
            s,
            Direction::new(a_theta, a_phi)?,
            Direction::new(b_theta, b_phi)?,
            channel,
            &spec_of(n_theta, n_phi, cover)?,
        )?;
        unsafe { write(out, e) }
    })
}

/// Fills `out[0..n_points]` with the detector sweep. `capacity` must be at
/// least `n_points`.
///
/// # Safety
/// `s` must be a live handle and `out` valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn sc_correlation_curve(
    s: *const ScState,
    n_points: u32,
    n_theta: u32,
    n_phi: u32,
    cover: i32,
    out: *mut ScCorrelationPoint,
    capacity: usize,
) -> ScStatus {
    guard(|| {
        let s = unsafe { state_ref(s)? };
        if out.is_null() {
            return Err(null("output buffer"));
        }
        if capacity < n_points as usize {
            return Err(ScFail(
                ScStatus::BufferTooSmall,
                format!("capacity {capacity} < n_points {n_points}"),
            ));
        }
        let pts = correlation_curve(s, n_points as usize, &spec_of(n_theta, n_phi, cover)?)?;
        for (k, p) in pts.iter().enumerate() {
            // SAFETY: k < n_points <= capacity.
            unsafe {
                out.add(k).write(ScCorrelationPoint {
                    angle: p.angle_between_detectors,
                    e_oracle: p.e_oracle,
                    e_quadrature: p.e_quadrature,
                    abs_diff: p.abs_difference,
                })
            };
        }
        Ok(())
    })
}
