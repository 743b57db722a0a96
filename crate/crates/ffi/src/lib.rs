//! C ABI over the schrate library.
//!
//! Every function returns a [`SchrateStatus`]; results go through out-pointers.
//! On failure the message is available from [`schrate_last_error_message`]
//! on the same thread. Handles are opaque and must be released with the
//! matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use schrate::curves::{CurveKind, CurveSpec};
use schrate::experiments::{self, ExperimentPlan};
use schrate::exponents::{self, Classification, RatePoint, Regime, Smoothness};
use schrate::initial_data::{self, Family, FrequencyProfile};
use schrate::propagator::Propagator;
use schrate::quadrature::QuadratureSpec;
use schrate::{maximal, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchrateStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Range = 3,
    Unsupported = 4,
    Accuracy = 5,
    Window = 6,
    Resolution = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchrateSmoothness {
    Lipschitz = 0,
    Holder = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchrateFamily {
    BumpDilated = 0,
    BumpModulated = 1,
    BumpTensor = 2,
    IndicatorBand = 3,
    Bourgain = 4,
    AnnulusBump = 5,
    GaussianLike = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchrateCurveKind {
    MinusShift = 0,
    PlusShift = 1,
    Straight = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchrateComplex {
    pub re: f64,
    pub im: f64,
}

/// Opaque initial-data profile.
pub struct SchrateProfile {
    inner: FrequencyProfile,
}

/// Opaque curve.
pub struct SchrateCurve {
    inner: CurveSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SchrateStatus {
    match e {
        Error::Domain(_) | Error::Config(_) | Error::Calibration(_) | Error::Io(_) => SchrateStatus::InvalidArgument,
        Error::Range(_) => SchrateStatus::Range,
        Error::Unsupported(_) => SchrateStatus::Unsupported,
        Error::Accuracy { .. } => SchrateStatus::Accuracy,
        Error::Window(_) => SchrateStatus::Window,
        Error::Resolution(_) => SchrateStatus::Resolution,
    }
}

struct Fail(SchrateStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(SchrateStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure and converts panics to `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SchrateStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            SchrateStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SchrateStatus::Internal
        }
    }
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn smoothness(s: SchrateSmoothness) -> Smoothness {
    match s {
        SchrateSmoothness::Lipschitz => Smoothness::Lipschitz,
        SchrateSmoothness::Holder => Smoothness::Holder,
    }
}

fn family(f: SchrateFamily) -> Family {
    match f {
        SchrateFamily::BumpDilated => Family::BumpDilated,
        SchrateFamily::BumpModulated => Family::BumpModulated,
        SchrateFamily::BumpTensor => Family::BumpTensor,
        SchrateFamily::IndicatorBand => Family::IndicatorBand,
        SchrateFamily::Bourgain => Family::Bourgain,
        SchrateFamily::AnnulusBump => Family::AnnulusBump,
        SchrateFamily::GaussianLike => Family::GaussianLike,
    }
}

fn curve_kind(k: SchrateCurveKind) -> CurveKind {
    match k {
        SchrateCurveKind::MinusShift => CurveKind::MinusShift,
        SchrateCurveKind::PlusShift => CurveKind::PlusShift,
        SchrateCurveKind::Straight => CurveKind::Straight,
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn schrate_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn schrate_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Critical Sobolev exponent s(δ) of the regime.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn schrate_threshold(
    d: u32,
    alpha: f64,
    m: f64,
    smooth: SchrateSmoothness,
    delta: f64,
    out: *mut f64,
) -> SchrateStatus {
    guard(|| {
        let regime = Regime::new(d, alpha, m, smoothness(smooth))?;
        write(out, exponents::threshold(&regime, delta)?, "out")
    })
}

/// Writes −1 (below threshold), 0 (on the boundary) or 1 (above).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn schrate_classify(
    d: u32,
    alpha: f64,
    m: f64,
    smooth: SchrateSmoothness,
    delta: f64,
    s: f64,
    out: *mut i32,
) -> SchrateStatus {
    guard(|| {
        let regime = Regime::new(d, alpha, m, smoothness(smooth))?;
        let c = match exponents::classify(&regime, RatePoint { s, delta })? {
            Classification::BelowThreshold => -1,
            Classification::OnBoundary => 0,
            Classification::AboveThreshold => 1,
        };
        write(out, c, "out")
    })
}

fn boxed_profile(p: FrequencyProfile, out: *mut *mut SchrateProfile) -> Result<(), Fail> {
    unsafe { write(out, Box::into_raw(Box::new(SchrateProfile { inner: p })), "out") }
}

/// New profile of a scaling family at scale `r`.
///
/// # Safety
/// `out` must be valid for writes. Release the handle with [`schrate_profile_free`].
#[no_mangle]
pub unsafe extern "C" fn schrate_profile_new(
    fam: SchrateFamily,
    r: f64,
    epsilon: f64,
    d: usize,
    out: *mut *mut SchrateProfile,
) -> SchrateStatus {
    guard(|| boxed_profile(FrequencyProfile::build(family(fam), r, epsilon, d)?, out))
}

/// Unit-norm annulus bump at dyadic scale `k`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn schrate_profile_annulus(k: i32, out: *mut *mut SchrateProfile) -> SchrateStatus {
    guard(|| boxed_profile(FrequencyProfile::annulus_bump(k)?, out))
}

/// Gaussian-like profile amplitude·e^{−(ξ−center)²} per coordinate.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn schrate_profile_gaussian(
    d: usize,
    center: f64,
    amplitude: f64,
    out: *mut *mut SchrateProfile,
) -> SchrateStatus {
    guard(|| boxed_profile(FrequencyProfile::gaussian_like(d, center, amplitude)?, out))
}

/// # Safety
/// `p` must come from a `schrate_profile_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn schrate_profile_free(p: *mut SchrateProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// ‖f‖_{H^s}.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn schrate_profile_sobolev(p: *const SchrateProfile, s: f64, out: *mut f64) -> SchrateStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("profile"))?;
        let v = initial_data::sobolev_norm(&p.inner, s, &QuadratureSpec::default())?;
        write(out, v, "out")
    })
}

/// f̂(η) for η of length `len` (the profile dimension).
///
/// # Safety
/// `p` must be a live handle, `eta` valid for `len` reads, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn schrate_profile_fourier_eval(
    p: *const SchrateProfile,
    eta: *const f64,
    len: usize,
    out: *mut SchrateComplex,
) -> SchrateStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("profile"))?;
        let eta = slice(eta, len, "eta")?;
        let v = initial_data::fourier_eval(&p.inner, eta)?;
        write(out, SchrateComplex { re: v.re, im: v.im }, "out")
    })
}

/// New translation curve.
///
/// # Safety
/// `out` must be valid for writes. Release the handle with [`schrate_curve_free`].
#[no_mangle]
pub unsafe extern "C" fn schrate_curve_new(
    kind: SchrateCurveKind,
    alpha: f64,
    d: usize,
    out: *mut *mut SchrateCurve,
) -> SchrateStatus {
    guard(|| {
        let c = CurveSpec::new(curve_kind(kind), alpha, d)?;
        write(out, Box::into_raw(Box::new(SchrateCurve { inner: c })), "out")
    })
}

/// # Safety
/// `c` must come from [`schrate_curve_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn schrate_curve_free(c: *mut SchrateCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// γ(x, t) written to `out` (same length as `x`).
///
/// # Safety
/// `x` valid for `len` reads and `out` for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn schrate_curve_gamma(
    c: *const SchrateCurve,
    x: *const f64,
    len: usize,
    t: f64,
    out: *mut f64,
) -> SchrateStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("curve"))?;
        let x = slice(x, len, "x")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let g = c.inner.gamma(x, t)?;
        ptr::copy_nonoverlapping(g.as_ptr(), out, g.len().min(len));
        Ok(())
    })
}

/// U_γ^m f(x, t).
///
/// # Safety
/// Handles must be live, `x` valid for `len` reads, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn schrate_evaluate(
    p: *const SchrateProfile,
    c: *const SchrateCurve,
    m: f64,
    x: *const f64,
    len: usize,
    t: f64,
    out: *mut SchrateComplex,
) -> SchrateStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("profile"))?;
        let c = c.as_ref().ok_or_else(|| null("curve"))?;
        let x = slice(x, len, "x")?;
        let prop = Propagator::new(&p.inner, &c.inner, m, &QuadratureSpec::default())?;
        let (v, _) = prop.value(x, t)?;
        write(out, SchrateComplex { re: v.re, im: v.im }, "out")
    })
}

/// The family's critical time at x for window constant `c`.
///
/// # Safety
/// `curve` must be live, `x` valid for `len` reads, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn schrate_critical_time(
    fam: SchrateFamily,
    curve: *const SchrateCurve,
    r: f64,
    epsilon: f64,
    x: *const f64,
    len: usize,
    c: f64,
    out: *mut f64,
) -> SchrateStatus {
    guard(|| {
        let curve = curve.as_ref().ok_or_else(|| null("curve"))?;
        let x = slice(x, len, "x")?;
        let t = maximal::critical_time(family(fam), &curve.inner, r, epsilon, x, c)?;
        write(out, t, "out")
    })
}

/// Predicted R-exponent of the family's maximal/Sobolev ratio (m = 2).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn schrate_predicted_slope(
    fam: SchrateFamily,
    d: u32,
    alpha: f64,
    delta: f64,
    s: f64,
    epsilon: f64,
    out: *mut f64,
) -> SchrateStatus {
    guard(|| {
        let regime = Regime::schrodinger(d, alpha)?;
        write(out, experiments::predicted_slope(family(fam), &regime, delta, s, epsilon)?, "out")
    })
}

/// Runs a JSON experiment plan and returns the JSON scaling report.
///
/// # Safety
/// `plan` must be a NUL-terminated string and `out` valid for writes. The
/// returned string must be released with [`schrate_string_free`].
#[no_mangle]
pub unsafe extern "C" fn schrate_run_plan_json(plan: *const c_char, out: *mut *mut c_char) -> SchrateStatus {
    guard(|| {
        if plan.is_null() {
            return Err(null("plan"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(plan)
            .to_str()
            .map_err(|e| Fail(SchrateStatus::InvalidArgument, format!("plan is not UTF-8: {e}")))?;
        let plan: ExperimentPlan = serde_json::from_str(text).map_err(Error::from)?;
        let report = experiments::run(&plan).map_err(|f| Fail::from(f.error))?;
        let json = serde_json::to_string(&report).map_err(Error::from)?;
        let c = CString::new(json).map_err(|e| Fail(SchrateStatus::Internal, e.to_string()))?;
        write(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn schrate_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
