//! C ABI over ffd-core.
//!
//! Curves and bundles are opaque handles owned by the caller and released
//! with the matching `_free`. Every fallible call returns an `FfdStatus`;
//! on failure `ffd_last_error` describes the cause. Strings returned through
//! out-parameters are JSON and must be released with `ffd_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ffd_core::cli::parse_class_arg;
use ffd_core::constructions::{classify, summarize};
use ffd_core::curve::parse_curve;
use ffd_core::frobenius::{frob_pull, frob_push_line, raynaud_b};
use ffd_core::sheaves::{det_and_deg, BundleLiteral, LatticePair};
use ffd_core::stability::{hn, stability_json};
use ffd_core::{CurveModel, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfdStatus {
    Ok = 0,
    NullArgument = 1,
    Parse = 2,
    InvalidCurve = 3,
    Precondition = 4,
    Verification = 5,
    Internal = 6,
    Panic = 7,
}

/// Opaque curve handle.
pub struct FfdCurve(CurveModel);

/// Opaque rank-r bundle handle.
pub struct FfdBundle(LatticePair);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FfdStatus {
    match e {
        Error::Parse(_) | Error::UnknownPlace(_) | Error::Io(_) => FfdStatus::Parse,
        Error::SingularModel(_) | Error::GenusTooSmall(_) | Error::UnsupportedModel(_) => FfdStatus::InvalidCurve,
        Error::ThetaCheckFailed | Error::InternalInconsistency(_) => FfdStatus::Verification,
        Error::DivisionByZero | Error::IncompatibleTower { .. } | Error::RankDeficient => FfdStatus::Internal,
        _ => FfdStatus::Precondition,
    }
}

fn guard(f: impl FnOnce() -> Result<(), FfdStatus>) -> FfdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FfdStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside ffd-core".into());
            FfdStatus::Panic
        }
    }
}

fn lift<T>(r: ffd_core::Result<T>) -> Result<T, FfdStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, FfdStatus> {
    if p.is_null() {
        set_error("null argument".into());
        return Err(FfdStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|e| {
        set_error(format!("argument is not UTF-8: {e}"));
        FfdStatus::Parse
    })
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, FfdStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle".into());
        FfdStatus::NullArgument
    })
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), FfdStatus> {
    if out.is_null() {
        set_error("null out-parameter".into());
        return Err(FfdStatus::NullArgument);
    }
    out.write(v);
    Ok(())
}

unsafe fn put_json(out: *mut *mut c_char, v: &serde_json::Value) -> Result<(), FfdStatus> {
    let s = CString::new(v.to_string()).map_err(|_| FfdStatus::Internal)?;
    put(out, s.into_raw())
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ffd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ffd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a curve from its JSON config `{"m": .., "h": [..], "f": [..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffd_curve_new(json: *const c_char, out: *mut *mut FfdCurve) -> FfdStatus {
    guard(|| {
        let c = lift(parse_curve(str_arg(json)?))?;
        put(out, Box::into_raw(Box::new(FfdCurve(c))))
    })
}

/// # Safety
/// `c` must be NULL or a handle from `ffd_curve_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ffd_curve_free(c: *mut FfdCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` must be a live curve handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffd_curve_genus(c: *const FfdCurve, out: *mut u32) -> FfdStatus {
    guard(|| put(out, ref_arg(c)?.0.genus() as u32))
}

/// The theta characteristic B as `{"B": divisor, "degree": int}`.
///
/// # Safety
/// `c` must be a live curve handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffd_raynaud(c: *const FfdCurve, out: *mut *mut c_char) -> FfdStatus {
    guard(|| {
        let c = &ref_arg(c)?.0;
        let b = lift(raynaud_b(c))?;
        put_json(out, &serde_json::json!({ "B": b.literal(c), "degree": b.degree() }))
    })
}

/// F_*L for a line class given as a divisor literal.
///
/// # Safety
/// `c` must be a live curve handle, `class` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffd_push_forward(c: *const FfdCurve, class: *const c_char, out: *mut *mut FfdBundle) -> FfdStatus {
    guard(|| {
        let c = &ref_arg(c)?.0;
        let l = lift(parse_class_arg(c, str_arg(class)?))?;
        let (v, _) = lift(frob_push_line(c, &l))?;
        put(out, Box::into_raw(Box::new(FfdBundle(v))))
    })
}

/// # Safety
/// `c` must be a live curve handle, `json` a NUL-terminated bundle literal
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffd_bundle_from_json(c: *const FfdCurve, json: *const c_char, out: *mut *mut FfdBundle) -> FfdStatus {
    guard(|| {
        let c = &ref_arg(c)?.0;
        let lit: BundleLiteral = lift(serde_json::from_str(str_arg(json)?).map_err(Error::from))?;
        let v = lift(LatticePair::from_literal(c, &lit))?;
        put(out, Box::into_raw(Box::new(FfdBundle(v))))
    })
}

/// # Safety
/// `v` must be a live bundle handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffd_bundle_to_json(v: *const FfdBundle, out: *mut *mut c_char) -> FfdStatus {
    guard(|| {
        let lit = ref_arg(v)?.0.to_literal();
        put_json(out, &serde_json::to_value(lit).map_err(|_| FfdStatus::Internal)?)
    })
}

/// # Safety
/// `v` must be NULL or a bundle handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ffd_bundle_free(v: *mut FfdBundle) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// Handles must be live and created over the same curve; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffd_bundle_degree(c: *const FfdCurve, v: *const FfdBundle, out: *mut i64) -> FfdStatus {
    guard(|| put(out, ref_arg(v)?.0.degree(&ref_arg(c)?.0)))
}

/// # Safety
/// Handles must be live and created over the same curve; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffd_frob_pull(c: *const FfdCurve, v: *const FfdBundle, out: *mut *mut FfdBundle) -> FfdStatus {
    guard(|| {
        let w = lift(frob_pull(&ref_arg(c)?.0, &ref_arg(v)?.0))?;
        put(out, Box::into_raw(Box::new(FfdBundle(w))))
    })
}

/// Stability data of a rank-2 bundle: s, maximal sub, flags, polygon, stratum.
///
/// # Safety
/// Handles must be live and created over the same curve; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffd_stability(c: *const FfdCurve, v: *const FfdBundle, out: *mut *mut c_char) -> FfdStatus {
    guard(|| {
        let c = &ref_arg(c)?.0;
        let v = &ref_arg(v)?.0;
        let (p, r, j) = lift(hn(c, v))?;
        let (det, d) = lift(det_and_deg(c, v))?;
        let st = serde_json::to_value(stability_json(&p, &r, j)).map_err(|_| FfdStatus::Internal)?;
        put_json(out, &serde_json::json!({ "degree": d, "det": det.literal(c), "stability": st }))
    })
}

/// The construction datum of a Frobenius-destabilized stable bundle.
///
/// # Safety
/// Handles must be live and created over the same curve; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffd_classify(c: *const FfdCurve, v: *const FfdBundle, out: *mut *mut c_char) -> FfdStatus {
    guard(|| {
        let c = &ref_arg(c)?.0;
        let dt = lift(classify(c, &ref_arg(v)?.0))?;
        let sm = lift(summarize(c, &dt))?;
        put_json(out, &serde_json::to_value(sm).map_err(|_| FfdStatus::Internal)?)
    })
}
