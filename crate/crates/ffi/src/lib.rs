//! C interface to `sintegral`.
//!
//! Curves and verdicts are opaque handles. Every fallible call returns a
//! [`SintStatus`]; on failure `sint_last_error_message` describes the error
//! on the calling thread. Strings returned through `char **` outputs are
//! owned by the caller and released with `sint_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sintegral::report::{enumerate_report, generate_report, Report};
use sintegral::{decide, CurveInput, Decision, Error, PrimeSet, Verdict};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SintStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidPrimes = 4,
    InvalidArgument = 5,
    Internal = 6,
}

/// Verdict kinds. The numeric values match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SintVerdictKind {
    Infinite = 0,
    Finite = 1,
    Unknown = 2,
    Error = 3,
}

/// A parsed curve, implicit or parametrized.
pub struct SintCurve {
    input: CurveInput,
}

/// The outcome of `sint_decide`.
pub struct SintVerdict {
    decision: Decision,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: SintStatus, msg: impl Into<String>) -> SintStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> SintStatus) -> SintStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(SintStatus::Internal, msg)
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, SintStatus> {
    if s.is_null() {
        return Err(fail(SintStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(SintStatus::InvalidUtf8, e.to_string()))
}

/// A null `primes` pointer means the empty set.
unsafe fn read_primes(primes: *const c_char) -> Result<PrimeSet, SintStatus> {
    if primes.is_null() {
        return Ok(PrimeSet::empty());
    }
    read_str(primes)?
        .parse()
        .map_err(|e: Error| fail(SintStatus::InvalidPrimes, e.to_string()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> SintStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            SintStatus::Ok
        }
        Err(e) => fail(SintStatus::Internal, e.to_string()),
    }
}

unsafe fn parse_curve(
    text: *const c_char,
    out: *mut *mut SintCurve,
    parse: impl FnOnce(&str) -> sintegral::Result<CurveInput>,
) -> SintStatus {
    guard(|| {
        if out.is_null() {
            return fail(SintStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse(text) {
            Ok(input) => {
                *out = Box::into_raw(Box::new(SintCurve { input }));
                SintStatus::Ok
            }
            Err(e) => fail(SintStatus::Parse, e.to_string()),
        }
    })
}

/// Parse a polynomial in x and y; the curve is its zero set.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sint_curve_parse_implicit(
    text: *const c_char,
    assert_irreducible: bool,
    out: *mut *mut SintCurve,
) -> SintStatus {
    parse_curve(text, out, |t| {
        CurveInput::parse_implicit(t, assert_irreducible)
    })
}

/// Parse comma-separated rational functions of t.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sint_curve_parse_param(
    text: *const c_char,
    assert_proper: bool,
    out: *mut *mut SintCurve,
) -> SintStatus {
    parse_curve(text, out, |t| CurveInput::parse_param(t, assert_proper))
}

/// # Safety
/// `curve` must be null or a handle from a `sint_curve_parse_*` call that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sint_curve_free(curve: *mut SintCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Decide the curve for the comma-separated prime list `primes`.
///
/// # Safety
/// `curve` must be a live handle, `primes` null or a NUL-terminated string,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sint_decide(
    curve: *const SintCurve,
    primes: *const c_char,
    bound: u64,
    out: *mut *mut SintVerdict,
) -> SintStatus {
    guard(|| {
        if curve.is_null() || out.is_null() {
            return fail(SintStatus::NullPointer, "null handle or output pointer");
        }
        *out = ptr::null_mut();
        if bound == 0 {
            return fail(SintStatus::InvalidArgument, "search bound must be positive");
        }
        let s = match read_primes(primes) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let decision = decide(&(*curve).input, &s, bound);
        *out = Box::into_raw(Box::new(SintVerdict { decision }));
        SintStatus::Ok
    })
}

/// # Safety
/// `verdict` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sint_verdict_kind(verdict: *const SintVerdict) -> SintVerdictKind {
    if verdict.is_null() {
        return SintVerdictKind::Error;
    }
    match (*verdict).decision.verdict {
        Verdict::Infinite(_) => SintVerdictKind::Infinite,
        Verdict::Finite { .. } => SintVerdictKind::Finite,
        Verdict::Unknown { .. } => SintVerdictKind::Unknown,
        Verdict::Error(_) => SintVerdictKind::Error,
    }
}

/// The verdict as a JSON report, in the same schema as `sintegral decide`.
///
/// # Safety
/// `verdict` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sint_verdict_to_json(
    verdict: *const SintVerdict,
    out: *mut *mut c_char,
) -> SintStatus {
    guard(|| {
        if verdict.is_null() || out.is_null() {
            return fail(SintStatus::NullPointer, "null handle or output pointer");
        }
        *out = ptr::null_mut();
        write_string(
            out,
            Report::from_decision(&(*verdict).decision, &[]).to_json(),
        )
    })
}

/// # Safety
/// `verdict` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sint_verdict_free(verdict: *mut SintVerdict) {
    if !verdict.is_null() {
        drop(Box::from_raw(verdict));
    }
}

/// Decide and, when infinite, list `count` verified points, as JSON.
///
/// # Safety
/// `curve` must be a live handle, `primes` null or a NUL-terminated string,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sint_generate_json(
    curve: *const SintCurve,
    primes: *const c_char,
    bound: u64,
    count: usize,
    out: *mut *mut c_char,
) -> SintStatus {
    guard(|| {
        if curve.is_null() || out.is_null() {
            return fail(SintStatus::NullPointer, "null handle or output pointer");
        }
        *out = ptr::null_mut();
        if bound == 0 || count == 0 {
            return fail(
                SintStatus::InvalidArgument,
                "bound and count must be positive",
            );
        }
        let s = match read_primes(primes) {
            Ok(s) => s,
            Err(st) => return st,
        };
        write_string(
            out,
            generate_report(&(*curve).input, &s, bound, count).to_json(),
        )
    })
}

/// All S-integral points in the search lattice up to `bound`, as JSON.
///
/// # Safety
/// `curve` must be a live handle, `primes` null or a NUL-terminated string,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sint_enumerate_json(
    curve: *const SintCurve,
    primes: *const c_char,
    bound: u64,
    out: *mut *mut c_char,
) -> SintStatus {
    guard(|| {
        if curve.is_null() || out.is_null() {
            return fail(SintStatus::NullPointer, "null handle or output pointer");
        }
        *out = ptr::null_mut();
        let s = match read_primes(primes) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match enumerate_report(&(*curve).input, &s, bound) {
            Ok(r) => write_string(out, r.to_json()),
            Err(Error::InvalidInput(m)) => fail(SintStatus::InvalidArgument, m),
            Err(e) => fail(SintStatus::Internal, e.to_string()),
        }
    })
}

/// The message for the last failed call on this thread, or null.
/// The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn sint_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sint_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
