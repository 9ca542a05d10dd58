//! C interface to `gqpt`.
//!
//! Objects cross the boundary as opaque handles created by `gqpt_*_new` or
//! `gqpt_*_from_json` style calls and released with the matching `_free`.
//! Every fallible call returns a [`GqptStatus`]; on failure the message is
//! available from [`gqpt_last_error`] until the next call on the same thread.
//! Strings returned to the caller are freed with [`gqpt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gqpt::forms::{ProcessState, QForm};
use gqpt::io::{self, ProbeData};
use gqpt::predict::{predict_coherent, predict_gaussian, PureGaussianInput};
use gqpt::tomo::reconstruct;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GqptStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed input or a validation failure.
    DataError = 2,
    /// Singular system, divergent integral or similar.
    NumericalError = 3,
    InvalidUtf8 = 4,
    Panic = 5,
}

/// A reconstructed or loaded process operator.
pub struct GqptProcess {
    inner: ProcessState,
    residual: f64,
}

/// A Gaussian Q-function.
pub struct GqptQForm {
    inner: QForm,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(GqptStatus, String);

impl From<gqpt::Error> for Failure {
    fn from(e: gqpt::Error) -> Self {
        let status = if e.exit_code() == 3 { GqptStatus::NumericalError } else { GqptStatus::DataError };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GqptStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GqptStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            GqptStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(GqptStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(GqptStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read_amplitudes(re: *const f64, im: *const f64, modes: usize) -> Result<Vec<Complex64>, Failure> {
    if modes > 0 && (re.is_null() || im.is_null()) {
        return Err(null("amplitude array"));
    }
    Ok((0..modes).map(|j| Complex64::new(*re.add(j), *im.add(j))).collect())
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let s = CString::new(s).map_err(|_| Failure(GqptStatus::DataError, "string contains nul".into()))?;
    *out = s.into_raw();
    Ok(())
}

/// File format version, a static string.
#[no_mangle]
pub extern "C" fn gqpt_version() -> *const c_char {
    c"gqpt/1".as_ptr()
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next `gqpt_*` call on the same thread.
#[no_mangle]
pub extern "C" fn gqpt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gqpt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reconstructs a process from a `probe-data` document.
///
/// # Safety
/// `probe_data_json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gqpt_reconstruct(
    probe_data_json: *const c_char,
    trace_preserving: bool,
    out: *mut *mut GqptProcess,
) -> GqptStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let data: ProbeData = io::decode(read_str(probe_data_json, "probe_data_json")?)?;
        let rec = reconstruct(&data.records, trace_preserving)?;
        write_out(out, GqptProcess { inner: rec.process, residual: rec.residual });
        Ok(())
    })
}

/// Loads a `process` document.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gqpt_process_from_json(json: *const c_char, out: *mut *mut GqptProcess) -> GqptStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner: ProcessState = io::decode(read_str(json, "json")?)?;
        write_out(out, GqptProcess { inner, residual: 0.0 });
        Ok(())
    })
}

/// Canonical `process` document; free with [`gqpt_string_free`].
///
/// # Safety
/// `process` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gqpt_process_to_json(process: *const GqptProcess, out: *mut *mut c_char) -> GqptStatus {
    guard(|| {
        let p = process.as_ref().ok_or_else(|| null("process"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, io::encode(&p.inner)?)
    })
}

/// Number of modes, or 0 for a null handle.
///
/// # Safety
/// `process` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gqpt_process_modes(process: *const GqptProcess) -> usize {
    process.as_ref().map_or(0, |p| p.inner.modes())
}

/// Self-consistency residual of a reconstruction; 0 for loaded processes.
///
/// # Safety
/// `process` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gqpt_process_residual(process: *const GqptProcess) -> f64 {
    process.as_ref().map_or(f64::NAN, |p| p.residual)
}

/// # Safety
/// `process` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gqpt_process_free(process: *mut GqptProcess) {
    if !process.is_null() {
        drop(Box::from_raw(process));
    }
}

/// Output for the coherent input with amplitudes `re[j] + i im[j]`.
///
/// # Safety
/// `process` must be a live handle, `re` and `im` must point to `modes`
/// doubles, and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gqpt_predict_coherent(
    process: *const GqptProcess,
    re: *const f64,
    im: *const f64,
    modes: usize,
    out: *mut *mut GqptQForm,
) -> GqptStatus {
    guard(|| {
        let p = process.as_ref().ok_or_else(|| null("process"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let u = read_amplitudes(re, im, modes)?;
        write_out(out, GqptQForm { inner: predict_coherent(&p.inner, &u)? });
        Ok(())
    })
}

/// Output for a squeezed-coherent input given as an `input` document.
///
/// # Safety
/// `process` must be a live handle, `input_json` a valid C string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gqpt_predict_gaussian(
    process: *const GqptProcess,
    input_json: *const c_char,
    out: *mut *mut GqptQForm,
) -> GqptStatus {
    guard(|| {
        let p = process.as_ref().ok_or_else(|| null("process"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let input: PureGaussianInput = io::decode(read_str(input_json, "input_json")?)?;
        write_out(out, GqptQForm { inner: predict_gaussian(&p.inner, &input)? });
        Ok(())
    })
}

/// Evaluates `Q(z)` at `z_j = re[j] + i im[j]`.
///
/// # Safety
/// `qform` must be a live handle, `re` and `im` must point to `modes`
/// doubles, and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gqpt_qform_eval(
    qform: *const GqptQForm,
    re: *const f64,
    im: *const f64,
    modes: usize,
    out: *mut f64,
) -> GqptStatus {
    guard(|| {
        let f = qform.as_ref().ok_or_else(|| null("qform"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if modes != f.inner.modes() {
            return Err(gqpt::Error::ModeMismatch { expected: f.inner.modes(), found: modes }.into());
        }
        *out = f.inner.eval(&read_amplitudes(re, im, modes)?);
        Ok(())
    })
}

/// Integral of `Q(z)` over phase space with measure `d^2z / pi` per mode.
///
/// # Safety
/// `qform` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gqpt_qform_normalization(qform: *const GqptQForm, out: *mut f64) -> GqptStatus {
    guard(|| {
        let f = qform.as_ref().ok_or_else(|| null("qform"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = f.inner.normalization_integral()?;
        Ok(())
    })
}

/// Canonical `qform` document; free with [`gqpt_string_free`].
///
/// # Safety
/// `qform` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gqpt_qform_to_json(qform: *const GqptQForm, out: *mut *mut c_char) -> GqptStatus {
    guard(|| {
        let f = qform.as_ref().ok_or_else(|| null("qform"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, io::encode(&f.inner)?)
    })
}

/// # Safety
/// `qform` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gqpt_qform_free(qform: *mut GqptQForm) {
    if !qform.is_null() {
        drop(Box::from_raw(qform));
    }
}
