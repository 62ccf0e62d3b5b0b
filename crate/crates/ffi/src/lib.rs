//! C ABI for `wittcalc`.
//!
//! Every entry point returns a [`WcStatus`]. On failure the message is kept in a
//! thread-local slot readable through [`wc_last_error_message`]. Handles and
//! strings handed out by this library must be released with the matching
//! `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::Value;
use wittcalc::cli::run_with_input;
use wittcalc::field::FieldDescriptor;
use wittcalc::json::{form_from_json, form_to_json, witt_to_json};
use wittcalc::witt::{lambda_power_form, witt_eq, DiagonalForm, WittClass};
use wittcalc::Error;

/// Result codes shared by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    DomainError = 4,
    VerificationFailed = 5,
    Panic = 6,
}

/// Opaque diagonal quadratic form.
pub struct WcForm(DiagonalForm);

/// Opaque Witt class.
pub struct WcWittClass(WittClass);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(WcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidInput(_) | Error::BadBackend(_) => WcStatus::ParseError,
            _ => WcStatus::DomainError,
        };
        Fail(status, format!("{}: {e}", e.kind()))
    }
}

/// Run `f`, translating errors and panics into a status plus the last-error slot.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> WcStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            WcStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(WcStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(WcStatus::InvalidUtf8, e.to_string()))
}

fn parse(s: &str) -> Result<Value, Fail> {
    serde_json::from_str(s).map_err(|e| Fail(WcStatus::ParseError, format!("malformed JSON: {e}")))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NULs removed").into_raw()
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(null)
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

/// Message for the last failure on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn wc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Run one command-line request.
///
/// `request` is `{"args": [...], "input": <payload>}`; `args` omits the program
/// name and `input` is optional. `*response` receives the JSON report and
/// `*exit_code` the process exit status the command line would return.
///
/// # Safety
/// `request` must be a NUL-terminated string; `response` and `exit_code` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_run(request: *const c_char, response: *mut *mut c_char, exit_code: *mut i32) -> WcStatus {
    guard(|| {
        let req = parse(text(request)?)?;
        let response = out(response)?;
        let exit_code = out(exit_code)?;
        let args = req
            .get("args")
            .and_then(Value::as_array)
            .ok_or_else(|| Fail(WcStatus::ParseError, "request needs an \"args\" array".into()))?
            .iter()
            .map(|a| a.as_str().map(str::to_owned))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Fail(WcStatus::ParseError, "args must be strings".into()))?;
        let input = req.get("input").map(Value::to_string);
        let outcome = run_with_input(std::iter::once("wittcalc".to_string()).chain(args), input.as_deref());
        *exit_code = outcome.code;
        *response = to_c(outcome.stdout.clone());
        match outcome.code {
            0 => Ok(()),
            1 => Err(Fail(WcStatus::VerificationFailed, "verification failed".into())),
            _ => {
                let v: Value = serde_json::from_str(&outcome.stdout).unwrap_or(Value::Null);
                let kind = v["error"]["kind"].as_str().unwrap_or("");
                let msg = v["error"]["message"].as_str().unwrap_or(&outcome.stdout).to_string();
                let status = if matches!(kind, "InvalidInput" | "UsageError" | "BadBackend") {
                    WcStatus::ParseError
                } else {
                    WcStatus::DomainError
                };
                Err(Fail(status, format!("{kind}: {msg}")))
            }
        }
    })
}

/// Parse a diagonal form. `field` is `q`, `fp:<p>`, `r` or `formal:<g>`; `entries`
/// is a JSON array of square classes.
///
/// # Safety
/// Both strings must be NUL-terminated; `form` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_form_new(field: *const c_char, entries: *const c_char, form: *mut *mut WcForm) -> WcStatus {
    guard(|| {
        let f: FieldDescriptor = text(field)?.parse()?;
        let q = form_from_json(f, &parse(text(entries)?)?)?;
        *out(form)? = Box::into_raw(Box::new(WcForm(q)));
        Ok(())
    })
}

/// # Safety
/// `form` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wc_form_free(form: *mut WcForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// # Safety
/// `form` must be a live handle; `dim` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_form_dim(form: *const WcForm, dim: *mut usize) -> WcStatus {
    guard(|| {
        *out(dim)? = handle(form)?.0.dim();
        Ok(())
    })
}

/// The exterior power form of degree `d`.
///
/// # Safety
/// `form` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_form_lambda(form: *const WcForm, d: usize, result: *mut *mut WcForm) -> WcStatus {
    guard(|| {
        let q = lambda_power_form(&handle(form)?.0, d)?;
        *out(result)? = Box::into_raw(Box::new(WcForm(q)));
        Ok(())
    })
}

/// The form's entries as a JSON array. Release with [`wc_string_free`].
///
/// # Safety
/// `form` must be a live handle; `json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_form_to_json(form: *const WcForm, json: *mut *mut c_char) -> WcStatus {
    guard(|| {
        *out(json)? = to_c(form_to_json(&handle(form)?.0).to_string());
        Ok(())
    })
}

/// # Safety
/// `form` must be a live handle; `class` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_form_witt_class(form: *const WcForm, class: *mut *mut WcWittClass) -> WcStatus {
    guard(|| {
        let w = WittClass::from_form(&handle(form)?.0);
        *out(class)? = Box::into_raw(Box::new(WcWittClass(w)));
        Ok(())
    })
}

/// # Safety
/// `class` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wc_witt_free(class: *mut WcWittClass) {
    if !class.is_null() {
        drop(Box::from_raw(class));
    }
}

/// Equality in the Witt ring.
///
/// # Safety
/// `a` and `b` must be live handles; `equal` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_witt_eq(a: *const WcWittClass, b: *const WcWittClass, equal: *mut bool) -> WcStatus {
    guard(|| {
        *out(equal)? = witt_eq(&handle(a)?.0, &handle(b)?.0)?;
        Ok(())
    })
}

/// The class as a JSON array of `{class, coeff}` terms. Release with [`wc_string_free`].
///
/// # Safety
/// `class` must be a live handle; `json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_witt_to_json(class: *const WcWittClass, json: *mut *mut c_char) -> WcStatus {
    guard(|| {
        *out(json)? = to_c(witt_to_json(&handle(class)?.0).to_string());
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
