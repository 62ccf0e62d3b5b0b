use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use wittcalc_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
    wc_string_free(s);
    text
}

unsafe fn last_error() -> String {
    let p = wc_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

unsafe fn form(field: &str, entries: &str) -> *mut WcForm {
    let mut f = ptr::null_mut();
    assert_eq!(wc_form_new(c(field).as_ptr(), c(entries).as_ptr(), &mut f), WcStatus::Ok);
    f
}

#[test]
fn lambda_through_handles() {
    unsafe {
        let q = form("q", "[2, 3, 5]");
        let mut l = ptr::null_mut();
        assert_eq!(wc_form_lambda(q, 2, &mut l), WcStatus::Ok);
        let mut dim = 0usize;
        assert_eq!(wc_form_dim(l, &mut dim), WcStatus::Ok);
        assert_eq!(dim, 3);
        let mut json = ptr::null_mut();
        assert_eq!(wc_form_to_json(l, &mut json), WcStatus::Ok);
        assert_eq!(take(json), "[6,10,15]");

        let expected = form("q", "[6, 10, 15]");
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(wc_form_witt_class(l, &mut a), WcStatus::Ok);
        assert_eq!(wc_form_witt_class(expected, &mut b), WcStatus::Ok);
        let mut equal = false;
        assert_eq!(wc_witt_eq(a, b, &mut equal), WcStatus::Ok);
        assert!(equal);
        let mut json = ptr::null_mut();
        assert_eq!(wc_witt_to_json(a, &mut json), WcStatus::Ok);
        assert!(take(json).contains("coeff"));
        for w in [a, b] {
            wc_witt_free(w);
        }
        for f in [q, l, expected] {
            wc_form_free(f);
        }
    }
}

#[test]
fn witt_equality_is_not_isometry() {
    unsafe {
        let (x, y) = (form("q", "[1, -1, 3]"), form("q", "[3]"));
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        wc_form_witt_class(x, &mut a);
        wc_form_witt_class(y, &mut b);
        let mut equal = false;
        assert_eq!(wc_witt_eq(a, b, &mut equal), WcStatus::Ok);
        assert!(equal);
        wc_witt_free(a);
        wc_witt_free(b);
        wc_form_free(x);
        wc_form_free(y);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(wc_form_new(ptr::null(), c("[1]").as_ptr(), &mut f), WcStatus::NullPointer);
        assert_eq!(wc_form_new(c("q").as_ptr(), c("[1,").as_ptr(), &mut f), WcStatus::ParseError);
        assert!(last_error().contains("malformed"));
        assert_eq!(wc_form_new(c("q").as_ptr(), c("[0]").as_ptr(), &mut f), WcStatus::DomainError);
        assert!(last_error().starts_with("ZeroElement"));
        assert_eq!(wc_form_new(c("z").as_ptr(), c("[1]").as_ptr(), &mut f), WcStatus::ParseError);
        assert!(f.is_null());

        let bad = [0xffu8, 0];
        assert_eq!(wc_form_new(bad.as_ptr().cast(), c("[1]").as_ptr(), &mut f), WcStatus::InvalidUtf8);

        let q = form("q", "[2, 3]");
        let mut l = ptr::null_mut();
        assert_eq!(wc_form_lambda(q, 5, &mut l), WcStatus::DomainError);
        assert!(last_error().starts_with("DegreeOutOfRange"));
        assert_eq!(wc_form_dim(q, ptr::null_mut()), WcStatus::NullPointer);
        let mut dim = 0;
        assert_eq!(wc_form_dim(q, &mut dim), WcStatus::Ok);
        assert!(wc_last_error_message().is_null());
        wc_form_free(q);
        wc_form_free(ptr::null_mut());
        wc_string_free(ptr::null_mut());
    }
}

#[test]
fn run_requests() {
    unsafe {
        let mut resp = ptr::null_mut();
        let mut code = -1;
        let req = c(r#"{"args": ["form", "lambda", "--json-indent", "0"], "input": {"form": [2, 3, 5], "d": 2}}"#);
        assert_eq!(wc_run(req.as_ptr(), &mut resp, &mut code), WcStatus::Ok);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&take(resp)).unwrap();
        assert_eq!(v["command"], "form lambda");
        assert_eq!(v["result"], serde_json::json!([6, 10, 15]));

        let req = c(r#"{"args": ["verify", "--suite", "lemma34", "--seed", "7"]}"#);
        assert_eq!(wc_run(req.as_ptr(), &mut resp, &mut code), WcStatus::Ok);
        assert_eq!(code, 0);
        take(resp);

        let req = c(r#"{"args": ["form", "lambda"], "input": {"form": [2], "d": 4}}"#);
        assert_eq!(wc_run(req.as_ptr(), &mut resp, &mut code), WcStatus::DomainError);
        assert_eq!(code, 2);
        let v: serde_json::Value = serde_json::from_str(&take(resp)).unwrap();
        assert_eq!(v["error"]["kind"], "DegreeOutOfRange");

        let req = c(r#"{"args": ["form", "nope"]}"#);
        assert_eq!(wc_run(req.as_ptr(), &mut resp, &mut code), WcStatus::ParseError);
        take(resp);
        assert_eq!(wc_run(c("[]").as_ptr(), &mut resp, &mut code), WcStatus::ParseError);
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(wc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/wittcalc.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in
        ["wc_run", "wc_form_new", "wc_witt_eq", "wc_string_free", "WC_STATUS_PANIC", "typedef struct WcForm WcForm"]
    {
        assert!(text.contains(name), "{name} missing from header");
    }
    let src = std::env::temp_dir().join(format!("wittcalc-header-{}.c", std::process::id()));
    std::fs::write(&src, "#include \"wittcalc.h\"\nint main(void) { return WC_STATUS_OK; }\n").unwrap();
    let status = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&src)
        .status();
    let _ = std::fs::remove_file(&src);
    match status {
        Ok(s) => assert!(s.success()),
        Err(e) => eprintln!("skipping C compile: {e}"),
    }
}
