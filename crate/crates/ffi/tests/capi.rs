use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use jlparity_ffi::*;

struct Ctx(*mut JlpContext);

impl Ctx {
    fn new() -> Ctx {
        let mut p = ptr::null_mut();
        assert_eq!(unsafe { jlp_context_new(&mut p) }, JlpStatus::Ok);
        Ctx(p)
    }

    fn error(&self) -> String {
        let e = unsafe { jlp_last_error(self.0) };
        assert!(!e.is_null());
        unsafe { CStr::from_ptr(e) }.to_string_lossy().into_owned()
    }
}

impl Drop for Ctx {
    fn drop(&mut self) {
        unsafe { jlp_context_free(self.0) };
    }
}

#[test]
fn evaluate_split_quadratic() {
    let ctx = Ctx::new();
    let mut out = JlpInstance::default();
    let s = unsafe { jlp_evaluate(ctx.0, JlpCase::Split, 3, 2, 0, 1, 8, 2, &mut out) };
    assert_eq!(s, JlpStatus::Ok);
    assert_eq!(out, JlpInstance { csd: true, brute: -1, closed: -1, predicted_rec: 1, consistent: true });
}

#[test]
fn non_self_dual_has_zero_signs() {
    let ctx = Ctx::new();
    let mut out = JlpInstance::default();
    let s = unsafe { jlp_evaluate(ctx.0, JlpCase::Split, 3, 2, 0, 1, 8, 0, &mut out) };
    assert_eq!(s, JlpStatus::Ok);
    assert!(!out.csd && out.brute == 0 && out.consistent);
}

#[test]
fn sweep_one_point() {
    let ctx = Ctx::new();
    assert_eq!(unsafe { jlp_set_point(ctx.0, JlpCase::Split, 3, 2) }, JlpStatus::Ok);
    let mut text = ptr::null();
    let mut count = 0usize;
    let mut ok = false;
    assert_eq!(unsafe { jlp_sweep(ctx.0, &mut text, &mut count, &mut ok) }, JlpStatus::Ok);
    assert_eq!(count, 8);
    assert!(ok);
    let body = unsafe { CStr::from_ptr(text) }.to_str().unwrap();
    assert_eq!(body.lines().count(), 8);
    assert!(body.lines().all(|l| l.contains("\"consistent\":true")));
}

#[test]
fn errors_are_reported() {
    let ctx = Ctx::new();
    assert_eq!(unsafe { jlp_set_point(ctx.0, JlpCase::Split, 7, 4) }, JlpStatus::UnsupportedRange);
    assert!(ctx.error().contains("exceeds"));
    assert_eq!(unsafe { jlp_set_point(ctx.0, JlpCase::Ramified, 4, 1) }, JlpStatus::InvalidArgument);
    assert_eq!(unsafe { jlp_set_point(ctx.0, JlpCase::Split, 3, 2) }, JlpStatus::Ok);
    assert!(unsafe { jlp_last_error(ctx.0) }.is_null());
    let mut out = JlpInstance::default();
    assert_eq!(unsafe { jlp_evaluate(ctx.0, JlpCase::Split, 3, 2, 0, 0, 0, 0, &mut out) }, JlpStatus::InvalidArgument);
}

#[test]
fn null_handles() {
    let mut out = JlpInstance::default();
    assert_eq!(
        unsafe { jlp_evaluate(ptr::null_mut(), JlpCase::Split, 3, 2, 0, 0, 8, 0, &mut out) },
        JlpStatus::NullPointer
    );
    assert_eq!(unsafe { jlp_context_new(ptr::null_mut()) }, JlpStatus::NullPointer);
    assert!(unsafe { jlp_last_error(ptr::null()) }.is_null());
    unsafe { jlp_context_free(ptr::null_mut()) };
    let ctx = Ctx::new();
    assert_eq!(
        unsafe { jlp_evaluate(ctx.0, JlpCase::Split, 3, 2, 0, 0, 8, 0, ptr::null_mut()) },
        JlpStatus::NullPointer
    );
}

#[test]
fn parse_case_and_version() {
    let mut c = JlpCase::Split;
    assert_eq!(unsafe { jlp_parse_case(c"unramified".as_ptr(), &mut c) }, JlpStatus::Ok);
    assert_eq!(c, JlpCase::Unramified);
    assert_eq!(unsafe { jlp_parse_case(c"inert".as_ptr(), &mut c) }, JlpStatus::InvalidArgument);
    let v = unsafe { CStr::from_ptr(jlp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/jlparity.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["jlp_context_new", "jlp_evaluate", "jlp_sweep", "jlp_last_error", "JLP_STATUS_UNSUPPORTED_RANGE"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let Ok(out) =
        Command::new("cc").args(["-fsyntax-only", "-std=c99", "-Wall", "-Werror", "-xc"]).arg(&header).output()
    else {
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
