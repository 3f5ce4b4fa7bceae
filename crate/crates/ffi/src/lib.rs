//! C interface to `jlparity`.
//!
//! All state lives behind an opaque [`JlpContext`]. Every call returns a
//! [`JlpStatus`]; on failure [`jlp_last_error`] describes the cause. Strings
//! handed out by the library are owned by the context and stay valid until the
//! next call on that context.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use jlparity::division::Case;
use jlparity::harness::{evaluate_point, run_sweep, write_records, Format, GridPoint, InstanceRecord, RunConfig};
use jlparity::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JlpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnsupportedRange = 3,
    Internal = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JlpCase {
    Split = 0,
    Ramified = 1,
    Unramified = 2,
}

impl From<JlpCase> for Case {
    fn from(c: JlpCase) -> Case {
        match c {
            JlpCase::Split => Case::Split,
            JlpCase::Ramified => Case::Ramified,
            JlpCase::Unramified => Case::Unramified,
        }
    }
}

/// Result for one `(zeta, chi, c)`. Signs are `+1`/`-1`, or `0` when undefined.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct JlpInstance {
    pub csd: bool,
    pub brute: i8,
    pub closed: i8,
    pub predicted_rec: i8,
    pub consistent: bool,
}

impl From<&InstanceRecord> for JlpInstance {
    fn from(r: &InstanceRecord) -> Self {
        JlpInstance {
            csd: r.csd,
            brute: r.c_jl_brute.unwrap_or(0),
            closed: r.c_jl_closed.unwrap_or(0),
            predicted_rec: r.c_rec_predicted.unwrap_or(0),
            consistent: r.consistent,
        }
    }
}

/// Opaque handle.
pub struct JlpContext {
    config: RunConfig,
    last_error: Option<CString>,
    output: Option<CString>,
}

impl JlpContext {
    fn fail(&mut self, status: JlpStatus, msg: impl Into<String>) -> JlpStatus {
        let msg = msg.into().replace('\0', " ");
        self.last_error = CString::new(msg).ok();
        status
    }

    fn fail_with(&mut self, e: Error) -> JlpStatus {
        let status = match e {
            Error::UnsupportedRange(_) | Error::FieldTooLarge { .. } => JlpStatus::UnsupportedRange,
            Error::InvalidParameters(_) | Error::NotPrime(_) | Error::NotPrimePower(_) => JlpStatus::InvalidArgument,
            _ => JlpStatus::Internal,
        };
        self.fail(status, e.to_string())
    }
}

fn guarded(ctx: *mut JlpContext, f: impl FnOnce(&mut JlpContext) -> JlpStatus) -> JlpStatus {
    // SAFETY: the caller passes a pointer from `jlp_context_new` or null.
    let Some(ctx) = (unsafe { ctx.as_mut() }) else {
        return JlpStatus::NullPointer;
    };
    ctx.last_error = None;
    match catch_unwind(AssertUnwindSafe(|| f(&mut *ctx))) {
        Ok(s) => s,
        Err(_) => ctx.fail(JlpStatus::Panic, "internal panic"),
    }
}

/// Version string, statically allocated.
#[no_mangle]
pub extern "C" fn jlp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a context with the default sweep configuration.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jlp_context_new(out: *mut *mut JlpContext) -> JlpStatus {
    if out.is_null() {
        return JlpStatus::NullPointer;
    }
    let ctx = Box::new(JlpContext { config: RunConfig::default(), last_error: None, output: None });
    *out = Box::into_raw(ctx);
    JlpStatus::Ok
}

/// # Safety
/// `ctx` must be null or come from [`jlp_context_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jlp_context_free(ctx: *mut JlpContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Message for the last failed call on `ctx`, or null.
///
/// # Safety
/// `ctx` must be null or a live context.
#[no_mangle]
pub unsafe extern "C" fn jlp_last_error(ctx: *const JlpContext) -> *const c_char {
    match ctx.as_ref().and_then(|c| c.last_error.as_ref()) {
        Some(s) => s.as_ptr(),
        None => ptr::null(),
    }
}

/// Restricts sweeps to one `(case, q, n)`.
///
/// # Safety
/// `ctx` must be null or a live context.
#[no_mangle]
pub unsafe extern "C" fn jlp_set_point(ctx: *mut JlpContext, case: JlpCase, q: u64, n: u32) -> JlpStatus {
    guarded(ctx, |c| {
        let pt = GridPoint { case: case.into(), q, n };
        if let Err(e) = pt.check_range() {
            return c.fail_with(e);
        }
        c.config.cases = vec![pt.case];
        c.config.q = Some(vec![q]);
        c.config.qprime = None;
        c.config.n = Some(vec![n]);
        JlpStatus::Ok
    })
}

/// Order of the roots of unity `c`; `0` restores the default `4(q-1)`.
///
/// # Safety
/// `ctx` must be null or a live context.
#[no_mangle]
pub unsafe extern "C" fn jlp_set_c_order(ctx: *mut JlpContext, c_order: u64) -> JlpStatus {
    guarded(ctx, |c| {
        c.config.c_order = (c_order != 0).then_some(c_order);
        JlpStatus::Ok
    })
}

/// Evaluates one triple `zeta = g^zeta_dlog`, `chi(g) = e(chi_exp/(q-1))`, `c = e(c_exp/c_order)`.
///
/// # Safety
/// `ctx` must be null or a live context; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jlp_evaluate(
    ctx: *mut JlpContext,
    case: JlpCase,
    q: u64,
    n: u32,
    zeta_dlog: u64,
    chi_exp: u64,
    c_order: u64,
    c_exp: u64,
    out: *mut JlpInstance,
) -> JlpStatus {
    guarded(ctx, |c| {
        let Some(out) = out.as_mut() else {
            return c.fail(JlpStatus::NullPointer, "out is null");
        };
        let pt = GridPoint { case: case.into(), q, n };
        match evaluate_point(pt, c.config.m, zeta_dlog, chi_exp, c_order, c_exp) {
            Ok(r) => {
                if let Some(e) = &r.error {
                    return c.fail(JlpStatus::Internal, e.clone());
                }
                *out = JlpInstance::from(&r);
                JlpStatus::Ok
            }
            Err(e) => c.fail_with(e),
        }
    })
}

/// Runs the configured sweep. `records` receives JSON lines owned by `ctx`;
/// `count` the number of records; `all_consistent` whether every record passed.
///
/// # Safety
/// `ctx` must be null or a live context; the out pointers must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jlp_sweep(
    ctx: *mut JlpContext,
    records: *mut *const c_char,
    count: *mut usize,
    all_consistent: *mut bool,
) -> JlpStatus {
    guarded(ctx, |c| {
        if records.is_null() || count.is_null() || all_consistent.is_null() {
            return c.fail(JlpStatus::NullPointer, "output pointer is null");
        }
        let s = match run_sweep(&c.config) {
            Ok(s) => s,
            Err(e) => return c.fail_with(e),
        };
        let mut buf = Vec::new();
        if let Err(e) = write_records(&s.records, Format::Jsonl, &mut buf) {
            return c.fail_with(e);
        }
        let Ok(text) = CString::new(buf) else {
            return c.fail(JlpStatus::Internal, "record text contains NUL");
        };
        *count = s.records.len();
        *all_consistent = s.all_consistent();
        *records = text.as_ptr();
        c.output = Some(text);
        JlpStatus::Ok
    })
}

/// Parses a case name (`split`, `ramified`, `unramified`).
///
/// # Safety
/// `name` must be null or a NUL-terminated string; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jlp_parse_case(name: *const c_char, out: *mut JlpCase) -> JlpStatus {
    if name.is_null() || out.is_null() {
        return JlpStatus::NullPointer;
    }
    let Ok(s) = CStr::from_ptr(name).to_str() else {
        return JlpStatus::InvalidArgument;
    };
    *out = match s.parse::<Case>() {
        Ok(Case::Split) => JlpCase::Split,
        Ok(Case::Ramified) => JlpCase::Ramified,
        Ok(Case::Unramified) => JlpCase::Unramified,
        Err(_) => return JlpStatus::InvalidArgument,
    };
    JlpStatus::Ok
}
