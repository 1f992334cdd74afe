//! C ABI for the engine.
//!
//! Pattern: JSON in, JSON out, opaque handles, integer error codes.
//!
//! * [`cleft_parse`] validates an instance (running every verification
//!   suite eagerly) and returns an opaque handle.
//! * [`cleft_command`] runs one named command against a handle and returns
//!   a JSON report string (checks plus dimension tables), matching the CLI
//!   `--json` output.
//! * All returned strings are owned by the library and must be released
//!   with [`cleft_string_free`]; handles with [`cleft_free`].
//! * On any failure, [`cleft_last_error`] returns a thread-local message
//!   valid until the next call on the same thread.
//!
//! Error codes mirror the CLI exit codes: `0` success, `1` a reported
//! check failed, `2` malformed input, `3` axiom violation, `4` unsupported
//! input.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};

use cleft_core::algebra::Side;
use cleft_core::cleft::{cleft_chains, tail_homology_module};
use cleft_core::cleft_cochain::cleft_cochains;
use cleft_core::complex::{cyclic_homology_dims, CyclicKind};
use cleft_core::cyclic::cleft_mixed;
use cleft_core::field::{Fp, Rat};
use cleft_core::hopf_homology::{
    cohomology_of_module, counit_module, homology_of_module, trivial_representation,
};
use cleft_core::instance::{validate, FieldDesc, InstanceError, InstanceFile, ParsedInstance};
use cleft_core::report::Check;
use serde::Serialize;

pub const CLEFT_OK: i32 = 0;
pub const CLEFT_ERR_CHECKS: i32 = 1;
pub const CLEFT_ERR_PARSE: i32 = 2;
pub const CLEFT_ERR_AXIOM: i32 = 3;
pub const CLEFT_ERR_UNSUPPORTED: i32 = 4;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn code_of(err: &InstanceError) -> i32 {
    match err {
        InstanceError::Parse(_) => CLEFT_ERR_PARSE,
        InstanceError::Axiom { .. } => CLEFT_ERR_AXIOM,
        InstanceError::Unsupported(_) => CLEFT_ERR_UNSUPPORTED,
    }
}

enum Parsed {
    Q(ParsedInstance<Rat>),
    P(ParsedInstance<Fp>),
}

/// An opaque, fully validated instance.
pub struct CleftInstance {
    parsed: Parsed,
}

#[derive(Serialize)]
struct Report {
    command: String,
    checks: Vec<Check>,
    dims: BTreeMap<String, Vec<usize>>,
    notes: BTreeMap<String, String>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            checks: Vec::new(),
            dims: BTreeMap::new(),
            notes: BTreeMap::new(),
        }
    }
}

/// Parses and validates an instance from a JSON string.  On success writes
/// a handle to `out` and returns 0; otherwise returns an error code and
/// leaves a message for [`cleft_last_error`].
///
/// # Safety
/// `json` must be a valid NUL-terminated C string; `out` must be a valid
/// pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn cleft_parse(json: *const c_char, out: *mut *mut CleftInstance) -> i32 {
    if json.is_null() || out.is_null() {
        set_error("null argument");
        return CLEFT_ERR_PARSE;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("input is not valid UTF-8");
            return CLEFT_ERR_PARSE;
        }
    };
    let file: InstanceFile = match serde_json::from_str(text) {
        Ok(f) => f,
        Err(e) => {
            set_error(&format!("invalid JSON: {e}"));
            return CLEFT_ERR_PARSE;
        }
    };
    let parsed = match &file.field {
        FieldDesc::Name(_) => validate::<Rat>(&file).map(Parsed::Q),
        FieldDesc::Prime { .. } => validate::<Fp>(&file).map(Parsed::P),
    };
    match parsed {
        Ok(p) => {
            *out = Box::into_raw(Box::new(CleftInstance { parsed: p }));
            CLEFT_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            code_of(&e)
        }
    }
}

/// Releases a handle returned by [`cleft_parse`].  `NULL` is ignored.
///
/// # Safety
/// `handle` must be a pointer previously returned by [`cleft_parse`] and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cleft_free(handle: *mut CleftInstance) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Releases a string returned by [`cleft_command`].  `NULL` is ignored.
///
/// # Safety
/// `s` must be a pointer previously returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn cleft_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The last error message on this thread, valid until the next library
/// call on the same thread.  Never `NULL`.
#[no_mangle]
pub extern "C" fn cleft_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Runs a command (`"verify"`, `"hh"`, `"hcoh"`, `"whh"`, `"whcoh"`,
/// `"cyclic"`) against a handle.  `nmax` bounds the reported degrees;
/// `trunc` is the truncation level for the negative/periodic towers
/// (ignored elsewhere).  On success writes a JSON report to `out_json`
/// (release with [`cleft_string_free`]) and returns 0, or 1 if the report
/// contains a failed check (the report is still written).
///
/// # Safety
/// `handle` must be a live handle from [`cleft_parse`]; `command` a valid
/// NUL-terminated C string; `out_json` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cleft_command(
    handle: *const CleftInstance,
    command: *const c_char,
    nmax: usize,
    trunc: usize,
    out_json: *mut *mut c_char,
) -> i32 {
    if handle.is_null() || command.is_null() || out_json.is_null() {
        set_error("null argument");
        return CLEFT_ERR_PARSE;
    }
    let cmd = match CStr::from_ptr(command).to_str() {
        Ok(c) => c,
        Err(_) => {
            set_error("command is not valid UTF-8");
            return CLEFT_ERR_PARSE;
        }
    };
    let inst = &*handle;
    let result = match &inst.parsed {
        Parsed::Q(p) => run_command(p, cmd, nmax, trunc),
        Parsed::P(p) => run_command(p, cmd, nmax, trunc),
    };
    match result {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("report serialization");
            *out_json = CString::new(text).expect("report contains no NUL").into_raw();
            if report.checks.iter().all(|c| c.ok) {
                CLEFT_OK
            } else {
                set_error("a reported check failed");
                CLEFT_ERR_CHECKS
            }
        }
        Err(e) => {
            set_error(&e.to_string());
            code_of(&e)
        }
    }
}

fn run_command<F: cleft_core::instance::JsonScalar>(
    p: &ParsedInstance<F>,
    cmd: &str,
    nmax: usize,
    trunc: usize,
) -> Result<Report, InstanceError> {
    let unsupported = |e: String| InstanceError::Unsupported(e);
    let mut report = Report::new(cmd);
    match cmd {
        "verify" => {
            let m = &p.measure;
            report.checks.extend(m.hopf.verify("H"));
            report.checks.extend(m.hopf.verify_structure_identities("H"));
            report.checks.extend(m.verify_weak_module_algebra("action"));
            report.checks.extend(p.cocycle.verify(m, "cocycle"));
            report.checks.extend(cleft_core::crossed::verify_crossed_hypotheses(
                m,
                &p.cocycle.f,
                "crossed product",
            ));
            report.checks.extend(p.ctx.cp.verify_bundle("crossed product"));
            report.notes.insert("E dimension".into(), p.ctx.cp.dim().to_string());
            report.notes.insert("K dimension".into(), p.ctx.k.basis.len().to_string());
        }
        "hh" => {
            let chains = cleft_chains(&p.ctx, &p.module, nmax + 1).map_err(unsupported)?;
            report.checks.push(chains.total.verify_complex("reduced complex"));
            report.dims.insert("H_n".into(), chains.total.homology_dims(nmax));
        }
        "hcoh" => {
            let cochains = cleft_cochains(&p.ctx, &p.module, nmax + 1).map_err(unsupported)?;
            report.checks.push(cochains.total.verify_complex("reduced cochain complex"));
            report.dims.insert("H^n".into(), cochains.total.cohomology_dims(nmax));
        }
        "whh" => {
            let h = p.ctx.hopf();
            report.dims.insert("H_n(H, M)".into(), homology_of_module(h, &trivial_representation(h), nmax));
            let tail0 = tail_homology_module(&p.ctx, &p.module, 0);
            report
                .dims
                .insert("H_n(H, tail)".into(), homology_of_module(h, &tail0.module, nmax));
        }
        "whcoh" => {
            let h = p.ctx.hopf();
            report.dims.insert(
                "H^n(H, M)".into(),
                cohomology_of_module(h, &counit_module(h, Side::Right), nmax),
            );
        }
        "cyclic" => {
            if !p.module_is_regular {
                return Err(InstanceError::Unsupported(
                    "the cyclic theory is defined for the regular module M = E only".into(),
                ));
            }
            let mixed = cleft_mixed(&p.ctx, nmax + 2).map_err(unsupported)?;
            report.checks.extend(mixed.verify("mixed complex"));
            let (hc, hc_flag) = cyclic_homology_dims(&mixed, CyclicKind::Cyclic, nmax, 0);
            let (hn, hn_flag) = cyclic_homology_dims(&mixed, CyclicKind::Negative, nmax, trunc);
            let (hp, hp_flag) = cyclic_homology_dims(&mixed, CyclicKind::Periodic, nmax, trunc);
            report.dims.insert("HC_n".into(), hc);
            report.dims.insert("HN_n".into(), hn);
            report.dims.insert("HP_n".into(), hp);
            report.notes.insert("HC_n status".into(), hc_flag.into());
            report.notes.insert("HN_n status".into(), hn_flag.into());
            report.notes.insert("HP_n status".into(), hp_flag.into());
        }
        other => {
            return Err(InstanceError::Parse(format!(
                "unknown command {other:?}; expected verify, hh, hcoh, whh, whcoh, or cyclic"
            )))
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cleft_core::builders::sign_smash_measure;
    use cleft_core::instance::instance_of_measure;
    use std::ptr;

    fn smash_json() -> CString {
        let m = sign_smash_measure::<Rat>();
        let file = instance_of_measure(FieldDesc::Name("Q".into()), &m, None);
        CString::new(serde_json::to_string(&file).unwrap()).unwrap()
    }

    #[test]
    fn parse_command_and_free_round_trip() {
        let json = smash_json();
        let mut handle: *mut CleftInstance = ptr::null_mut();
        assert_eq!(unsafe { cleft_parse(json.as_ptr(), &mut handle) }, CLEFT_OK);
        assert!(!handle.is_null());

        let cmd = CString::new("hh").unwrap();
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { cleft_command(handle, cmd.as_ptr(), 3, 1, &mut out) }, CLEFT_OK);
        let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(text).unwrap();
        assert_eq!(v["dims"]["H_n"], serde_json::json!([2, 1, 1, 1]));
        unsafe { cleft_string_free(out) };

        let bad = CString::new("nope").unwrap();
        let mut out2: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { cleft_command(handle, bad.as_ptr(), 1, 0, &mut out2) },
            CLEFT_ERR_PARSE
        );
        assert!(out2.is_null());
        let msg = unsafe { CStr::from_ptr(cleft_last_error()) }.to_str().unwrap();
        assert!(msg.contains("unknown command"));

        unsafe { cleft_free(handle) };
    }

    #[test]
    fn parse_errors_are_classified() {
        let mut handle: *mut CleftInstance = ptr::null_mut();
        let garbage = CString::new("{ not json").unwrap();
        assert_eq!(unsafe { cleft_parse(garbage.as_ptr(), &mut handle) }, CLEFT_ERR_PARSE);

        // Corrupt the counit: axiom failure with a named check.
        let m = sign_smash_measure::<Rat>();
        let mut file = instance_of_measure(FieldDesc::Name("Q".into()), &m, None);
        file.hopf.counit[1] = serde_json::Value::String("2".into());
        let text = CString::new(serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(unsafe { cleft_parse(text.as_ptr(), &mut handle) }, CLEFT_ERR_AXIOM);
        let msg = unsafe { CStr::from_ptr(cleft_last_error()) }.to_str().unwrap();
        assert!(msg.contains("counit"), "message: {msg}");
    }
}
