//! C ABI over `bhfi`.
//!
//! Structures are opaque handles owned by the caller and released with
//! [`bhfi_structure_free`]. Every call returns a [`BhfiStatus`]; on failure the
//! message is available from [`bhfi_last_error`] until the next call on the
//! same thread. Strings returned through out-parameters are released with
//! [`bhfi_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bhfi::equivalence::homology_basis_of_mor;
use bhfi::involutive::iota_on_mor;
use bhfi::io::{builtin, structure_from_json, structure_to_json, StructureJson};
use bhfi::structures::{box_tensor, check_structure, Kind, Structure};
use bhfi::Error;

/// Status codes. Values 2 to 5 match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BhfiStatus {
    /// Success.
    Ok = 0,
    /// A required pointer was null or a string was not UTF-8.
    BadArgument = 1,
    /// Malformed input.
    Parse = 2,
    /// Structure relations or chain map conditions fail.
    Relation = 3,
    /// An equivalence search failed.
    Search = 4,
    /// A size cap was exceeded.
    Divergence = 5,
    /// Internal error.
    Panic = 6,
}

/// Opaque bordered structure.
pub struct BhfiStructure {
    inner: Structure,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BhfiStatus {
    match e.exit_code() {
        2 => BhfiStatus::Parse,
        3 => BhfiStatus::Relation,
        4 => BhfiStatus::Search,
        5 => BhfiStatus::Divergence,
        _ => BhfiStatus::BadArgument,
    }
}

fn guard<F: FnOnce() -> Result<(), BhfiStatus>>(f: F) -> BhfiStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BhfiStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            BhfiStatus::Panic
        }
    }
}

fn lift<T>(r: bhfi::Result<T>) -> Result<T, BhfiStatus> {
    r.map_err(|e| {
        let s = status_of(&e);
        set_error(e.to_string());
        s
    })
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, BhfiStatus> {
    if p.is_null() {
        set_error("null string".into());
        return Err(BhfiStatus::BadArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string is not UTF-8".into());
        BhfiStatus::BadArgument
    })
}

unsafe fn handle<'a>(p: *const BhfiStructure) -> Result<&'a Structure, BhfiStatus> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| {
        set_error("null structure handle".into());
        BhfiStatus::BadArgument
    })
}

fn out_ptr<T>(p: *mut T) -> Result<(), BhfiStatus> {
    if p.is_null() {
        set_error("null output pointer".into());
        Err(BhfiStatus::BadArgument)
    } else {
        Ok(())
    }
}

fn give_string(s: String, out: *mut *mut c_char) {
    let c = CString::new(s).unwrap_or_default();
    unsafe { *out = c.into_raw() };
}

/// Message of the last failure on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn bhfi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a structure file's contents and checks its relations.
#[no_mangle]
pub unsafe extern "C" fn bhfi_structure_from_json(json: *const c_char, out: *mut *mut BhfiStructure) -> BhfiStatus {
    guard(|| {
        out_ptr(out)?;
        let text = str_arg(json)?;
        let j: StructureJson = lift(serde_json::from_str(text).map_err(Error::from))?;
        let s = lift(structure_from_json(&j))?;
        let v = check_structure(&s);
        if let Some(first) = v.first() {
            set_error(format!("{} violations, first: {}", v.len(), first.message));
            return Err(BhfiStatus::Relation);
        }
        *out = Box::into_raw(Box::new(BhfiStructure { inner: s }));
        Ok(())
    })
}

/// Builds a named standard object (`cfd0`, `cfa0_k2`, `az_k1`, ...).
#[no_mangle]
pub unsafe extern "C" fn bhfi_structure_builtin(name: *const c_char, out: *mut *mut BhfiStructure) -> BhfiStatus {
    guard(|| {
        out_ptr(out)?;
        let s = lift(builtin(str_arg(name)?))?;
        *out = Box::into_raw(Box::new(BhfiStructure { inner: s }));
        Ok(())
    })
}

/// Releases a structure. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bhfi_structure_free(s: *mut BhfiStructure) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of generators.
#[no_mangle]
pub unsafe extern "C" fn bhfi_structure_len(s: *const BhfiStructure, out: *mut usize) -> BhfiStatus {
    guard(|| {
        out_ptr(out)?;
        *out = handle(s)?.len();
        Ok(())
    })
}

/// Serializes a structure to the file format.
#[no_mangle]
pub unsafe extern "C" fn bhfi_structure_to_json(s: *const BhfiStructure, out: *mut *mut c_char) -> BhfiStatus {
    guard(|| {
        out_ptr(out)?;
        let j = lift(structure_to_json(handle(s)?))?;
        give_string(serde_json::to_string(&j).unwrap_or_default(), out);
        Ok(())
    })
}

/// Number of structure relation violations (0 means valid).
#[no_mangle]
pub unsafe extern "C" fn bhfi_structure_check(s: *const BhfiStructure, violations: *mut usize) -> BhfiStatus {
    guard(|| {
        out_ptr(violations)?;
        *violations = check_structure(handle(s)?).len();
        Ok(())
    })
}

/// Homology dimension of the gluing: type D with type D through morphisms,
/// or type A with type D through the box tensor product.
#[no_mangle]
pub unsafe extern "C" fn bhfi_hfhat(a: *const BhfiStructure, d: *const BhfiStructure, out: *mut usize) -> BhfiStatus {
    guard(|| {
        out_ptr(out)?;
        let (a, d) = (handle(a)?, handle(d)?);
        *out = match (a.kind, d.kind) {
            (Kind::A, Kind::D) => lift(box_tensor(a, d))?.0.to_chain_complex().homology().dim,
            (Kind::D, Kind::D) => lift(homology_basis_of_mor(a, d))?.dim(),
            _ => {
                set_error("expected (A, D) or (D, D)".into());
                return Err(BhfiStatus::BadArgument);
            }
        };
        Ok(())
    })
}

/// Involutive report for two type D structures, as a JSON string.
#[no_mangle]
pub unsafe extern "C" fn bhfi_hfihat(
    p0: *const BhfiStructure,
    p1: *const BhfiStructure,
    max_sum: usize,
    out: *mut *mut c_char,
) -> BhfiStatus {
    guard(|| {
        out_ptr(out)?;
        let run = lift(iota_on_mor(handle(p0)?, handle(p1)?, max_sum))?;
        give_string(run.report.to_json(), out);
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bhfi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
