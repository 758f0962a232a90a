//! C ABI over `sulcheck`.
//!
//! Models and formulas cross the boundary as opaque handles created by the
//! `*_parse` functions and released by the matching `*_free`. Every fallible
//! call returns a [`SulStatus`]; on failure a message is available from
//! [`sul_last_error`] on the same thread until the next failing call.
//! Strings returned to the caller are released with [`sul_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sulcheck::checker::{check, CheckError, CheckerConfig};
use sulcheck::cli::CheckReport;
use sulcheck::model::{model_size, parse_model_document, Model, PointedModel, StateId};
use sulcheck::syntax::{parse_formula, to_nnf, Formula};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SulStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ModelError = 4,
    ResourceCap = 5,
    Panic = 6,
}

/// A parsed model file with its optional designated point.
pub struct SulModel {
    model: Model,
    point: Option<StateId>,
}

pub struct SulFormula {
    formula: Formula,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: SulStatus, msg: impl Into<String>) -> SulStatus {
    set_error(msg);
    status
}

fn guarded(f: impl FnOnce() -> SulStatus) -> SulStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(SulStatus::Panic, "internal panic"))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, SulStatus> {
    if s.is_null() {
        return Err(fail(SulStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(SulStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn check_status(e: &CheckError) -> SulStatus {
    match e {
        CheckError::PositionCap { .. } | CheckError::DepthCap { .. } => SulStatus::ResourceCap,
        CheckError::Formula(_) => SulStatus::ParseError,
        CheckError::Model(_) => SulStatus::ModelError,
    }
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sul_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parse a model file's text into a new handle stored in `*out`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sul_model_parse(src: *const c_char, out: *mut *mut SulModel) -> SulStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SulStatus::NullArgument, "null output pointer");
        }
        let src = match text(src) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match parse_model_document(src) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(SulModel {
                    model: doc.model,
                    point: doc.point,
                }));
                SulStatus::Ok
            }
            Err(e) => fail(SulStatus::ModelError, e.to_string()),
        }
    })
}

/// # Safety
/// `m` must be NULL or a handle from [`sul_model_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sul_model_free(m: *mut SulModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of states, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live model handle.
#[no_mangle]
pub unsafe extern "C" fn sul_model_state_count(m: *const SulModel) -> usize {
    m.as_ref().map_or(0, |m| m.model.state_count())
}

/// Size of the model: states, edges and atom occurrences plus the sum of
/// all pair costs.
///
/// # Safety
/// `m` must be a live model handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sul_model_size(m: *const SulModel, out: *mut u64) -> SulStatus {
    guarded(|| {
        let (Some(m), false) = (m.as_ref(), out.is_null()) else {
            return fail(SulStatus::NullArgument, "null argument");
        };
        match model_size(&m.model) {
            Ok(n) => {
                *out = n;
                SulStatus::Ok
            }
            Err(e) => fail(SulStatus::ModelError, e.to_string()),
        }
    })
}

/// Parse a state formula into a new handle stored in `*out`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sul_formula_parse(src: *const c_char, out: *mut *mut SulFormula) -> SulStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SulStatus::NullArgument, "null output pointer");
        }
        let src = match text(src) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match parse_formula(src) {
            Ok(formula) => {
                *out = Box::into_raw(Box::new(SulFormula { formula }));
                SulStatus::Ok
            }
            Err(e) => fail(SulStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `f` must be NULL or a handle from [`sul_formula_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sul_formula_free(f: *mut SulFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// The formula in canonical syntax, or NULL for a NULL handle. Free with
/// [`sul_string_free`].
///
/// # Safety
/// `f` must be NULL or a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn sul_formula_to_string(f: *const SulFormula) -> *mut c_char {
    f.as_ref()
        .map_or(ptr::null_mut(), |f| into_c_string(f.formula.to_string()))
}

/// The negation normal form, or NULL for a NULL handle. Free with
/// [`sul_string_free`].
///
/// # Safety
/// `f` must be NULL or a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn sul_formula_nnf(f: *const SulFormula) -> *mut c_char {
    f.as_ref()
        .map_or(ptr::null_mut(), |f| into_c_string(to_nnf(&f.formula).to_string()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sul_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn pointed(m: &SulModel, point: *const c_char) -> Result<PointedModel, SulStatus> {
    let id = if point.is_null() {
        m.point
            .ok_or_else(|| fail(SulStatus::ModelError, "model has no designated point"))?
    } else {
        m.model
            .state_id(text(point)?)
            .map_err(|e| fail(SulStatus::ModelError, e.to_string()))?
    };
    Ok(PointedModel::new(m.model.clone(), id))
}

/// Decide the formula at `point` (or the model's own point when NULL) and
/// store the verdict in `*out`.
///
/// # Safety
/// `m` and `f` must be live handles, `point` NULL or a NUL-terminated
/// string, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sul_check(
    m: *const SulModel,
    point: *const c_char,
    f: *const SulFormula,
    out: *mut bool,
) -> SulStatus {
    guarded(|| {
        let (Some(m), Some(f), false) = (m.as_ref(), f.as_ref(), out.is_null()) else {
            return fail(SulStatus::NullArgument, "null argument");
        };
        let pm = match pointed(m, point) {
            Ok(pm) => pm,
            Err(status) => return status,
        };
        match check(&pm, &f.formula, &CheckerConfig::from_env()) {
            Ok(r) => {
                *out = r.value;
                SulStatus::Ok
            }
            Err(e) => fail(check_status(&e), e.to_string()),
        }
    })
}

/// Like [`sul_check`] but stores the JSON report (the CLI's `--json`
/// schema) in `*out`. Free it with [`sul_string_free`].
///
/// # Safety
/// As for [`sul_check`]; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sul_check_json(
    m: *const SulModel,
    point: *const c_char,
    f: *const SulFormula,
    witness: bool,
    out: *mut *mut c_char,
) -> SulStatus {
    guarded(|| {
        let (Some(m), Some(f), false) = (m.as_ref(), f.as_ref(), out.is_null()) else {
            return fail(SulStatus::NullArgument, "null argument");
        };
        let pm = match pointed(m, point) {
            Ok(pm) => pm,
            Err(status) => return status,
        };
        let cfg = CheckerConfig {
            witness,
            ..CheckerConfig::from_env()
        };
        match check(&pm, &f.formula, &cfg) {
            Ok(r) => {
                let report = CheckReport {
                    verdict: r.value,
                    formula: f.formula.to_string(),
                    point: pm.point_name(),
                    stats: r.stats,
                    witness: r.witness.as_ref(),
                    trace: r.trace.as_deref(),
                };
                *out = into_c_string(report.to_json());
                SulStatus::Ok
            }
            Err(e) => fail(check_status(&e), e.to_string()),
        }
    })
}
