//! C ABI: opaque handles over the core types, integer error codes, and a
//! thread-local last-error message.
//!
//! Every function that can fail returns an `ScldpcStatus`; callers own the
//! handles they receive and must release them with the matching `_free`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::{c_char, c_double, c_int};

use scldpc::error::Error;
use scldpc::mihao::{mihao_search, Objective, SearchConfig};
use scldpc::qc::Girth;
use scldpc::spectrum::average_per_node;
use scldpc::spreading::{edge_spread, SpreadingMatrix};
use scldpc::ExponentMatrix;

/// Result codes mirroring the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScldpcStatus {
    Ok = 0,
    NullArgument = 1,
    ParseError = 2,
    BudgetExceeded = 3,
    InvalidInput = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(e: &Error) -> ScldpcStatus {
    let message = CString::new(e.to_string()).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
    match e {
        Error::Parse { .. } => ScldpcStatus::ParseError,
        Error::BudgetExceeded(_) => ScldpcStatus::BudgetExceeded,
        _ => ScldpcStatus::InvalidInput,
    }
}

/// Opaque exponent matrix handle.
pub struct ScldpcMatrix(ExponentMatrix);

/// Opaque spreading matrix handle.
pub struct ScldpcSpreading(SpreadingMatrix);

/// Message of the last error on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn scldpc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

unsafe fn parse_input(text: *const c_char) -> Result<String, ScldpcStatus> {
    if text.is_null() {
        return Err(ScldpcStatus::NullArgument);
    }
    CStr::from_ptr(text)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| ScldpcStatus::InvalidInput)
}

/// Parses an exponent matrix from its text format.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn scldpc_matrix_parse(
    text: *const c_char,
    out: *mut *mut ScldpcMatrix,
) -> ScldpcStatus {
    if out.is_null() {
        return ScldpcStatus::NullArgument;
    }
    let text = match parse_input(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match scldpc::io::parse_exponent_matrix(&text) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(ScldpcMatrix(p)));
            ScldpcStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Releases a matrix handle; null is ignored.
///
/// # Safety
/// `m` must come from `scldpc_matrix_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn scldpc_matrix_free(m: *mut ScldpcMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Block-row count, block-column count, and lifting degree of a matrix.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scldpc_matrix_dims(
    m: *const ScldpcMatrix,
    rows: *mut c_int,
    cols: *mut c_int,
    lifting: *mut c_int,
) -> ScldpcStatus {
    if m.is_null() || rows.is_null() || cols.is_null() || lifting.is_null() {
        return ScldpcStatus::NullArgument;
    }
    let p = &(*m).0;
    *rows = p.rows() as c_int;
    *cols = p.cols() as c_int;
    *lifting = p.lifting() as c_int;
    ScldpcStatus::Ok
}

/// Girth of the expanded binary graph; 0 means no cycles.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scldpc_matrix_girth(
    m: *const ScldpcMatrix,
    girth: *mut c_int,
) -> ScldpcStatus {
    if m.is_null() || girth.is_null() {
        return ScldpcStatus::NullArgument;
    }
    *girth = match (*m).0.expand().tanner_graph().girth() {
        Girth::Finite(g) => g as c_int,
        Girth::Infinite => 0,
    };
    ScldpcStatus::Ok
}

/// Parses a spreading matrix from either text form.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn scldpc_spreading_parse(
    text: *const c_char,
    out: *mut *mut ScldpcSpreading,
) -> ScldpcStatus {
    if out.is_null() {
        return ScldpcStatus::NullArgument;
    }
    let text = match parse_input(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match scldpc::io::parse_spreading_matrix(&text) {
        Ok(b) => {
            *out = Box::into_raw(Box::new(ScldpcSpreading(b)));
            ScldpcStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Releases a spreading handle; null is ignored.
///
/// # Safety
/// `b` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn scldpc_spreading_free(b: *mut ScldpcSpreading) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Per-node average block-cycle spectrum for lengths 4, 6, ..., max_len.
/// `values` must have room for (max_len - 2) / 2 doubles.
///
/// # Safety
/// All pointers must be valid and `values` sized as documented.
#[no_mangle]
pub unsafe extern "C" fn scldpc_spectrum(
    m: *const ScldpcMatrix,
    b: *const ScldpcSpreading,
    max_len: c_int,
    values: *mut c_double,
) -> ScldpcStatus {
    if m.is_null() || b.is_null() || values.is_null() {
        return ScldpcStatus::NullArgument;
    }
    if max_len < 4 || max_len % 2 != 0 {
        return ScldpcStatus::InvalidInput;
    }
    match average_per_node(&(*m).0, &(*b).0, max_len as usize) {
        Ok(s) => {
            for (i, v) in s.decimals().into_iter().enumerate() {
                *values.add(i) = v;
            }
            ScldpcStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Number of surviving block-cycles per period of lengths up to `max_len`
/// under the given spreading.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scldpc_score(
    m: *const ScldpcMatrix,
    b: *const ScldpcSpreading,
    max_len: c_int,
    score: *mut u64,
) -> ScldpcStatus {
    if m.is_null() || b.is_null() || score.is_null() {
        return ScldpcStatus::NullArgument;
    }
    if max_len < 4 || max_len % 2 != 0 {
        return ScldpcStatus::InvalidInput;
    }
    match scldpc::mihao::score(&(*m).0, &(*b).0, Objective::CyclesUpTo(max_len as usize)) {
        Ok(s) => {
            *score = s;
            ScldpcStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Greedy search for a spreading of the given memory minimizing block-cycles
/// of lengths up to `max_len`; returns the result as a new handle.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scldpc_optimize(
    m: *const ScldpcMatrix,
    memory: c_int,
    max_len: c_int,
    seed: u64,
    max_evaluations: u64,
    out: *mut *mut ScldpcSpreading,
) -> ScldpcStatus {
    if m.is_null() || out.is_null() {
        return ScldpcStatus::NullArgument;
    }
    if memory < 0 || max_len < 4 || max_len % 2 != 0 {
        return ScldpcStatus::InvalidInput;
    }
    let p = &(*m).0;
    let cfg = SearchConfig {
        seed,
        max_evaluations: (max_evaluations > 0).then_some(max_evaluations),
        ..Default::default()
    };
    let b0 = SpreadingMatrix::zero(p.rows(), p.cols(), memory as u32);
    match mihao_search(p, Objective::CyclesUpTo(max_len as usize), b0, &cfg) {
        Ok(outcome) => {
            *out = Box::into_raw(Box::new(ScldpcSpreading(outcome.best)));
            ScldpcStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Serializes the terminated exponent matrix of a spread code. Returns a
/// NUL-terminated string the caller must release with `scldpc_string_free`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scldpc_terminate(
    m: *const ScldpcMatrix,
    b: *const ScldpcSpreading,
    sections: c_int,
    out: *mut *mut c_char,
) -> ScldpcStatus {
    if m.is_null() || b.is_null() || out.is_null() {
        return ScldpcStatus::NullArgument;
    }
    if sections < 1 {
        return ScldpcStatus::InvalidInput;
    }
    match edge_spread(&(*m).0, &(*b).0) {
        Ok(cb) => {
            let tc = cb.terminate(sections as usize);
            let text = CString::new(tc.matrix().to_string()).unwrap_or_default();
            *out = text.into_raw();
            ScldpcStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Releases a string produced by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn scldpc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
