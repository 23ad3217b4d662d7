//! C interface. Reports are opaque handles created by `qk_report_new` and released by
//! `qk_report_free`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quintic_kummer::cli_reports::{render_json, report_document, CliError, ReportDocument};
use quintic_kummer::quintic_descent::classify_trivial_or_cyclic;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidRadicand = 2,
    Computation = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

/// Opaque report handle.
pub struct QkReport {
    doc: ReportDocument,
    json: Vec<u8>,
}

fn guard(f: impl FnOnce() -> QkStatus) -> QkStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(QkStatus::Panic)
}

/// Computes the report for radicand `n`. On success `*out` owns a new handle.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qk_report_new(
    n: u64,
    assume_strong: bool,
    out: *mut *mut QkReport,
) -> QkStatus {
    if out.is_null() {
        return QkStatus::NullPointer;
    }
    *out = ptr::null_mut();
    guard(|| {
        let doc = match report_document(n, assume_strong) {
            Ok(d) => d,
            Err(CliError::Rank(quintic_kummer::ambiguous_rank::RankError::Prime(_))) => {
                return QkStatus::InvalidRadicand
            }
            Err(_) => return QkStatus::Computation,
        };
        let Ok(s) = render_json(&doc) else {
            return QkStatus::Computation;
        };
        let mut json = s.into_bytes();
        json.push(0);
        *out = Box::into_raw(Box::new(QkReport { doc, json }));
        QkStatus::Ok
    })
}

/// # Safety
/// `report` must be null or a handle from `qk_report_new` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qk_report_free(report: *mut QkReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Fields copied out of a report.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QkSummary {
    pub n: u64,
    pub t: u32,
    pub qstar: u32,
    pub s1: u32,
    pub lambda_ramifies: bool,
    pub rank_lo: u32,
    pub rank_hi: u32,
    pub rank_lo_nonstrong: u32,
    pub rank_hi_nonstrong: u32,
    pub sl_lo: u32,
    pub sl_hi: u32,
    /// Trivial-or-cyclic family 1-10, or 0.
    pub cyclic_family: u32,
}

/// # Safety
/// `report` must be a live handle or null; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qk_report_summary(
    report: *const QkReport,
    out: *mut QkSummary,
) -> QkStatus {
    if report.is_null() || out.is_null() {
        return QkStatus::NullPointer;
    }
    let d = &(*report).doc;
    *out = QkSummary {
        n: d.rank.n,
        t: d.rank.t as u32,
        qstar: d.rank.qstar as u32,
        s1: d.rank.s1_strong as u32,
        lambda_ramifies: d.rank.lambda_ramifies,
        rank_lo: d.rank.bounds_strong.0 as u32,
        rank_hi: d.rank.bounds_strong.1 as u32,
        rank_lo_nonstrong: d.rank.bounds_nonstrong.0 as u32,
        rank_hi_nonstrong: d.rank.bounds_nonstrong.1 as u32,
        sl_lo: d.descent.sl_lower as u32,
        sl_hi: d.descent.sl_upper as u32,
        cyclic_family: d.descent.cyclic_family.map_or(0, |f| f.number() as u32),
    };
    QkStatus::Ok
}

/// Copies the JSON document, NUL-terminated, into `buf`. `*needed` receives the size
/// including the terminator; a short buffer gives `BUFFER_TOO_SMALL` and writes nothing.
///
/// # Safety
/// `report` must be a live handle; `buf` must be valid for `len` bytes when non-null;
/// `needed` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qk_report_json(
    report: *const QkReport,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> QkStatus {
    if report.is_null() {
        return QkStatus::NullPointer;
    }
    let json = &(*report).json;
    if !needed.is_null() {
        *needed = json.len();
    }
    if buf.is_null() || len < json.len() {
        return QkStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(json.as_ptr() as *const c_char, buf, json.len());
    QkStatus::Ok
}

/// The trivial-or-cyclic family (1-10) that `n` belongs to, or 0.
#[no_mangle]
pub extern "C" fn qk_trivial_or_cyclic_family(n: u64) -> u32 {
    catch_unwind(|| classify_trivial_or_cyclic(n).map_or(0, |f| f.number() as u32)).unwrap_or(0)
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn qk_status_message(status: QkStatus) -> *const c_char {
    let s: &'static CStr = match status {
        QkStatus::Ok => c"ok",
        QkStatus::NullPointer => c"null pointer argument",
        QkStatus::InvalidRadicand => c"n is not a fifth-power-free integer >= 2",
        QkStatus::Computation => c"computation failed",
        QkStatus::BufferTooSmall => c"buffer too small",
        QkStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}
