//! C interface to `msdiag`.
//!
//! Diagrams live behind the opaque [`MsdDiagram`] handle. Every function
//! returns an [`MsdStatus`]; results come back through out-pointers. On any
//! status other than `MSD_STATUS_OK` (and `MSD_STATUS_VALIDATION_FAILED`,
//! which is a successful check with a negative answer) a message is
//! available from [`msd_last_error`] on the same thread.
//!
//! Strings handed out by the library are owned by the caller and must be
//! released with [`msd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use msdiag::handle_complex::build_xn;
use msdiag::linalg::{smith_normal_form, IntMatrix};
use msdiag::multisection::validate_diagram;
use msdiag::{parse_diagram_file, serialize_diagram, MultisectionDiagram};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsdStatus {
    Ok = 0,
    /// The input was well formed but the diagram is not valid.
    ValidationFailed = 1,
    ParseError = 2,
    NullPointer = 3,
    InvalidArgument = 4,
    /// An internal error was caught at the boundary.
    Panic = 5,
}

/// Opaque diagram handle.
pub struct MsdDiagram {
    inner: MultisectionDiagram,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> Result<MsdStatus, (MsdStatus, String)>) -> MsdStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal error");
            MsdStatus::Panic
        }
    }
}

fn null(what: &str) -> (MsdStatus, String) {
    (MsdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (MsdStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (MsdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn diagram_arg<'a>(
    d: *const MsdDiagram,
) -> Result<&'a MultisectionDiagram, (MsdStatus, String)> {
    d.as_ref().map(|d| &d.inner).ok_or_else(|| null("diagram"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<MsdStatus, (MsdStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| (MsdStatus::Panic, "string contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(MsdStatus::Ok)
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next library call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn msd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn msd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a diagram file. On success `*out` holds a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn msd_diagram_parse(
    text: *const c_char,
    out: *mut *mut MsdDiagram,
) -> MsdStatus {
    guard(|| {
        let text = text_arg(text, "text")?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let d = parse_diagram_file(text).map_err(|e| (MsdStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(MsdDiagram { inner: d }));
        Ok(MsdStatus::Ok)
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `d` must come from [`msd_diagram_parse`] and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn msd_diagram_free(d: *mut MsdDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of systems in the diagram.
///
/// # Safety
/// Pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn msd_diagram_sector_count(
    d: *const MsdDiagram,
    out: *mut usize,
) -> MsdStatus {
    guard(|| {
        let d = diagram_arg(d)?;
        let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
        *out = d.sector_count();
        Ok(MsdStatus::Ok)
    })
}

/// Runs the full diagram check. Returns `MSD_STATUS_OK` when it passes and
/// `MSD_STATUS_VALIDATION_FAILED` otherwise; `*report` (if not NULL)
/// receives the failure list, one per line.
///
/// # Safety
/// `d` must be a valid handle; `report` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn msd_diagram_validate(
    d: *const MsdDiagram,
    report: *mut *mut c_char,
) -> MsdStatus {
    guard(|| {
        let d = diagram_arg(d)?;
        let r = validate_diagram(d);
        if !report.is_null() {
            let text: String = r.failures.iter().map(|f| format!("{f}\n")).collect();
            put_string(report, text)?;
        }
        Ok(if r.passed {
            MsdStatus::Ok
        } else {
            MsdStatus::ValidationFailed
        })
    })
}

/// Euler characteristic of the 4-manifold of a valid diagram.
///
/// # Safety
/// `d` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn msd_diagram_euler_characteristic(
    d: *const MsdDiagram,
    out: *mut i64,
) -> MsdStatus {
    guard(|| {
        let d = diagram_arg(d)?;
        let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
        let r = validate_diagram(d);
        match r.euler_characteristic {
            Some(chi) => {
                *out = chi;
                Ok(MsdStatus::Ok)
            }
            None => Err((MsdStatus::ValidationFailed, failure_text(&r.failures))),
        }
    })
}

fn failure_text(f: &[msdiag::multisection::DiagramFailure]) -> String {
    f.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// First homology of the 4-manifold of a valid diagram, e.g. `"Z + Z/2"`.
///
/// # Safety
/// `d` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn msd_diagram_first_homology(
    d: *const MsdDiagram,
    out: *mut *mut c_char,
) -> MsdStatus {
    guard(|| {
        let d = diagram_arg(d)?;
        let r = validate_diagram(d);
        match r.h1 {
            Some(h) => put_string(out, h.to_string()),
            None => Err((MsdStatus::ValidationFailed, failure_text(&r.failures))),
        }
    })
}

/// Writes the diagram back out in the text file format.
///
/// # Safety
/// `d` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn msd_diagram_serialize(
    d: *const MsdDiagram,
    out: *mut *mut c_char,
) -> MsdStatus {
    guard(|| put_string(out, serialize_diagram(diagram_arg(d)?)))
}

/// `H_degree` of the X_n complex for `degree` in 0..=2.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn msd_xn_homology(n: u64, degree: u32, out: *mut *mut c_char) -> MsdStatus {
    guard(|| {
        if degree > 2 {
            return Err((
                MsdStatus::InvalidArgument,
                format!("degree {degree} is outside 0..=2"),
            ));
        }
        let h = build_xn(n)
            .homology()
            .map_err(|e| (MsdStatus::Panic, e.to_string()))?;
        put_string(out, h[degree as usize].to_string())
    })
}

/// Invariant factors of a row-major `rows x cols` matrix, space separated.
///
/// # Safety
/// `entries` must point at `rows * cols` values (it may be NULL when that
/// product is 0) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn msd_smith_invariant_factors(
    rows: usize,
    cols: usize,
    entries: *const i64,
    out: *mut *mut c_char,
) -> MsdStatus {
    guard(|| {
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| (MsdStatus::InvalidArgument, "matrix too large".to_string()))?;
        let data: &[i64] = if len == 0 {
            &[]
        } else if entries.is_null() {
            return Err(null("entries"));
        } else {
            std::slice::from_raw_parts(entries, len)
        };
        let m = IntMatrix::from_i64(rows, cols, data)
            .map_err(|e| (MsdStatus::InvalidArgument, e.to_string()))?;
        let f: Vec<String> = smith_normal_form(&m)
            .invariant_factors()
            .iter()
            .map(ToString::to_string)
            .collect();
        put_string(out, f.join(" "))
    })
}
