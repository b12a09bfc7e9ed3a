//! C ABI over `sts_atlas`.
//!
//! Fields are opaque handles created with [`atlas_field_new`] and released
//! with [`atlas_field_free`]. Every fallible call returns an [`AtlasStatus`];
//! the message of the most recent failure on the calling thread is available
//! from [`atlas_last_error_message`]. Strings returned through out-pointers are
//! owned by the caller and must be released with [`atlas_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sts_atlas::classify::{survey, SurveyOptions};
use sts_atlas::geometry::orientable;
use sts_atlas::invariants::monomial_record;
use sts_atlas::rotation::{is_closed_surface, spectrum};
use sts_atlas::{AtlasError, Convention, FieldCtx, Permutation};

/// Opaque finite-field handle.
pub struct AtlasField {
    ctx: FieldCtx,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtlasStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotCoprime = 3,
    NotClosedSurface = 4,
    Degenerate = 5,
    TooLarge = 6,
    Timeout = 7,
    BudgetExceeded = 8,
    Internal = 9,
    Panic = 10,
}

/// Which map builds the image system: 0 = F, 1 = F^-1 (default).
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtlasConvention {
    Direct = 0,
    Inverse = 1,
}

/// Invariants of x^t at point 1.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AtlasInvariants {
    pub v: u64,
    pub apn: bool,
    pub closed_surface: bool,
    /// Number of rotation lines at point 1.
    pub lines: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &AtlasError) -> AtlasStatus {
    match e {
        AtlasError::NotCoprime { .. } => AtlasStatus::NotCoprime,
        AtlasError::NotClosedSurface => AtlasStatus::NotClosedSurface,
        AtlasError::DegenerateEmbedding { .. } => AtlasStatus::Degenerate,
        AtlasError::TooLarge { .. } => AtlasStatus::TooLarge,
        AtlasError::Timeout(_) => AtlasStatus::Timeout,
        AtlasError::BudgetExceeded { .. } => AtlasStatus::BudgetExceeded,
        AtlasError::DegreeOutOfRange(_)
        | AtlasError::DegreeMismatch { .. }
        | AtlasError::NonPrimitivePoly { .. }
        | AtlasError::OutOfRange { .. }
        | AtlasError::SamePoint(_)
        | AtlasError::InvalidPermutation(_)
        | AtlasError::Parse(_) => AtlasStatus::InvalidArgument,
        _ => AtlasStatus::Internal,
    }
}

/// Runs `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), AtlasStatusError>) -> AtlasStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => AtlasStatus::Ok,
        Ok(Err(AtlasStatusError::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(AtlasStatusError::Atlas(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside sts-atlas".into());
            AtlasStatus::Panic
        }
    }
}

enum AtlasStatusError {
    Status(AtlasStatus, String),
    Atlas(AtlasError),
}

impl From<AtlasError> for AtlasStatusError {
    fn from(e: AtlasError) -> Self {
        AtlasStatusError::Atlas(e)
    }
}

fn null(what: &str) -> AtlasStatusError {
    AtlasStatusError::Status(AtlasStatus::NullPointer, format!("{what} is null"))
}

fn convention(c: u32) -> Result<Convention, AtlasStatusError> {
    match c {
        0 => Ok(Convention::Direct),
        1 => Ok(Convention::Inverse),
        _ => Err(AtlasStatusError::Status(AtlasStatus::InvalidArgument, format!("unknown convention {c}"))),
    }
}

unsafe fn field<'a>(f: *const AtlasField) -> Result<&'a FieldCtx, AtlasStatusError> {
    f.as_ref().map(|f| &f.ctx).ok_or_else(|| null("field"))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Creates GF(2^m). `poly = 0` selects the default primitive polynomial.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn atlas_field_new(m: u32, poly: u64, out: *mut *mut AtlasField) -> AtlasStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let ctx = FieldCtx::new(m, (poly != 0).then_some(poly))?;
        *out = Box::into_raw(Box::new(AtlasField { ctx }));
        Ok(())
    })
}

/// Releases a field handle. Null is ignored.
///
/// # Safety
/// `f` must be null or a handle from [`atlas_field_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn atlas_field_free(f: *mut AtlasField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// 2^m - 1 for the field, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn atlas_field_order(f: *const AtlasField) -> u32 {
    f.as_ref().map_or(0, |f| f.ctx.n())
}

/// The primitive polynomial bitmask, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn atlas_field_poly(f: *const AtlasField) -> u64 {
    f.as_ref().map_or(0, |f| f.ctx.poly())
}

/// Writes the reduced spectrum string, e.g. `(2; 10, 20)`, for x^t at `point`.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn atlas_spectrum(
    f: *const AtlasField,
    t: u64,
    point: u32,
    conv: u32,
    out: *mut *mut c_char,
) -> AtlasStatus {
    guard(|| {
        let ctx = field(f)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = Permutation::monomial(ctx, t)?;
        let s = spectrum(ctx, &p, point, convention(conv)?)?;
        *out = to_c_string(s.reduced_string());
        Ok(())
    })
}

/// Fills `out` with v, APN status, closed-surface status and line count.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn atlas_invariants(
    f: *const AtlasField,
    t: u64,
    conv: u32,
    out: *mut AtlasInvariants,
) -> AtlasStatus {
    guard(|| {
        let ctx = field(f)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let r = monomial_record(ctx, t, convention(conv)?)?;
        *out = AtlasInvariants { v: r.v, apn: r.apn, closed_surface: r.closed_surface, lines: r.spectrum.lines as u64 };
        Ok(())
    })
}

/// Writes V* in the form `{1^42, 3^7}`.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn atlas_vstar(f: *const AtlasField, t: u64, conv: u32, out: *mut *mut c_char) -> AtlasStatus {
    guard(|| {
        let ctx = field(f)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let r = monomial_record(ctx, t, convention(conv)?)?;
        *out = to_c_string(r.vstar.to_string());
        Ok(())
    })
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn atlas_is_closed_surface(f: *const AtlasField, t: u64, conv: u32, out: *mut bool) -> AtlasStatus {
    guard(|| {
        let ctx = field(f)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = Permutation::monomial(ctx, t)?;
        *out = is_closed_surface(ctx, &p, convention(conv)?);
        Ok(())
    })
}

/// Fails with `NotClosedSurface` when x^t has pinch points.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn atlas_orientable(f: *const AtlasField, t: u64, conv: u32, out: *mut bool) -> AtlasStatus {
    guard(|| {
        let ctx = field(f)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = Permutation::monomial(ctx, t)?;
        *out = orientable(ctx, &p, convention(conv)?)?;
        Ok(())
    })
}

/// Surveys every class of the field and writes the JSONL archive.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn atlas_survey_jsonl(f: *const AtlasField, conv: u32, out: *mut *mut c_char) -> AtlasStatus {
    guard(|| {
        let ctx = field(f)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let opts = SurveyOptions { convention: convention(conv)?, ..SurveyOptions::default() };
        *out = to_c_string(survey(ctx, &opts)?.to_jsonl()?);
        Ok(())
    })
}

/// Message of the last failure on this thread, or null. Valid until the next
/// call on the same thread.
#[no_mangle]
pub extern "C" fn atlas_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string produced by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn atlas_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn atlas_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(c) => c,
        Err(_) => c"unknown",
    };
    V.as_ptr()
}
