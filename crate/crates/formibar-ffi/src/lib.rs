//! C interface to formibar.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! an [`FbStatus`]; on failure the message is available from
//! [`fb_last_error_message`] on the same thread. Distances and times are
//! returned as strings in `p/q` form, or `inf`, and must be released with
//! [`fb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use formibar::base::io::{
    barcode_from_json, barcode_to_json, timeline_from_json, timeline_to_json,
};
use formibar::clustering::pi0_dg;
use formibar::dms::{dms_from_json, rips_dg, Dms};
use formibar::metrics::{bottleneck, interleaving_dms_exact, interleaving_formigram_exact};
use formibar::smoothing::smooth_formigram;
use formibar::zigzag::barcode_of_formigram;
use formibar::{validate, Barcode, DynamicGraph, Error, Formigram, Rat};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Invalid = 4,
    UniverseMismatch = 5,
    UnknownElement = 6,
    Precondition = 7,
    EmptyInterval = 8,
    SizeBound = 9,
    NotPiecewiseLinear = 10,
    Panic = 11,
}

/// A formigram: a timeline of sub-partitions.
pub struct FbFormigram(Formigram);

/// A multiset of intervals.
pub struct FbBarcode(Barcode);

/// A dynamic metric space.
pub struct FbDms(Dms);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FbStatus {
    match e {
        Error::UniverseMismatch(_) => FbStatus::UniverseMismatch,
        Error::UnknownElement(_) => FbStatus::UnknownElement,
        Error::Precondition(_) => FbStatus::Precondition,
        Error::Invalid(_) => FbStatus::Invalid,
        Error::EmptyInterval => FbStatus::EmptyInterval,
        Error::SizeBound(_) => FbStatus::SizeBound,
        Error::Parse(_) => FbStatus::Parse,
        Error::NotPiecewiseLinear(_) => FbStatus::NotPiecewiseLinear,
    }
}

struct Fail(FbStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), e.to_string())
    }
}

type Res<T> = std::result::Result<T, Fail>;

fn guard(f: impl FnOnce() -> Res<()>) -> FbStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FbStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal panic".into());
            set_error(msg);
            FbStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Res<&'a str> {
    if p.is_null() {
        return Err(Fail(FbStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(FbStatus::InvalidUtf8, e.to_string()))
}

unsafe fn obj<'a, T>(p: *const T) -> Res<&'a T> {
    p.as_ref()
        .ok_or_else(|| Fail(FbStatus::NullPointer, "null handle".into()))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Res<()> {
    if out.is_null() {
        return Err(Fail(FbStatus::NullPointer, "null output pointer".into()));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_str(out: *mut *mut c_char, s: String) -> Res<()> {
    if out.is_null() {
        return Err(Fail(FbStatus::NullPointer, "null output pointer".into()));
    }
    *out = CString::new(s)
        .map_err(|e| Fail(FbStatus::Invalid, e.to_string()))?
        .into_raw();
    Ok(())
}

unsafe fn rat(p: *const c_char) -> Res<Rat> {
    Ok(Rat::parse(text(p)?)?)
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn fb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates formigram JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_formigram_from_json(
    json: *const c_char,
    out: *mut *mut FbFormigram,
) -> FbStatus {
    guard(|| {
        let f: Formigram = timeline_from_json(text(json)?)?;
        validate(&f).into_result()?;
        put(out, FbFormigram(f))
    })
}

/// Parses a dynamic graph and returns its formigram of connected components.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_formigram_from_dg_json(
    json: *const c_char,
    out: *mut *mut FbFormigram,
) -> FbStatus {
    guard(|| {
        let g: DynamicGraph = timeline_from_json(text(json)?)?;
        validate(&g).into_result()?;
        put(out, FbFormigram(pi0_dg(&g)?))
    })
}

/// Serializes a formigram to JSON.
///
/// # Safety
/// `f` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_formigram_to_json(
    f: *const FbFormigram,
    out: *mut *mut c_char,
) -> FbStatus {
    guard(|| put_str(out, timeline_to_json(&obj(f)?.0)))
}

/// Releases a formigram. NULL is ignored.
///
/// # Safety
/// `f` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fb_formigram_free(f: *mut FbFormigram) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Smooths a formigram by `eps`, given as a decimal or `p/q` string.
///
/// # Safety
/// `f` must be a live handle, `eps` a NUL-terminated string and `out` a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_formigram_smooth(
    f: *const FbFormigram,
    eps: *const c_char,
    out: *mut *mut FbFormigram,
) -> FbStatus {
    guard(|| {
        let s = smooth_formigram(&obj(f)?.0, &rat(eps)?)?;
        put(out, FbFormigram(s))
    })
}

/// Computes the zigzag barcode of a formigram.
///
/// # Safety
/// `f` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_formigram_barcode(
    f: *const FbFormigram,
    out: *mut *mut FbBarcode,
) -> FbStatus {
    guard(|| put(out, FbBarcode(barcode_of_formigram(&obj(f)?.0)?)))
}

/// Exact interleaving distance between two formigrams.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_formigram_interleaving(
    a: *const FbFormigram,
    b: *const FbFormigram,
    out: *mut *mut c_char,
) -> FbStatus {
    guard(|| {
        let d = interleaving_formigram_exact(&obj(a)?.0, &obj(b)?.0)?;
        put_str(out, d.to_fraction_string())
    })
}

/// Parses barcode JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_barcode_from_json(
    json: *const c_char,
    out: *mut *mut FbBarcode,
) -> FbStatus {
    guard(|| put(out, FbBarcode(barcode_from_json(text(json)?)?)))
}

/// Serializes a barcode to JSON.
///
/// # Safety
/// `b` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_barcode_to_json(
    b: *const FbBarcode,
    out: *mut *mut c_char,
) -> FbStatus {
    guard(|| put_str(out, barcode_to_json(&obj(b)?.0)))
}

/// Number of bars counted with multiplicity, or 0 for NULL.
///
/// # Safety
/// `b` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fb_barcode_len(b: *const FbBarcode) -> usize {
    b.as_ref().map_or(0, |b| b.0.len())
}

/// Releases a barcode. NULL is ignored.
///
/// # Safety
/// `b` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fb_barcode_free(b: *mut FbBarcode) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Bottleneck distance between two barcodes.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_bottleneck(
    a: *const FbBarcode,
    b: *const FbBarcode,
    out: *mut *mut c_char,
) -> FbStatus {
    guard(|| put_str(out, bottleneck(&obj(a)?.0, &obj(b)?.0).to_fraction_string()))
}

/// Parses dynamic metric space JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_dms_from_json(json: *const c_char, out: *mut *mut FbDms) -> FbStatus {
    guard(|| put(out, FbDms(dms_from_json(text(json)?)?)))
}

/// Releases a dynamic metric space. NULL is ignored.
///
/// # Safety
/// `d` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fb_dms_free(d: *mut FbDms) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Formigram of connected components of the Rips graph at scale `delta`.
///
/// # Safety
/// `d` must be a live handle, `delta` a NUL-terminated string and `out` a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_dms_rips(
    d: *const FbDms,
    delta: *const c_char,
    out: *mut *mut FbFormigram,
) -> FbStatus {
    guard(|| {
        let g = rips_dg(&obj(d)?.0, &rat(delta)?)?;
        put(out, FbFormigram(pi0_dg(&g)?))
    })
}

/// Exact interleaving distance between piecewise linear dynamic metric
/// spaces with slack `lambda`.
///
/// # Safety
/// `x` and `y` must be live handles, `lambda` a NUL-terminated string and
/// `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_dms_interleaving(
    x: *const FbDms,
    y: *const FbDms,
    lambda: *const c_char,
    out: *mut *mut c_char,
) -> FbStatus {
    guard(|| {
        let d = interleaving_dms_exact(&obj(x)?.0, &obj(y)?.0, &rat(lambda)?)?;
        put_str(out, d.to_fraction_string())
    })
}
