//! C ABI over `gerbelab`.
//!
//! Documents are opaque `GlDocument` handles. Every call returns a
//! `GlStatus`; on failure `gl_last_error` gives the message for the
//! calling thread. Strings returned by the library are released with
//! `gl_string_free`, documents with `gl_document_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gerbelab::cocycle::h1_classes;
use gerbelab::extension::{cocycle_from_adapted, extension_from_cocycle};
use gerbelab::fingroup::automorphism_group;
use gerbelab::format::Document;
use gerbelab::morita::extensions_morita_equivalent;
use gerbelab::{max_search_from_env, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlStatus {
    Ok = 0,
    /// The check ran and its answer is no.
    False = 1,
    NullArgument = 2,
    InvalidUtf8 = 3,
    /// Malformed text or a dangling reference inside the document.
    Document = 4,
    /// The text parsed but a section failed its validator.
    Validation = 5,
    /// A name passed to the call does not exist in the document.
    NotFound = 6,
    /// A precondition of the operation failed, e.g. the search bound.
    Precondition = 7,
    Panic = 8,
}

pub struct GlDocument {
    doc: Document,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: GlStatus, msg: impl Into<String>) -> GlStatus {
    set_error(msg);
    status
}

fn op_error(e: Error) -> GlStatus {
    let status = match e.root() {
        Error::UnresolvedReference { .. } => GlStatus::NotFound,
        _ => GlStatus::Precondition,
    };
    fail(status, e.to_string())
}

fn guarded(f: impl FnOnce() -> GlStatus) -> GlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(GlStatus::Panic, "internal panic"),
    }
}

unsafe fn as_str<'a>(p: *const c_char) -> Result<&'a str, GlStatus> {
    if p.is_null() {
        return Err(fail(GlStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(GlStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn document<'a>(d: *const GlDocument) -> Result<&'a Document, GlStatus> {
    d.as_ref()
        .map(|d| &d.doc)
        .ok_or_else(|| fail(GlStatus::NullArgument, "null document"))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// The message of the last failed call on this thread, or null. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses and validates a document. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_document_parse(
    text: *const c_char,
    out: *mut *mut GlDocument,
) -> GlStatus {
    guarded(|| {
        if out.is_null() {
            return fail(GlStatus::NullArgument, "null out pointer");
        }
        let t = tri!(as_str(text));
        match Document::parse(t) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(GlDocument { doc }));
                GlStatus::Ok
            }
            Err(e) if e.is_document_error() => fail(GlStatus::Document, e.to_string()),
            Err(e) => fail(GlStatus::Validation, e.to_string()),
        }
    })
}

/// # Safety
/// `doc` must be null or a handle from `gl_document_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gl_document_free(doc: *mut GlDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// # Safety
/// `doc` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_document_section_count(
    doc: *const GlDocument,
    out: *mut usize,
) -> GlStatus {
    guarded(|| {
        let d = tri!(document(doc));
        if out.is_null() {
            return fail(GlStatus::NullArgument, "null out pointer");
        }
        *out = d.len();
        GlStatus::Ok
    })
}

/// The canonical text of the document; free it with `gl_string_free`.
///
/// # Safety
/// `doc` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_document_serialize(
    doc: *const GlDocument,
    out: *mut *mut c_char,
) -> GlStatus {
    guarded(|| {
        let d = tri!(document(doc));
        if out.is_null() {
            return fail(GlStatus::NullArgument, "null out pointer");
        }
        match CString::new(d.to_text()) {
            Ok(s) => {
                *out = s.into_raw();
                GlStatus::Ok
            }
            Err(_) => fail(GlStatus::Panic, "serialized text contains NUL"),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Order of the automorphism group of the named group.
///
/// # Safety
/// `doc` must be a live handle, `group` a NUL-terminated string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_automorphism_count(
    doc: *const GlDocument,
    group: *const c_char,
    out: *mut usize,
) -> GlStatus {
    guarded(|| {
        let (d, g) = (tri!(document(doc)), tri!(as_str(group)));
        if out.is_null() {
            return fail(GlStatus::NullArgument, "null out pointer");
        }
        match d.group(g) {
            Ok(g) => {
                *out = automorphism_group(g).elements.len();
                GlStatus::Ok
            }
            Err(e) => op_error(e),
        }
    })
}

/// Number of H¹ classes of `xmod` on `cover`, honouring
/// `GERBE_MAX_SEARCH`.
///
/// # Safety
/// `doc` must be a live handle, the names NUL-terminated strings and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl_h1_class_count(
    doc: *const GlDocument,
    xmod: *const c_char,
    cover: *const c_char,
    out: *mut usize,
) -> GlStatus {
    guarded(|| {
        let (d, x, c) = (tri!(document(doc)), tri!(as_str(xmod)), tri!(as_str(cover)));
        if out.is_null() {
            return fail(GlStatus::NullArgument, "null out pointer");
        }
        let run = || h1_classes(d.xmod(x)?, d.cover(c)?, max_search_from_env());
        match run() {
            Ok(classes) => {
                *out = classes.len();
                GlStatus::Ok
            }
            Err(e) => op_error(e),
        }
    })
}

/// `Ok` iff extracting the extension built from the cocycle gives it back.
///
/// # Safety
/// `doc` must be a live handle and `cocycle` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gl_cocycle_roundtrip(
    doc: *const GlDocument,
    cocycle: *const c_char,
) -> GlStatus {
    guarded(|| {
        let (d, n) = (tri!(document(doc)), tri!(as_str(cocycle)));
        let run = || -> gerbelab::Result<bool> {
            let c = d.cocycle(n)?;
            Ok(&cocycle_from_adapted(&extension_from_cocycle(c)?, c.cover())? == c)
        };
        match run() {
            Ok(true) => GlStatus::Ok,
            Ok(false) => fail(GlStatus::False, "round trip changed the cocycle"),
            Err(e) => op_error(e),
        }
    })
}

/// `Ok` if the two extensions are Morita equivalent, `False` if not.
///
/// # Safety
/// `doc` must be a live handle and the names NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn gl_extensions_equivalent(
    doc: *const GlDocument,
    ext1: *const c_char,
    ext2: *const c_char,
) -> GlStatus {
    guarded(|| {
        let (d, a, b) = (tri!(document(doc)), tri!(as_str(ext1)), tri!(as_str(ext2)));
        let run = || {
            extensions_morita_equivalent(d.extension(a)?, d.extension(b)?, max_search_from_env())
        };
        match run() {
            Ok(true) => GlStatus::Ok,
            Ok(false) => fail(GlStatus::False, "not Morita equivalent"),
            Err(e) => op_error(e),
        }
    })
}
