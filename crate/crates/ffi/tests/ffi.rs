use std::ffi::{CStr, CString};
use std::ptr;

use gerbelab_ffi::*;

const FIXTURE: &str = include_str!("../../core/fixtures/pt2.txt");

fn parse(text: &str) -> (GlStatus, *mut GlDocument) {
    let t = CString::new(text).unwrap();
    let mut doc = ptr::null_mut();
    let st = unsafe { gl_document_parse(t.as_ptr(), &mut doc) };
    (st, doc)
}

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(gl_last_error())
            .to_string_lossy()
            .into_owned()
    }
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn parse_serialize_round_trip() {
    let (st, doc) = parse(FIXTURE);
    assert_eq!(st, GlStatus::Ok);
    let mut n = 0;
    assert_eq!(
        unsafe { gl_document_section_count(doc, &mut n) },
        GlStatus::Ok
    );
    assert_eq!(n, 10);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { gl_document_serialize(doc, &mut out) },
        GlStatus::Ok
    );
    assert_eq!(unsafe { CStr::from_ptr(out) }.to_str().unwrap(), FIXTURE);
    unsafe {
        gl_string_free(out);
        gl_document_free(doc);
    }
}

#[test]
fn queries() {
    let (_, doc) = parse(FIXTURE);
    let mut n = 0;
    assert_eq!(
        unsafe { gl_h1_class_count(doc, c("h_z2").as_ptr(), c("pt2").as_ptr(), &mut n) },
        GlStatus::Ok
    );
    assert_eq!(n, 1);
    assert_eq!(
        unsafe { gl_automorphism_count(doc, c("Z2").as_ptr(), &mut n) },
        GlStatus::Ok
    );
    assert_eq!(n, 1);
    assert_eq!(
        unsafe { gl_cocycle_roundtrip(doc, c("flip").as_ptr()) },
        GlStatus::Ok
    );
    assert_eq!(
        unsafe {
            gl_extensions_equivalent(doc, c("flip_ext").as_ptr(), c("flip_ext_adapted").as_ptr())
        },
        GlStatus::Ok
    );
    unsafe { gl_document_free(doc) };
}

#[test]
fn errors_are_reported() {
    let (st, doc) = parse("[group x]\norder 2\n0 1\n");
    assert_eq!((st, doc), (GlStatus::Document, ptr::null_mut()));
    assert!(last_error().starts_with("in [group x]: ParseError"));
    let bad = include_str!("../../core/fixtures/invalid/bad_peiffer.txt");
    assert_eq!(parse(bad).0, GlStatus::Validation);
    assert!(last_error().contains("Peiffer2Violation"));
    let (_, doc) = parse(FIXTURE);
    let mut n = 0;
    assert_eq!(
        unsafe { gl_h1_class_count(doc, c("nope").as_ptr(), c("pt2").as_ptr(), &mut n) },
        GlStatus::NotFound
    );
    assert_eq!(
        unsafe { gl_h1_class_count(ptr::null(), c("h_z2").as_ptr(), c("pt2").as_ptr(), &mut n) },
        GlStatus::NullArgument
    );
    assert_eq!(
        unsafe { gl_document_parse(ptr::null(), &mut ptr::null_mut()) },
        GlStatus::NullArgument
    );
    unsafe { gl_document_free(doc) };
}

#[test]
fn header_declares_the_api() {
    let h = include_str!("../include/gerbelab.h");
    for name in [
        "gl_document_parse",
        "gl_document_free",
        "gl_document_serialize",
        "gl_string_free",
        "gl_h1_class_count",
        "gl_last_error",
        "GL_STATUS_PRECONDITION",
    ] {
        assert!(h.contains(name), "{name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = std::process::Command::new("cc").arg("--version").output() else {
        return;
    };
    assert!(cc.status.success());
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/gerbelab.h");
    let st = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .status()
        .unwrap();
    assert!(st.success());
}
