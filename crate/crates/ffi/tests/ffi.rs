use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use msdiag_ffi::*;

const S1XS3: &str = "\
[surface] genus=1 boundary=0
[system alpha1]
piece genus=0 scars=2 boundary=0
curve c class=a1:1 piece-data=0.0|0.1|+
[system alpha2]
piece genus=0 scars=2 boundary=0
curve c class=a1:1 piece-data=0.0|0.1|+
[system alpha3]
piece genus=0 scars=2 boundary=0
curve c class=a1:1 piece-data=0.0|0.1|+
[page]
empty
";

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    msd_string_free(s);
    out
}

fn last_error() -> Option<String> {
    let p = msd_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string())
}

unsafe fn parse(text: &str) -> (MsdStatus, *mut MsdDiagram) {
    let c = CString::new(text).unwrap();
    let mut d = ptr::null_mut();
    let st = msd_diagram_parse(c.as_ptr(), &mut d);
    (st, d)
}

#[test]
fn diagram_lifecycle() {
    unsafe {
        let (st, d) = parse(S1XS3);
        assert_eq!(st, MsdStatus::Ok);
        assert!(last_error().is_none());

        let mut n = 0usize;
        assert_eq!(msd_diagram_sector_count(d, &mut n), MsdStatus::Ok);
        assert_eq!(n, 3);

        let mut report = ptr::null_mut();
        assert_eq!(msd_diagram_validate(d, &mut report), MsdStatus::Ok);
        assert_eq!(take(report), "");

        let mut chi = 99i64;
        assert_eq!(msd_diagram_euler_characteristic(d, &mut chi), MsdStatus::Ok);
        assert_eq!(chi, 0);

        let mut h1 = ptr::null_mut();
        assert_eq!(msd_diagram_first_homology(d, &mut h1), MsdStatus::Ok);
        assert_eq!(take(h1), "Z");

        let mut text = ptr::null_mut();
        assert_eq!(msd_diagram_serialize(d, &mut text), MsdStatus::Ok);
        let text = take(text);
        let (st, d2) = parse(&text);
        assert_eq!(st, MsdStatus::Ok);
        msd_diagram_free(d2);
        msd_diagram_free(d);
    }
}

#[test]
fn sphere_page_fails_validation() {
    unsafe {
        let (st, d) = parse(&S1XS3.replace("empty", "component genus=0 boundary=0"));
        assert_eq!(st, MsdStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(
            msd_diagram_validate(d, &mut report),
            MsdStatus::ValidationFailed
        );
        assert!(take(report).contains("SPHERE_IN_PAGE"));
        assert_eq!(
            msd_diagram_validate(d, ptr::null_mut()),
            MsdStatus::ValidationFailed
        );
        let mut chi = 0i64;
        assert_eq!(
            msd_diagram_euler_characteristic(d, &mut chi),
            MsdStatus::ValidationFailed
        );
        assert!(last_error().unwrap().contains("SPHERE_IN_PAGE"));
        msd_diagram_free(d);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let (st, d) = parse("[surface] genus=1 boundary=0\n");
        assert_eq!(st, MsdStatus::ParseError);
        assert!(d.is_null());
        assert!(last_error().unwrap().starts_with("MISSING_SECTION"));

        let mut out = ptr::null_mut();
        assert_eq!(
            msd_diagram_parse(ptr::null(), &mut out),
            MsdStatus::NullPointer
        );
        assert_eq!(
            msd_diagram_serialize(ptr::null(), &mut ptr::null_mut()),
            MsdStatus::NullPointer
        );
        assert_eq!(
            msd_diagram_sector_count(ptr::null(), ptr::null_mut()),
            MsdStatus::NullPointer
        );
        assert_eq!(
            msd_xn_homology(3, 7, &mut ptr::null_mut()),
            MsdStatus::InvalidArgument
        );

        let bad = [0xffu8, 0];
        assert_eq!(
            msd_diagram_parse(bad.as_ptr().cast(), &mut out),
            MsdStatus::InvalidArgument
        );

        msd_diagram_free(ptr::null_mut());
        msd_string_free(ptr::null_mut());
    }
}

#[test]
fn xn_and_smith() {
    unsafe {
        for n in 0..=8u64 {
            let mut s = ptr::null_mut();
            assert_eq!(msd_xn_homology(n, 2, &mut s), MsdStatus::Ok);
            let want = match n {
                0 => "Z".to_string(),
                1 => "0".to_string(),
                _ => format!("Z/{n}"),
            };
            assert_eq!(take(s), want);
        }
        let mut s = ptr::null_mut();
        assert_eq!(msd_xn_homology(4, 0, &mut s), MsdStatus::Ok);
        assert_eq!(take(s), "Z");

        let m = [2i64, 4, 4, -6, 6, 12, 10, -4, -16];
        let mut s = ptr::null_mut();
        assert_eq!(
            msd_smith_invariant_factors(3, 3, m.as_ptr(), &mut s),
            MsdStatus::Ok
        );
        assert_eq!(take(s), "2 6 12");
        assert_eq!(
            msd_smith_invariant_factors(0, 0, ptr::null(), &mut s),
            MsdStatus::Ok
        );
        assert_eq!(take(s), "");
        assert_eq!(
            msd_smith_invariant_factors(2, 2, ptr::null(), &mut s),
            MsdStatus::NullPointer
        );
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/msdiag.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in [
        "msd_diagram_parse",
        "msd_diagram_free",
        "msd_diagram_validate",
        "msd_last_error",
        "typedef struct MsdDiagram MsdDiagram",
        "MSD_STATUS_VALIDATION_FAILED = 1",
    ] {
        assert!(text.contains(sym), "header lacks {sym}");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler found; skipping syntax check");
        return;
    };
    assert!(status.success());
}
