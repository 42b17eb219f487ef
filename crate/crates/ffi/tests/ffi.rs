use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use relobs_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = relobs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn system(json: &str) -> *mut RelobsSystem {
    let mut out = ptr::null_mut();
    let status = unsafe { relobs_system_from_json(c(json).as_ptr(), &mut out) };
    assert_eq!(status, RelobsStatus::Ok);
    out
}

fn model(json: &str) -> *mut RelobsModel {
    let mut out = ptr::null_mut();
    let status = unsafe { relobs_model_from_json(c(json).as_ptr(), &mut out) };
    assert_eq!(status, RelobsStatus::Ok, "{}", last_error());
    out
}

const PAIR: &str = r#"{"particles": [{"mass": 1}, {"mass": 1}], "box": {"L": 20, "Npts": 64},
    "potential": [{"pair": [1, 2], "type": "harmonic", "params": {"k": 1}}]}"#;

#[test]
fn classification_through_handles() {
    let sys = system(r#"{"dim": 3, "masses": ["1", "3/2"]}"#);
    let mut physical = false;
    let mut json = ptr::null_mut();
    let status = unsafe { relobs_classify(sys, c("dot(z[1]-z[2], z[1]-z[2])").as_ptr(), true, &mut physical, &mut json) };
    assert_eq!(status, RelobsStatus::Ok);
    assert!(physical);
    let doc: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    assert_eq!(doc["generators"]["rotation"]["invariant"], true);
    unsafe { relobs_string_free(json) };

    let status = unsafe { relobs_classify(sys, c("p[2].y").as_ptr(), false, &mut physical, ptr::null_mut()) };
    assert_eq!(status, RelobsStatus::Ok);
    assert!(!physical);
    unsafe { relobs_system_free(sys) };
}

#[test]
fn errors_map_to_status_codes() {
    let sys = system(r#"{"dim": 1, "masses": ["1", "1"]}"#);
    let mut physical = false;
    let mut text = ptr::null_mut();
    unsafe {
        assert_eq!(relobs_classify(sys, c("z[1].y").as_ptr(), true, &mut physical, ptr::null_mut()), RelobsStatus::ParseError);
        assert!(last_error().contains("AxisOutOfRange"), "{}", last_error());
        assert_eq!(relobs_reduce(sys, c("z[1].x").as_ptr(), &mut text), RelobsStatus::ModelError);
        assert!(last_error().starts_with("CMPositionDependence"));
        assert_eq!(relobs_classify(ptr::null(), c("z[1].x").as_ptr(), true, &mut physical, ptr::null_mut()), RelobsStatus::NullArgument);
        assert_eq!(relobs_classify(sys, ptr::null(), true, &mut physical, ptr::null_mut()), RelobsStatus::NullArgument);
        let bad = [0xffu8, 0];
        assert_eq!(relobs_classify(sys, bad.as_ptr().cast(), true, &mut physical, ptr::null_mut()), RelobsStatus::InvalidUtf8);
        // a successful call clears the message
        assert_eq!(relobs_classify(sys, c("z[1].x - z[2].x").as_ptr(), true, &mut physical, ptr::null_mut()), RelobsStatus::Ok);
        assert!(relobs_last_error().is_null());
        relobs_system_free(sys);

        let mut out = ptr::null_mut();
        assert_eq!(relobs_system_from_json(c("{").as_ptr(), &mut out), RelobsStatus::ParseError);
        assert_eq!(relobs_model_from_json(c(&PAIR.replace("64", "100")).as_ptr(), &mut ptr::null_mut()), RelobsStatus::ModelError);
    }
}

#[test]
fn spectra_fill_caller_buffers() {
    let m = model(PAIR);
    let mut buf = [0.0f64; 3];
    let mut len = 0usize;
    unsafe {
        assert_eq!(relobs_spectrum_reduced(m, 3, buf.as_mut_ptr(), 3, &mut len), RelobsStatus::Ok);
        assert_eq!(len, 3);
        assert!((buf[1] - buf[0] - 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(relobs_spectrum_reduced(m, 5, buf.as_mut_ptr(), 3, &mut len), RelobsStatus::BufferTooSmall);
        assert_eq!(len, 5);
        let mut sector = [0.0f64; 1];
        assert_eq!(relobs_spectrum_sector(m, 1, 1, sector.as_mut_ptr(), 1, &mut len), RelobsStatus::Ok);
        let q = 2.0 * std::f64::consts::PI / 20.0;
        assert!((sector[0] - buf[0] - q * q / 4.0).abs() < 1e-9);
        assert_eq!(relobs_spectrum_sector(m, 32, 1, sector.as_mut_ptr(), 1, &mut len), RelobsStatus::ModelError);
        relobs_model_free(m);
    }
}

#[test]
fn normal_modes_from_json() {
    let json = c(r#"{"masses": [1, 1], "K": [[1, -1], [-1, 1]], "asrEnforced": true}"#);
    let mut buf = [0.0f64; 2];
    let mut len = 0usize;
    unsafe {
        assert_eq!(relobs_normal_modes(json.as_ptr(), buf.as_mut_ptr(), 2, &mut len), RelobsStatus::Ok);
        assert_eq!(buf, [0.0, 2f64.sqrt()]);
        let unstable = c(r#"{"masses": [1, 1], "K": [[-1, 0], [0, 1]]}"#);
        assert_eq!(relobs_normal_modes(unstable.as_ptr(), buf.as_mut_ptr(), 2, &mut len), RelobsStatus::ModelError);
    }
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(relobs_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_whole_api() {
    let header = std::fs::read_to_string(manifest().join("include").join("relobs.h")).unwrap();
    for name in [
        "relobs_version",
        "relobs_last_error",
        "relobs_string_free",
        "relobs_system_from_json",
        "relobs_system_free",
        "relobs_classify",
        "relobs_reduce",
        "relobs_model_from_json",
        "relobs_model_free",
        "relobs_spectrum_reduced",
        "relobs_spectrum_sector",
        "relobs_normal_modes",
        "typedef struct RelobsSystem RelobsSystem;",
        "RELOBS_STATUS_BUFFER_TOO_SMALL = 6",
    ] {
        assert!(header.contains(name), "{name} missing from the header");
    }
}

/// Directory holding the static library built for this test run.
fn static_library_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let profile = deps.parent().unwrap();
    let found = [profile, deps].into_iter().find(|d| d.join("librelobs_ffi.a").exists()).map(Path::to_path_buf);
    found.expect("librelobs_ffi.a")
}

#[test]
fn c_program_links_against_the_static_library() {
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("relobs_c_api");
    let status = Command::new("cc")
        .arg(manifest().join("tests").join("c_api.c"))
        .arg("-I")
        .arg(manifest().join("include"))
        .arg("-o")
        .arg(&out)
        .arg(static_library_dir().join("librelobs_ffi.a"))
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), format!("{} 0", env!("CARGO_PKG_VERSION")));
}
