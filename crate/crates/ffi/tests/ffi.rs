use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use schrate_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(schrate_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn threshold_and_classify() {
    let mut s = 0.0;
    let st = unsafe { schrate_threshold(1, 0.5, 2.0, SchrateSmoothness::Holder, 0.1, &mut s) };
    assert_eq!(st, SchrateStatus::Ok);
    assert!((s - 0.35).abs() < 1e-12);
    let mut c = 9;
    let st = unsafe { schrate_classify(1, 0.5, 2.0, SchrateSmoothness::Holder, 0.1, 0.5, &mut c) };
    assert_eq!(st, SchrateStatus::Ok);
    assert_eq!(c, 1);
}

#[test]
fn errors_set_status_and_message() {
    let mut s = 0.0;
    let st = unsafe { schrate_threshold(1, 0.5, 2.0, SchrateSmoothness::Holder, 0.7, &mut s) };
    assert_eq!(st, SchrateStatus::Range);
    assert!(last_error().contains("0.5"), "{}", last_error());
    let st = unsafe { schrate_threshold(1, 0.5, 2.0, SchrateSmoothness::Lipschitz, 0.1, &mut s) };
    assert_eq!(st, SchrateStatus::InvalidArgument);
    let st = unsafe { schrate_threshold(1, 0.5, 2.0, SchrateSmoothness::Holder, 0.1, ptr::null_mut()) };
    assert_eq!(st, SchrateStatus::NullPointer);
    let st = unsafe { schrate_threshold(1, 0.5, 2.0, SchrateSmoothness::Holder, 0.1, &mut s) };
    assert_eq!(st, SchrateStatus::Ok);
    assert_eq!(last_error(), "");
}

#[test]
fn profile_and_evaluation_round_trip() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(schrate_profile_new(SchrateFamily::BumpModulated, 64.0, 0.1, 1, &mut p), SchrateStatus::Ok);
        let mut c = ptr::null_mut();
        assert_eq!(schrate_curve_new(SchrateCurveKind::MinusShift, 0.5, 1, &mut c), SchrateStatus::Ok);

        let mut norm = 0.0;
        assert_eq!(schrate_profile_sobolev(p, 0.0, &mut norm), SchrateStatus::Ok);
        assert!(norm > 0.0);

        let eta = [-4096.0];
        let mut fh = SchrateComplex { re: 0.0, im: 0.0 };
        assert_eq!(schrate_profile_fourier_eval(p, eta.as_ptr(), 1, &mut fh), SchrateStatus::Ok);
        assert!(fh.re > 0.0 && fh.im == 0.0);

        let x = [0.3];
        let mut g = [0.0];
        assert_eq!(schrate_curve_gamma(c, x.as_ptr(), 1, 0.25, g.as_mut_ptr()), SchrateStatus::Ok);
        assert!((g[0] - (0.3 - 0.5)).abs() < 1e-15);

        let mut u0 = SchrateComplex { re: 0.0, im: 0.0 };
        assert_eq!(schrate_evaluate(p, c, 2.0, x.as_ptr(), 1, 0.0, &mut u0), SchrateStatus::Ok);
        let prof = schrate::initial_data::FrequencyProfile::bump_modulated(64.0).unwrap();
        let f = schrate::initial_data::physical_eval(&prof, &x, &Default::default()).unwrap();
        assert_eq!((u0.re, u0.im), (f.re, f.im));

        let mut t = 0.0;
        let xs = [0.75];
        assert_eq!(
            schrate_critical_time(SchrateFamily::BumpModulated, c, 64.0, 0.1, xs.as_ptr(), 1, 1.0, &mut t),
            SchrateStatus::Ok
        );
        assert!(t > 0.0 && t < 1.0 / 64.0 / 64.0 * 1.0001);

        schrate_curve_free(c);
        schrate_profile_free(p);
        schrate_profile_free(ptr::null_mut());
    }
}

#[test]
fn unsupported_and_null_handles() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(schrate_profile_new(SchrateFamily::Bourgain, 64.0, 0.0, 1, &mut p), SchrateStatus::Ok);
        let eta = [64.0];
        let mut v = SchrateComplex { re: 0.0, im: 0.0 };
        assert_eq!(schrate_profile_fourier_eval(p, eta.as_ptr(), 1, &mut v), SchrateStatus::Unsupported);
        schrate_profile_free(p);
        let mut n = 0.0;
        assert_eq!(schrate_profile_sobolev(ptr::null(), 0.0, &mut n), SchrateStatus::NullPointer);
    }
}

#[test]
fn predicted_slope_matches_library() {
    let mut v = 0.0;
    let st = unsafe { schrate_predicted_slope(SchrateFamily::BumpDilated, 1, 0.2, 0.05, 0.0, 0.0, &mut v) };
    assert_eq!(st, SchrateStatus::Ok);
    assert!((v - 0.4).abs() < 1e-15);
}

#[test]
fn plan_json_errors_and_success() {
    unsafe {
        let mut out = ptr::null_mut();
        let bad = CString::new(r#"{"family":"bump-modulated","bogus":1}"#).unwrap();
        assert_eq!(schrate_run_plan_json(bad.as_ptr(), &mut out), SchrateStatus::InvalidArgument);
        assert!(out.is_null());

        let plan = CString::new(
            r#"{"family":"indicator-band","regime":{"d":1,"alpha":0.5,"m":2.0,"smoothness":"holder"},
                "delta":0.2,"r_values":[32,64,128,256],"c":1.0,"x_points":128}"#,
        )
        .unwrap();
        assert_eq!(schrate_run_plan_json(plan.as_ptr(), &mut out), SchrateStatus::Ok, "{}", last_error());
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        schrate_string_free(out);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["samples"].as_array().unwrap().len(), 4);
        assert!(v["fit"]["slope"].as_f64().unwrap() > 0.2);
    }
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(manifest_dir().join("include").join("schrate.h")).unwrap();
    for name in [
        "schrate_threshold",
        "schrate_classify",
        "schrate_profile_new",
        "schrate_profile_annulus",
        "schrate_profile_gaussian",
        "schrate_profile_free",
        "schrate_profile_sobolev",
        "schrate_profile_fourier_eval",
        "schrate_curve_new",
        "schrate_curve_free",
        "schrate_curve_gamma",
        "schrate_evaluate",
        "schrate_critical_time",
        "schrate_predicted_slope",
        "schrate_run_plan_json",
        "schrate_string_free",
        "schrate_last_error_message",
        "schrate_version",
        "SCHRATE_STATUS_ACCURACY",
        "typedef struct SchrateProfile SchrateProfile",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// Compiles and runs a small C program against the shared library when a C
/// compiler and the library artifact are present.
#[test]
fn c_program_links_against_header() {
    let Ok(exe) = std::env::current_exe() else { return };
    let target = exe.parent().and_then(|p| p.parent()).map(PathBuf::from).unwrap();
    let lib = target.join("libschrate_ffi.so");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping C link check: no shared library or C compiler");
        return;
    }
    let dir = tempfile_dir();
    let src = dir.join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "schrate.h"
int main(void) {
    double s = 0.0;
    if (schrate_threshold(1, 0.5, 2.0, SCHRATE_SMOOTHNESS_HOLDER, 0.1, &s) != SCHRATE_STATUS_OK) return 1;
    if (s < 0.3499 || s > 0.3501) return 2;
    if (schrate_threshold(1, 0.5, 2.0, SCHRATE_SMOOTHNESS_HOLDER, 0.9, &s) != SCHRATE_STATUS_RANGE) return 3;
    if (schrate_last_error_message()[0] == '\0') return 4;
    SchrateProfile *p = NULL;
    if (schrate_profile_gaussian(1, 0.0, 1.0, &p) != SCHRATE_STATUS_OK) return 5;
    schrate_profile_free(p);
    printf("%s\n", schrate_version());
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg("-L")
        .arg(&target)
        .arg("-lschrate_ffi")
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).env("LD_LIBRARY_PATH", &target).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), env!("CARGO_PKG_VERSION"));
    let _ = std::fs::remove_dir_all(dir);
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("schrate-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
