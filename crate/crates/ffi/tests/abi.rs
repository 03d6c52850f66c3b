use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use stabkit_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { stk_string_free(s) };
    out
}

fn last_error() -> String {
    let p = stk_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn weight_system_round_trip() {
    // Supported weights {(1,0), (0,1)} lie on one side of a line through 0.
    let w = [1i64, 0, 0, 1, -1, -1];
    let support = [0usize, 1];
    let mut ws = ptr::null_mut();
    let st = unsafe { stk_weight_system_new(2, w.as_ptr(), 3, support.as_ptr(), 2, &mut ws) };
    assert_eq!(st, StkStatus::Ok);
    let mut v = StkVerdict { class: StkClass::Stable, has_witness: false, weight: 0 };
    let mut witness = [0i64; 2];
    assert_eq!(unsafe { stk_hm_classify(ws, &mut v, witness.as_mut_ptr()) }, StkStatus::Ok);
    assert_eq!(v.class, StkClass::Unstable);
    assert!(v.has_witness);
    assert!(v.weight > 0);
    assert!(witness[0] > 0 && witness[1] > 0);
    unsafe { stk_weight_system_free(ws) };

    let mut ws = ptr::null_mut();
    let st = unsafe { stk_weight_system_new(2, w.as_ptr(), 3, ptr::null(), 0, &mut ws) };
    assert_eq!(st, StkStatus::Ok);
    assert_eq!(unsafe { stk_hm_classify(ws, &mut v, ptr::null_mut()) }, StkStatus::Ok);
    assert_eq!(v.class, StkClass::Stable);
    unsafe { stk_weight_system_free(ws) };
}

#[test]
fn invalid_input_sets_message() {
    let mut ws = ptr::null_mut();
    let st = unsafe { stk_weight_system_new(2, ptr::null(), 0, ptr::null(), 0, &mut ws) };
    assert_eq!(st, StkStatus::InvalidInput);
    assert!(ws.is_null());
    assert_eq!(last_error(), "weight list is empty");
    let st = unsafe { stk_hm_classify(ptr::null(), ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(st, StkStatus::NullPointer);
}

#[test]
fn points_classify_and_flow() {
    let pts = [0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0];
    let mult = [1u32, 1, 1, 1];
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { stk_points_new(pts.as_ptr(), mult.as_ptr(), 4, &mut p) }, StkStatus::Ok);
    let mut class = StkClass::Unstable;
    let mut witness = 0i64;
    assert_eq!(unsafe { stk_points_classify(p, &mut class, &mut witness) }, StkStatus::Ok);
    assert_eq!(class, StkClass::Stable);
    assert_eq!(witness, -1);
    let mut s = StkFlowSummary { status: StkFlowStatus::Stalled, outcome: StkFlowOutcome::Inconclusive, iterations: 0, final_moment_norm: 0.0 };
    assert_eq!(unsafe { stk_points_flow(p, 1e-10, 0, &mut s) }, StkStatus::Ok);
    assert_eq!(s.status, StkFlowStatus::Balanced);
    assert_eq!(s.outcome, StkFlowOutcome::BalancedInOrbit);
    assert!(s.final_moment_norm <= 1e-10);
    unsafe { stk_points_free(p) };

    let bad = [0.0, 0.0, 2.0];
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { stk_points_new(bad.as_ptr(), mult.as_ptr(), 1, &mut p) }, StkStatus::InvalidInput);
}

#[test]
fn slope_values_are_exact_strings() {
    let json = CString::new(r#"{"family":"curve","genus":0,"degree":1}"#).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { stk_slope_family_from_json(json.as_ptr(), &mut f) }, StkStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { stk_slope_mu(f, &mut s) }, StkStatus::Ok);
    assert_eq!(take(s), "1");
    let c = CString::new("1/2").unwrap();
    assert_eq!(unsafe { stk_slope_mu_c(f, c.as_ptr(), &mut s) }, StkStatus::Ok);
    assert_eq!(take(s), "2/3");
    assert_eq!(unsafe { stk_slope_classify_json(f, &mut s) }, StkStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["class"], "Polystable");
    let c = CString::new("5").unwrap();
    assert_eq!(unsafe { stk_slope_mu_c(f, c.as_ptr(), &mut s) }, StkStatus::InvalidInput);
    unsafe { stk_slope_family_free(f) };
}

#[test]
fn run_json_matches_cli_exit_codes() {
    let dir = tempfile::TempDir::new().unwrap();
    let input = dir.path().join("w.json");
    std::fs::write(&input, r#"{"dim":1,"weights":[[1],[-1]]}"#).unwrap();
    let args = serde_json::to_string(&["hm", input.to_str().unwrap(), "--json"]).unwrap();
    let args = CString::new(args).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { stk_run_json(args.as_ptr(), &mut out) }, 0);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["result"]["class"], "Stable");

    std::fs::write(&input, r#"{"dim":1,"weights":[]}"#).unwrap();
    assert_eq!(unsafe { stk_run_json(args.as_ptr(), &mut out) }, 2);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["error"]["pointer"], "/weights");
    assert!(last_error().contains("weight list is empty"));

    let bad = CString::new("not json").unwrap();
    assert_eq!(unsafe { stk_run_json(bad.as_ptr(), &mut out) }, -1);
    assert!(out.is_null());
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/stabkit.h")).unwrap();
    for name in [
        "stk_last_error_message",
        "stk_string_free",
        "stk_weight_system_new",
        "stk_weight_system_free",
        "stk_hm_classify",
        "stk_points_new",
        "stk_points_free",
        "stk_points_classify",
        "stk_points_flow",
        "stk_slope_family_from_json",
        "stk_slope_family_free",
        "stk_slope_mu",
        "stk_slope_mu_c",
        "stk_slope_classify_json",
        "stk_run_json",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

/// Compiles the header as C when a compiler is available.
#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/stabkit.h");
    let dir = tempfile::TempDir::new().unwrap();
    let src = dir.path().join("check.c");
    std::fs::write(&src, format!("#include \"{}\"\nint main(void) {{ return STK_STATUS_OK; }}\n", header.display())).unwrap();
    match Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).status() {
        Ok(s) => assert!(s.success(), "header does not compile"),
        Err(_) => eprintln!("no C compiler found; skipping"),
    }
}
