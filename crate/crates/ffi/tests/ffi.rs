use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use relhyp_ffi::*;

fn last_error() -> String {
    let p = relhyp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn pair(text: &str) -> *mut RelhypPair {
    let t = CString::new(text).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { relhyp_pair_parse(t.as_ptr(), &mut p) }, RelhypStatus::Ok);
    p
}

#[test]
fn cusped_rips_and_fill_round_trip() {
    let p = pair("group abelian 1\nperipheral 1: x\n");
    let mut n = 0usize;
    unsafe {
        assert_eq!(relhyp_pair_index_count(p, &mut n), RelhypStatus::Ok);
        assert_eq!(n, 1);
        let mut x = ptr::null_mut();
        assert_eq!(relhyp_cusped_build(p, 2, 2, &mut x), RelhypStatus::Ok);
        let (mut v, mut e) = (0usize, 0usize);
        assert_eq!(relhyp_cusped_size(x, &mut v, &mut e), RelhypStatus::Ok);
        assert_eq!(v, 15);
        let (mut num, mut den) = (0i64, 0i64);
        assert_eq!(relhyp_cusped_delta(x, &mut num, &mut den), RelhypStatus::Ok);
        assert!(den > 0 && num >= 0);

        let mut k = ptr::null_mut();
        assert_eq!(relhyp_complex_rips(x, 2, 2, &mut k), RelhypStatus::Ok);
        assert_eq!(relhyp_complex_count(k, 0, &mut n), RelhypStatus::Ok);
        assert_eq!(n, 15);
        assert_eq!(relhyp_complex_homology_rank(k, 1, true, &mut n), RelhypStatus::Ok);
        assert_eq!(n, 0);

        // Base vertices 0, 1, 2 are 1 and x^±1, pairwise within distance 2,
        // so they span a triangle and its boundary fills with norm 1.
        let chain = CString::new(r#"{"degree":1,"terms":[[[0,1],"1"],[[1,2],"1"],[[0,2],"-1"]]}"#).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(relhyp_complex_fill(k, chain.as_ptr(), &mut out), RelhypStatus::Ok);
        let s: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        relhyp_string_free(out);
        assert_eq!(s["value"], "1/1");
        let open = CString::new(r#"{"degree":1,"terms":[[[0,1],"1"]]}"#).unwrap();
        assert_eq!(relhyp_complex_fill(k, open.as_ptr(), &mut out), RelhypStatus::NotACycle);
        assert!(!last_error().is_empty());
        relhyp_complex_free(k);
        relhyp_cusped_free(x);
        relhyp_pair_free(p);
    }
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("group nonsense\n").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { relhyp_pair_parse(bad.as_ptr(), &mut p) }, RelhypStatus::Parse);
    assert!(p.is_null());
    assert!(last_error().contains("expected"));
    assert_eq!(unsafe { relhyp_pair_parse(ptr::null(), &mut p) }, RelhypStatus::NullArgument);
    assert!(last_error().contains("text"));
    let mut n = 0usize;
    assert_eq!(unsafe { relhyp_pair_index_count(ptr::null(), &mut n) }, RelhypStatus::NullArgument);

    let free = pair("group free 2\nperipheral 1: a\n");
    assert_eq!(unsafe { relhyp_relative_cohomology_rank(free, 1, &mut n) }, RelhypStatus::Unsupported);
    unsafe {
        relhyp_pair_free(free);
        relhyp_pair_free(ptr::null_mut());
        relhyp_string_free(ptr::null_mut());
    }
}

#[test]
fn cohomology_of_finite_pairs() {
    let two = pair("group cyclic 2\nperipheral A:\nperipheral B:\n");
    let mut n = 9usize;
    unsafe {
        assert_eq!(relhyp_relative_cohomology_rank(two, 1, &mut n), RelhypStatus::Ok);
        assert_eq!(n, 1);
        relhyp_pair_free(two);
    }
}

#[test]
fn cli_entry_point() {
    let args: Vec<CString> = ["resolutions", "cohomology", "--pair", "/nonexistent"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<*const std::ffi::c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let mut out = ptr::null_mut();
    let code = unsafe { relhyp_run_cli(ptrs.len() as i32, ptrs.as_ptr(), &mut out) };
    assert_eq!(code, 1);
    assert!(last_error().contains("relhyp"));
    unsafe { relhyp_string_free(out) };
}

#[test]
fn header_declares_the_api_and_compiles() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/relhyp.h")).unwrap();
    for name in [
        "relhyp_last_error",
        "relhyp_pair_parse",
        "relhyp_pair_free",
        "relhyp_cusped_build",
        "relhyp_cusped_delta",
        "relhyp_complex_rips",
        "relhyp_complex_fill",
        "relhyp_relative_cohomology_rank",
        "relhyp_run_cli",
        "relhyp_string_free",
        "RELHYP_STATUS_INFEASIBLE",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
    // Syntax-check the header with the system C compiler when there is one.
    if let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99", concat!(env!("CARGO_MANIFEST_DIR"), "/include/relhyp.h")])
        .output()
    {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
