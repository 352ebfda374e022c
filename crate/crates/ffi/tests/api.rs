use std::ffi::{c_char, CStr, CString};
use std::ptr;

use krall_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { krall_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(krall_last_error()) }.to_str().unwrap().to_owned()
}

fn krall_spec(beta: &str, a0: &str) -> *mut KrallSpec {
    let beta = CString::new(beta).unwrap();
    let a0 = CString::new(a0).unwrap();
    let a = [a0.as_ptr()];
    let mut spec = ptr::null_mut();
    let st = unsafe { krall_spec_new(1, beta.as_ptr(), a.as_ptr(), 1, &mut spec) };
    assert_eq!(st, KrallStatus::Ok);
    spec
}

#[test]
fn qpoly_and_basis() {
    let spec = krall_spec("0", "1");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { krall_qpoly_json(spec, 1, 0, &mut s) }, KrallStatus::Ok);
    assert_eq!(take(s), r#"["9","-12"]"#);
    assert_eq!(unsafe { krall_algebra_basis_json(spec, 3, &mut s) }, KrallStatus::Ok);
    let basis: Vec<Vec<String>> = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(basis.len(), 3);
    assert_eq!(basis[1], vec!["0", "7/2", "1"]);
    unsafe { krall_spec_free(spec) };
}

#[test]
fn fit_apply_and_commute() {
    let spec = krall_spec("0", "1");
    let f2 = CString::new(r#"["0","7/2","1"]"#).unwrap();
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { krall_fit(spec, f2.as_ptr(), &mut op) }, KrallStatus::Ok);

    // B q_0 = f2(lambda_{-1/2}) q_0 with q_0 = -1, lambda_{-1/2} = -3/4, f2(-3/4) = -33/16
    let q0 = CString::new(r#"["-1"]"#).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { krall_operator_apply_json(op, q0.as_ptr(), 0, &mut s) }, KrallStatus::Ok);
    assert_eq!(take(s), r#"["33/16"]"#);

    let mut comm = ptr::null_mut();
    assert_eq!(unsafe { krall_operator_commutator(op, op, &mut comm) }, KrallStatus::Ok);
    assert_eq!(unsafe { krall_operator_is_zero(comm) }, 1);

    assert_eq!(unsafe { krall_operator_to_json(op, &mut s) }, KrallStatus::Ok);
    let json = CString::new(take(s)).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { krall_operator_from_json(json.as_ptr(), &mut back) }, KrallStatus::Ok);
    let mut diff = ptr::null_mut();
    assert_eq!(unsafe { krall_operator_commutator(back, op, &mut diff) }, KrallStatus::Ok);
    assert_eq!(unsafe { krall_operator_is_zero(diff) }, 1);
    unsafe {
        krall_operator_free(diff);
        krall_operator_free(back);
        krall_operator_free(comm);
        krall_operator_free(op);
        krall_spec_free(spec);
    }
}

#[test]
fn errors_are_reported() {
    let spec = krall_spec("0", "1");
    let t = CString::new(r#"["0","1"]"#).unwrap();
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { krall_fit(spec, t.as_ptr(), &mut op) }, KrallStatus::NotInAlgebra);
    assert!(op.is_null());
    assert!(!last_error().is_empty());

    let bad = CString::new(r#"{"beta":"0","terms":[[0,0,"1/0"]]}"#).unwrap();
    assert_eq!(unsafe { krall_operator_from_json(bad.as_ptr(), &mut op) }, KrallStatus::Parse);
    assert!(last_error().contains("1/0"), "{}", last_error());

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { krall_qpoly_json(ptr::null(), 0, 0, &mut s) }, KrallStatus::NullPointer);

    // a_0 = -1 makes tau_0 vanish
    let degenerate = krall_spec("0", "-1");
    assert_eq!(unsafe { krall_qpoly_json(degenerate, 2, 0, &mut s) }, KrallStatus::Degenerate);
    unsafe {
        krall_spec_free(degenerate);
        krall_spec_free(spec);
    }

    let msg = unsafe { CStr::from_ptr(krall_status_message(KrallStatus::Parse)) };
    assert_eq!(msg.to_str().unwrap(), "parse error");
}

#[test]
fn k_greater_than_alpha_is_rejected() {
    let beta = CString::new("0").unwrap();
    let one = CString::new("1").unwrap();
    let a = [one.as_ptr(), one.as_ptr()];
    let mut spec = ptr::null_mut();
    let st = unsafe { krall_spec_new(1, beta.as_ptr(), a.as_ptr(), 2, &mut spec) };
    assert_eq!(st, KrallStatus::InvalidParameters);
    assert!(spec.is_null());
}
