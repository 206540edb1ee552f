use std::ffi::{c_char, CStr, CString};
use std::ptr;

use cluster_pump_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { cp_string_free(s) };
    out
}

fn last_error() -> String {
    let p = cp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn square(n: usize) -> *mut CpLattice {
    let json = CString::new(format!(
        r#"{{"lattice":"square","nx":{n},"ny":{n},"termination":"open"}}"#
    ))
    .unwrap();
    let mut l = ptr::null_mut();
    assert_eq!(
        unsafe { cp_lattice_build(json.as_ptr(), &mut l) },
        CpStatus::Ok
    );
    l
}

#[test]
fn compile_and_verify_round_trip() {
    let l = square(4);
    assert_eq!(unsafe { cp_lattice_num_sites(l) }, 16);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { cp_compile(l, &mut c) }, CpStatus::Ok);
    // 4x4 perimeter: 12 CZ
    assert_eq!(unsafe { cp_circuit_num_gates(c) }, 12);

    let mut pass = false;
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { cp_verify(l, c, &mut pass, &mut report) },
        CpStatus::Ok
    );
    assert!(pass);
    assert!(take(report).contains("\"pass\":true"));

    // text round trip, then drop the first gate
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { cp_circuit_to_text(c, &mut text) }, CpStatus::Ok);
    let text = take(text);
    let mutated: String = text
        .lines()
        .filter(|l| !l.starts_with("CZ 0 1"))
        .map(|l| format!("{l}\n"))
        .collect();
    let mutated = CString::new(mutated).unwrap();
    let mut c2 = ptr::null_mut();
    assert_eq!(
        unsafe { cp_circuit_from_text(mutated.as_ptr(), &mut c2) },
        CpStatus::Ok
    );
    assert_eq!(
        unsafe { cp_verify(l, c2, &mut pass, ptr::null_mut()) },
        CpStatus::Ok
    );
    assert!(!pass);

    unsafe {
        cp_circuit_free(c);
        cp_circuit_free(c2);
        cp_lattice_free(l);
    }
}

#[test]
fn errors_are_reported() {
    let bad = CString::new(r#"{"lattice":"square","nx":0,"ny":4,"termination":"open"}"#).unwrap();
    let mut l = ptr::null_mut();
    assert_eq!(
        unsafe { cp_lattice_build(bad.as_ptr(), &mut l) },
        CpStatus::InvalidInput
    );
    assert!(l.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { cp_lattice_build(ptr::null(), &mut l) },
        CpStatus::NullPointer
    );
    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { cp_compile(ptr::null(), &mut c) },
        CpStatus::NullPointer
    );
    let garbage = CString::new("CZ 0 0\n").unwrap();
    assert_eq!(
        unsafe { cp_circuit_from_text(garbage.as_ptr(), &mut c) },
        CpStatus::InvalidInput
    );

    // success clears the message
    let l = square(2);
    assert!(cp_last_error_message().is_null());
    unsafe { cp_lattice_free(l) };
    unsafe { cp_lattice_free(ptr::null_mut()) };
    unsafe { cp_string_free(ptr::null_mut()) };
}

#[test]
fn symcheck_and_perturb() {
    let l = square(3);
    let mut pass = false;
    assert_eq!(
        unsafe { cp_symcheck(l, &mut pass, ptr::null_mut()) },
        CpStatus::Ok
    );
    assert!(pass);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { cp_perturb(l, CpPerturbation::ZType, 0.0, 7, 100, &mut out) },
        CpStatus::Ok
    );
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["p_fail_exact"].as_f64().unwrap(), 0.0);
    unsafe { cp_lattice_free(l) };

    let big = square(5);
    assert_eq!(
        unsafe { cp_perturb(big, CpPerturbation::XType, 0.1, 7, 100, &mut out) },
        CpStatus::ResourceCap
    );
    unsafe { cp_lattice_free(big) };
}

#[test]
fn json_round_trip_through_handles() {
    let l = square(3);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cp_lattice_to_json(l, &mut s) }, CpStatus::Ok);
    let json = CString::new(take(s)).unwrap();
    let mut l2 = ptr::null_mut();
    assert_eq!(
        unsafe { cp_lattice_from_json(json.as_ptr(), &mut l2) },
        CpStatus::Ok
    );
    assert_eq!(unsafe { cp_lattice_num_sites(l2) }, 9);
    let v = unsafe { CStr::from_ptr(cp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    unsafe {
        cp_lattice_free(l);
        cp_lattice_free(l2);
    }
}
