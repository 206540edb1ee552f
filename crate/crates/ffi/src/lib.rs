//! C ABI over `cluster-pump`.
//!
//! Lattices and circuits are opaque heap handles released with their
//! `*_free` function. Every fallible call returns a [`CpStatus`]; on failure
//! the message is available from [`cp_last_error_message`] on the same
//! thread. Strings returned through out-pointers are owned by the caller and
//! released with [`cp_string_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cluster_pump::circuit::CliffordCircuit;
use cluster_pump::compiler::compile_pump;
use cluster_pump::experiment::{
    run_postselected, AcceptRule, PerturbationKind, PerturbationSpec, RunConfig,
};
use cluster_pump::lattice::{build, Family, LatticeSpec};
use cluster_pump::statevector::DEFAULT_QUBIT_CAP;
use cluster_pump::verify::{symmetry_check, verify_pump};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    CompileFailed = 4,
    ResourceCap = 5,
    Panic = 6,
}

/// Perturbation type for [`cp_perturb`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CpPerturbation {
    ZType = 0,
    XType = 1,
}

/// Opaque lattice handle.
pub struct CpLattice(LatticeSpec);

/// Opaque circuit handle.
pub struct CpCircuit(CliffordCircuit);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(CpStatus, String);

impl Fail {
    fn input(e: impl ToString) -> Self {
        Fail(CpStatus::InvalidInput, e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> CpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CpStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            CpStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail(CpStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(CpStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(CpStatus::NullPointer, format!("null {what}")))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(CpStatus::NullPointer, "null output pointer".into()));
    }
    out.write(v);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("no interior nul")
        .into_raw()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call on this thread.
#[no_mangle]
pub extern "C" fn cp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn cp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` is NULL or a string returned by this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build a lattice from a family description such as
/// `{"lattice":"square","nx":4,"ny":4,"termination":"open"}`.
///
/// # Safety
/// `family_json` is a valid C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_lattice_build(
    family_json: *const c_char,
    out: *mut *mut CpLattice,
) -> CpStatus {
    guard(|| {
        let family: Family = serde_json::from_str(read_str(family_json)?).map_err(Fail::input)?;
        let spec = build(&family).map_err(Fail::input)?;
        put(out, Box::into_raw(Box::new(CpLattice(spec))))
    })
}

/// Load a lattice from its full JSON spec.
///
/// # Safety
/// `spec_json` is a valid C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_lattice_from_json(
    spec_json: *const c_char,
    out: *mut *mut CpLattice,
) -> CpStatus {
    guard(|| {
        let spec = LatticeSpec::from_json(read_str(spec_json)?).map_err(Fail::input)?;
        put(out, Box::into_raw(Box::new(CpLattice(spec))))
    })
}

/// Serialize a lattice to JSON.
///
/// # Safety
/// `lattice` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_lattice_to_json(
    lattice: *const CpLattice,
    out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let l = handle(lattice, "lattice")?;
        put(out, owned_string(l.0.to_json()))
    })
}

/// Number of qubits, 0 for NULL.
///
/// # Safety
/// `lattice` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_lattice_num_sites(lattice: *const CpLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.0.num_sites())
}

/// # Safety
/// `lattice` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp_lattice_free(lattice: *mut CpLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Compile the lattice's pump into its reduced circuit.
///
/// # Safety
/// `lattice` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_compile(
    lattice: *const CpLattice,
    out: *mut *mut CpCircuit,
) -> CpStatus {
    guard(|| {
        let l = handle(lattice, "lattice")?;
        let pump = compile_pump(&l.0).map_err(|e| Fail(CpStatus::CompileFailed, e.to_string()))?;
        put(out, Box::into_raw(Box::new(CpCircuit(pump.reduced))))
    })
}

/// Parse a circuit in the text format.
///
/// # Safety
/// `text` is a valid C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_circuit_from_text(
    text: *const c_char,
    out: *mut *mut CpCircuit,
) -> CpStatus {
    guard(|| {
        let c: CliffordCircuit = read_str(text)?.parse().map_err(Fail::input)?;
        put(out, Box::into_raw(Box::new(CpCircuit(c))))
    })
}

/// Render a circuit in the text format.
///
/// # Safety
/// `circuit` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_circuit_to_text(
    circuit: *const CpCircuit,
    out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let c = handle(circuit, "circuit")?;
        put(out, owned_string(c.0.to_string()))
    })
}

/// Gate count, 0 for NULL.
///
/// # Safety
/// `circuit` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_circuit_num_gates(circuit: *const CpCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `circuit` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp_circuit_free(circuit: *mut CpCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Verify a circuit against the lattice. A failed verification is reported
/// through `pass`, not the status. `report_json` may be NULL.
///
/// # Safety
/// Handles are live; `pass` is writable; `report_json` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn cp_verify(
    lattice: *const CpLattice,
    circuit: *const CpCircuit,
    pass: *mut bool,
    report_json: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let l = handle(lattice, "lattice")?;
        let c = handle(circuit, "circuit")?;
        let r = verify_pump(&l.0, &c.0).map_err(Fail::input)?;
        put(pass, r.pass)?;
        if !report_json.is_null() {
            put(
                report_json,
                owned_string(serde_json::to_string(&r).expect("serializable")),
            )?;
        }
        Ok(())
    })
}

/// Symmetry certificate for every term/generator pair. `report_json` may be
/// NULL.
///
/// # Safety
/// `lattice` is live; `pass` is writable; `report_json` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn cp_symcheck(
    lattice: *const CpLattice,
    pass: *mut bool,
    report_json: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let l = handle(lattice, "lattice")?;
        let r = symmetry_check(&l.0);
        put(pass, r.pass)?;
        if !report_json.is_null() {
            put(
                report_json,
                owned_string(serde_json::to_string(&r).expect("serializable")),
            )?;
        }
        Ok(())
    })
}

/// Post-selected perturbation run; the result is written as JSON.
///
/// # Safety
/// `lattice` is live; `result_json` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_perturb(
    lattice: *const CpLattice,
    kind: CpPerturbation,
    epsilon: f64,
    seed: u64,
    samples: usize,
    result_json: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let l = handle(lattice, "lattice")?;
        let p = PerturbationSpec {
            kind: match kind {
                CpPerturbation::ZType => PerturbationKind::ZType,
                CpPerturbation::XType => PerturbationKind::XType,
            },
            epsilon,
            disorder_seed: None,
        };
        let cfg = RunConfig {
            seed,
            samples,
            accept_rule: AcceptRule::PerGenerator,
            cap: DEFAULT_QUBIT_CAP,
        };
        let r = run_postselected(&l.0, &p, &cfg).map_err(|e| {
            let code = if e.is_resource_cap() {
                CpStatus::ResourceCap
            } else {
                CpStatus::InvalidInput
            };
            Fail(code, e.to_string())
        })?;
        put(
            result_json,
            owned_string(serde_json::to_string(&r).expect("serializable")),
        )
    })
}
