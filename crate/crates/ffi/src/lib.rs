//! C ABI over `karp-core`.
//!
//! Instances and certificates cross the boundary as opaque handles; every
//! other value travels as a NUL-terminated JSON string. Functions return a
//! [`KarpStatus`]; on failure [`karp_last_error_message`] describes the
//! error. Strings returned through `char **` out-parameters belong to the
//! caller and are released with [`karp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use karp_core::genlab::{generate, GeneratorSpec};
use karp_core::growth::audit;
use karp_core::instances::verify_certificate;
use karp_core::oracles::solve;
use karp_core::reductions::{by_id, route_to_kernel, Chain};
use karp_core::{measure, Certificate, Error, Problem};

/// Opaque problem instance.
pub struct KarpInstance(Problem);

/// Opaque certificate.
pub struct KarpCertificate(Certificate);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KarpStatus {
    Ok = 0,
    /// The oracle answered NO, or the certificate is invalid.
    No = 1,
    NullPointer = 2,
    InvalidUtf8 = 3,
    Parse = 4,
    InvalidInstance = 5,
    InvalidCertificate = 6,
    KindMismatch = 7,
    UnknownName = 8,
    BudgetExceeded = 9,
    Unsupported = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KarpSizeMode {
    Element = 0,
    Bits = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> KarpStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) => KarpStatus::Parse,
        Error::InvalidInstance(_) | Error::Contract(_) | Error::Io(_) => KarpStatus::InvalidInstance,
        Error::InvalidCertificate(_) | Error::CertificateMismatch { .. } => KarpStatus::InvalidCertificate,
        Error::KindMismatch { .. } | Error::BrokenChain { .. } => KarpStatus::KindMismatch,
        Error::UnknownReduction(_) | Error::UnknownKind(_) => KarpStatus::UnknownName,
        Error::BudgetExceeded { .. } | Error::VarCapExceeded { .. } => KarpStatus::BudgetExceeded,
        Error::UnsupportedKind(_) => KarpStatus::Unsupported,
    }
}

/// Failure raised inside a call body.
enum Fail {
    Status(KarpStatus, String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail::Core(Error::Json(e))
    }
}

fn guard(body: impl FnOnce() -> Result<KarpStatus, Fail>) -> KarpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            status
        }
        Ok(Err(Fail::Status(status, msg))) => {
            set_error(msg);
            status
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            KarpStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(KarpStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(KarpStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String, what: &str) -> Result<(), Fail> {
    let s = CString::new(s).map_err(|_| Fail::Status(KarpStatus::Parse, "string holds a NUL byte".into()))?;
    if out.is_null() {
        return Err(null(what));
    }
    out.write(s.into_raw());
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Parses a `{"kind", "payload"}` envelope.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn karp_instance_from_json(json: *const c_char, out: *mut *mut KarpInstance) -> KarpStatus {
    guard(|| {
        let problem: Problem = serde_json::from_str(text(json, "json")?)?;
        problem.validate()?;
        put(out, boxed(KarpInstance(problem)), "out")?;
        Ok(KarpStatus::Ok)
    })
}

/// # Safety
/// `instance` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn karp_instance_to_json(instance: *const KarpInstance, out: *mut *mut c_char) -> KarpStatus {
    guard(|| {
        let inst = handle(instance, "instance")?;
        put_string(out, serde_json::to_string(&inst.0)?, "out")?;
        Ok(KarpStatus::Ok)
    })
}

/// Writes the instance's kind tag.
///
/// # Safety
/// As for [`karp_instance_to_json`].
#[no_mangle]
pub unsafe extern "C" fn karp_instance_kind(instance: *const KarpInstance, out: *mut *mut c_char) -> KarpStatus {
    guard(|| {
        let inst = handle(instance, "instance")?;
        put_string(out, inst.0.kind().tag().to_string(), "out")?;
        Ok(KarpStatus::Ok)
    })
}

/// # Safety
/// `instance` must come from this library and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn karp_instance_free(instance: *mut KarpInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn karp_certificate_from_json(json: *const c_char, out: *mut *mut KarpCertificate) -> KarpStatus {
    guard(|| {
        let cert: Certificate = serde_json::from_str(text(json, "json")?)?;
        put(out, boxed(KarpCertificate(cert)), "out")?;
        Ok(KarpStatus::Ok)
    })
}

/// # Safety
/// `cert` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn karp_certificate_to_json(cert: *const KarpCertificate, out: *mut *mut c_char) -> KarpStatus {
    guard(|| {
        let cert = handle(cert, "cert")?;
        put_string(out, serde_json::to_string(&cert.0)?, "out")?;
        Ok(KarpStatus::Ok)
    })
}

/// # Safety
/// `cert` must come from this library and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn karp_certificate_free(cert: *mut KarpCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// # Safety
/// `instance` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn karp_measure(instance: *const KarpInstance, mode: KarpSizeMode, out: *mut u64) -> KarpStatus {
    guard(|| {
        let size = measure(&handle(instance, "instance")?.0)?;
        let value = match mode {
            KarpSizeMode::Element => size.elements,
            KarpSizeMode::Bits => size.bits,
        };
        put(out, value, "out")?;
        Ok(KarpStatus::Ok)
    })
}

/// Applies the reduction named `reduction_id`.
///
/// # Safety
/// `instance` must come from this library, `reduction_id` must be a valid C
/// string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn karp_reduce(
    instance: *const KarpInstance,
    reduction_id: *const c_char,
    out: *mut *mut KarpInstance,
) -> KarpStatus {
    guard(|| {
        let inst = handle(instance, "instance")?;
        let target = by_id(text(reduction_id, "reduction_id")?)?.apply(&inst.0)?;
        put(out, boxed(KarpInstance(target)), "out")?;
        Ok(KarpStatus::Ok)
    })
}

/// Routes the instance into the kernel. `manifest` receives the chain as a
/// JSON list of reduction ids and may be null.
///
/// # Safety
/// `instance` must come from this library; `out` must be writable;
/// `manifest` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn karp_route_to_kernel(
    instance: *const KarpInstance,
    out: *mut *mut KarpInstance,
    manifest: *mut *mut c_char,
) -> KarpStatus {
    guard(|| {
        let inst = handle(instance, "instance")?;
        let chain = route_to_kernel(inst.0.kind());
        let trace = chain.apply(&inst.0)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !manifest.is_null() {
            put_string(manifest, serde_json::to_string(&chain.ids())?, "manifest")?;
        }
        put(out, boxed(KarpInstance(trace.output().clone())), "out")?;
        Ok(KarpStatus::Ok)
    })
}

/// Decides the instance exhaustively. Returns `Ok` with a certificate for
/// YES, `No` with `*cert` set to null for NO, and `BudgetExceeded` when the
/// candidate space is larger than `budget`.
///
/// # Safety
/// `instance` must come from this library; `cert` must be writable.
#[no_mangle]
pub unsafe extern "C" fn karp_solve(
    instance: *const KarpInstance,
    budget: u64,
    cert: *mut *mut KarpCertificate,
) -> KarpStatus {
    guard(|| {
        let inst = handle(instance, "instance")?;
        if cert.is_null() {
            return Err(null("cert"));
        }
        let verdict = solve(&inst.0, budget as u128)?;
        match verdict.certificate {
            Some(c) => {
                put(cert, boxed(KarpCertificate(c)), "cert")?;
                Ok(KarpStatus::Ok)
            }
            None => {
                put(cert, ptr::null_mut(), "cert")?;
                Ok(KarpStatus::No)
            }
        }
    })
}

/// Returns `Ok` for a valid certificate and `No` for an invalid one.
///
/// # Safety
/// Both handles must come from this library.
#[no_mangle]
pub unsafe extern "C" fn karp_verify(instance: *const KarpInstance, cert: *const KarpCertificate) -> KarpStatus {
    guard(|| {
        let ok = verify_certificate(&handle(instance, "instance")?.0, &handle(cert, "cert")?.0)?;
        Ok(if ok { KarpStatus::Ok } else { KarpStatus::No })
    })
}

/// Lifts `cert`, a certificate for the output of the chain in `chain_json`
/// (a JSON list of reduction ids), back to `source`.
///
/// # Safety
/// Handles must come from this library, `chain_json` must be a valid C
/// string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn karp_lift(
    source: *const KarpInstance,
    chain_json: *const c_char,
    cert: *const KarpCertificate,
    out: *mut *mut KarpCertificate,
) -> KarpStatus {
    guard(|| {
        let source = handle(source, "source")?;
        let ids: Vec<String> = serde_json::from_str(text(chain_json, "chain_json")?)?;
        let lifted = Chain::from_ids(&ids)?.lift(&source.0, &handle(cert, "cert")?.0)?;
        put(out, boxed(KarpCertificate(lifted)), "out")?;
        Ok(KarpStatus::Ok)
    })
}

/// Audits a reduction over the generator spec in `family_json` at
/// `scale_count` scale points and writes the report as JSON. Returns `No`
/// when the bound or a count formula fails.
///
/// # Safety
/// Strings must be valid C strings, `scales` must point to `scale_count`
/// values (or be null when the count is zero) and `report_json` writable.
#[no_mangle]
pub unsafe extern "C" fn karp_audit(
    reduction_id: *const c_char,
    family_json: *const c_char,
    scales: *const usize,
    scale_count: usize,
    report_json: *mut *mut c_char,
) -> KarpStatus {
    guard(|| {
        let family: GeneratorSpec = serde_json::from_str(text(family_json, "family_json")?)?;
        let scales = match scale_count {
            0 => &[][..],
            _ if scales.is_null() => return Err(null("scales")),
            n => std::slice::from_raw_parts(scales, n),
        };
        let report = audit(text(reduction_id, "reduction_id")?, &family, scales)?;
        put_string(report_json, serde_json::to_string(&report)?, "report_json")?;
        Ok(if report.passed && report.formulas_hold { KarpStatus::Ok } else { KarpStatus::No })
    })
}

/// Generates an instance from a JSON generator spec.
///
/// # Safety
/// `spec_json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn karp_generate(spec_json: *const c_char, out: *mut *mut KarpInstance) -> KarpStatus {
    guard(|| {
        let spec: GeneratorSpec = serde_json::from_str(text(spec_json, "spec_json")?)?;
        put(out, boxed(KarpInstance(generate(&spec)?)), "out")?;
        Ok(KarpStatus::Ok)
    })
}

/// # Safety
/// `s` must be a string returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn karp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn karp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
