//! C ABI over `krall-core`.
//!
//! Objects are opaque handles freed with their `_free` function. Every call
//! returns a `KrallStatus`; on failure `krall_last_error` describes it.
//! Strings returned through `out` parameters are owned by the caller and
//! must be released with `krall_string_free`. Rationals cross the boundary
//! as strings such as `"-3/4"`, polynomials as JSON arrays of such strings
//! (constant term first).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use krall_core::algebra::AlgebraContext;
use krall_core::darboux::{DarbouxSpec, QFamily};
use krall_core::rat::{self, Rat};
use krall_core::{fit_bf, Error, NcOp, UniPoly, Var};

/// Result codes. `Ok` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrallStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidParameters = 4,
    Degenerate = 5,
    NotInAlgebra = 6,
    Failed = 7,
    Panic = 8,
}

/// A Darboux specification together with its memoized polynomials.
pub struct KrallSpec {
    family: QFamily,
}

/// An operator in normal form `sum c_ij D1^i D2^j`.
pub struct KrallOperator {
    op: NcOp,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(KrallStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::ParseRational(_) | Error::Malformed(_) | Error::Cache(_) => KrallStatus::Parse,
            Error::Degenerate(_) | Error::SingularRecurrence(_) => KrallStatus::Degenerate,
            Error::NotInAlgebra => KrallStatus::NotInAlgebra,
            Error::InvalidParameters(_) | Error::VariableMismatch { .. } | Error::BetaMismatch(..) => {
                KrallStatus::InvalidParameters
            }
            _ => KrallStatus::Failed,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> KrallStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            KrallStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            KrallStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure(KrallStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(KrallStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| Failure(KrallStatus::NullPointer, format!("null {what}")))
}

fn check_out<T>(out: *mut T) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure(KrallStatus::NullPointer, "null output pointer".into()));
    }
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    let c = CString::new(s).map_err(|_| Failure(KrallStatus::Failed, "string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn poly_to_json(p: &UniPoly) -> String {
    let v: Vec<String> = p.coeffs().iter().map(rat::to_string).collect();
    serde_json::to_string(&v).expect("strings serialize")
}

fn poly_from_json(text: &str, var: Var) -> FfiResult<UniPoly> {
    let v: Vec<String> =
        serde_json::from_str(text).map_err(|e| Failure(KrallStatus::Parse, format!("polynomial JSON: {e}")))?;
    let coeffs = v.iter().map(|c| rat::parse(c)).collect::<krall_core::Result<Vec<Rat>>>()?;
    Ok(UniPoly::from_coeffs(var, coeffs))
}

/// Creates a spec from `alpha`, `beta` and the `k` strings in `a`.
///
/// # Safety
/// `beta` must be a NUL-terminated string, `a` must point to `k` such strings
/// (or may be null when `k == 0`), and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn krall_spec_new(
    alpha: u32,
    beta: *const c_char,
    a: *const *const c_char,
    k: usize,
    out: *mut *mut KrallSpec,
) -> KrallStatus {
    guard(|| {
        check_out(out)?;
        let beta = rat::parse(read_str(beta)?)?;
        let mut params = Vec::with_capacity(k);
        if k > 0 {
            if a.is_null() {
                return Err(Failure(KrallStatus::NullPointer, "null parameter array".into()));
            }
            for i in 0..k {
                params.push(rat::parse(read_str(*a.add(i))?)?);
            }
        }
        let family = QFamily::new(DarbouxSpec::new(alpha, beta, params)?)?;
        *out = Box::into_raw(Box::new(KrallSpec { family }));
        Ok(())
    })
}

/// # Safety
/// `spec` must come from `krall_spec_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn krall_spec_free(spec: *mut KrallSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Writes the coefficients of `hat q_{n,s}` (`q_n` when `s = 0`) as JSON.
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn krall_qpoly_json(spec: *const KrallSpec, n: usize, s: u32, out: *mut *mut c_char) -> KrallStatus {
    guard(|| {
        check_out(out)?;
        let spec = deref(spec, "spec")?;
        spec.family.check_generic(n)?;
        let q = spec.family.hat_q(n, s)?;
        write_string(out, poly_to_json(&q))
    })
}

/// Writes a basis of the algebra up to `degree` as a JSON array of polynomials in `t`.
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn krall_algebra_basis_json(spec: *const KrallSpec, degree: usize, out: *mut *mut c_char) -> KrallStatus {
    guard(|| {
        check_out(out)?;
        let spec = deref(spec, "spec")?;
        let basis = AlgebraContext::new(spec.family.spec())?.basis(degree)?;
        let items: Vec<String> = basis.iter().map(poly_to_json).collect();
        write_string(out, format!("[{}]", items.join(",")))
    })
}

/// Fits `B_f` for `f` given as a JSON coefficient array in `t`.
///
/// # Safety
/// `spec` must be a live handle, `f_json` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn krall_fit(spec: *const KrallSpec, f_json: *const c_char, out: *mut *mut KrallOperator) -> KrallStatus {
    guard(|| {
        check_out(out)?;
        let spec = deref(spec, "spec")?;
        let f = poly_from_json(read_str(f_json)?, Var::T)?;
        let op = fit_bf(&f, &spec.family)?;
        *out = Box::into_raw(Box::new(KrallOperator { op }));
        Ok(())
    })
}

/// Parses an operator in the cache format `{"beta": "..", "terms": [[i, j, "c"], ..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn krall_operator_from_json(json: *const c_char, out: *mut *mut KrallOperator) -> KrallStatus {
    guard(|| {
        check_out(out)?;
        let v: serde_json::Value = serde_json::from_str(read_str(json)?)
            .map_err(|e| Failure(KrallStatus::Parse, format!("operator JSON: {e}")))?;
        let op = NcOp::from_json(&v)?;
        *out = Box::into_raw(Box::new(KrallOperator { op }));
        Ok(())
    })
}

/// # Safety
/// `op` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn krall_operator_to_json(op: *const KrallOperator, out: *mut *mut c_char) -> KrallStatus {
    guard(|| {
        check_out(out)?;
        let op = deref(op, "operator")?;
        let text = serde_json::to_string(&op.op.to_json()).expect("values serialize");
        write_string(out, text)
    })
}

/// Applies the operator, in its weight-`s` realization, to a polynomial in `z`.
///
/// # Safety
/// `op` must be a live handle, `p_json` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn krall_operator_apply_json(
    op: *const KrallOperator,
    p_json: *const c_char,
    s: u32,
    out: *mut *mut c_char,
) -> KrallStatus {
    guard(|| {
        check_out(out)?;
        let op = deref(op, "operator")?;
        let p = poly_from_json(read_str(p_json)?, Var::Z)?;
        write_string(out, poly_to_json(&op.op.realize(&p, s)))
    })
}

/// `[a, b] = ab - ba`.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn krall_operator_commutator(
    a: *const KrallOperator,
    b: *const KrallOperator,
    out: *mut *mut KrallOperator,
) -> KrallStatus {
    guard(|| {
        check_out(out)?;
        let (a, b) = (deref(a, "operator")?, deref(b, "operator")?);
        let op = a.op.commutator(&b.op)?;
        *out = Box::into_raw(Box::new(KrallOperator { op }));
        Ok(())
    })
}

/// Nonzero when the operator is zero.
///
/// # Safety
/// `op` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn krall_operator_is_zero(op: *const KrallOperator) -> i32 {
    match op.as_ref() {
        Some(o) => o.op.is_zero() as i32,
        None => 0,
    }
}

/// # Safety
/// `op` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn krall_operator_free(op: *mut KrallOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn krall_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn krall_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn krall_status_message(status: KrallStatus) -> *const c_char {
    let s: &'static CStr = match status {
        KrallStatus::Ok => c"ok",
        KrallStatus::NullPointer => c"null pointer",
        KrallStatus::InvalidUtf8 => c"invalid UTF-8",
        KrallStatus::Parse => c"parse error",
        KrallStatus::InvalidParameters => c"invalid parameters",
        KrallStatus::Degenerate => c"degenerate parameters",
        KrallStatus::NotInAlgebra => c"polynomial is not in the algebra",
        KrallStatus::Failed => c"operation failed",
        KrallStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}
