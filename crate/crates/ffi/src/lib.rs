//! C ABI over `bjorth`.
//!
//! Spaces and operators are opaque heap handles freed with their `_free`
//! function. Every fallible call returns a `BjStatus`; on failure the
//! message is kept per thread and read with `bj_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bjorth::io;
use bjorth::operators::{self, Operator, PreservationConfig};
use bjorth::orthogonality::{self, OrthoConfig};
use bjorth::space::{preset_space, Preset, Space};
use bjorth::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BjStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    DimensionMismatch = 4,
    OutOfRange = 5,
    ZeroVector = 6,
    Unsupported = 7,
    Degenerate = 8,
    HypothesisUnmet = 9,
    Internal = 99,
}

pub struct BjSpace(Space);

pub struct BjOperator(Operator);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BjStatus {
    match e {
        Error::Parse(_) | Error::UnknownPreset(_) | Error::UnknownExperiment(_) => BjStatus::Parse,
        Error::DimensionMismatch { .. } => BjStatus::DimensionMismatch,
        Error::OutOfRange { .. } | Error::BadEpsilon(_) | Error::UnsupportedP(_) => BjStatus::OutOfRange,
        Error::ZeroVector | Error::ZeroOperator => BjStatus::ZeroVector,
        Error::UnsupportedSpace(_) | Error::UnsupportedDimension { .. } => BjStatus::Unsupported,
        Error::EmptyInput
        | Error::DegenerateSpan { .. }
        | Error::AsymmetricInput { .. }
        | Error::NumericallyIllConditioned { .. }
        | Error::DependentFunctionals => BjStatus::Degenerate,
        Error::HypothesisUnmet(_) | Error::TooFewFunctionals { .. } => BjStatus::HypothesisUnmet,
    }
}

enum Fail {
    Status(BjStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, turning errors and panics into a status plus a stored message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BjStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BjStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            BjStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(BjStatus::NullPointer, format!("null {what}"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(BjStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn space_ref<'a>(s: *const BjSpace) -> Result<&'a Space, Fail> {
    s.as_ref().map(|s| &s.0).ok_or_else(|| null("space"))
}

unsafe fn op_ref<'a>(o: *const BjOperator) -> Result<&'a Operator, Fail> {
    o.as_ref().map(|o| &o.0).ok_or_else(|| null("operator"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = v;
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn bj_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a preset name such as `linf(3)` or `regular_2n_gon(4)`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_space_from_preset(name: *const c_char, out: *mut *mut BjSpace) -> BjStatus {
    guard(|| {
        let preset: Preset = text(name, "name")?.parse()?;
        let s = preset_space(&preset)?;
        put(out, Box::into_raw(Box::new(BjSpace(s))))
    })
}

/// Build a space from its JSON description (floating point).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_space_from_json(json: *const c_char, out: *mut *mut BjSpace) -> BjStatus {
    guard(|| {
        let loaded = io::space_from_json(text(json, "json")?, None)?;
        put(out, Box::into_raw(Box::new(BjSpace(loaded.space))))
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn bj_space_free(s: *mut BjSpace) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Dimension of the space, or 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bj_space_dim(s: *const BjSpace) -> usize {
    s.as_ref().map_or(0, |s| s.0.dim())
}

/// # Safety
/// `x` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_norm(s: *const BjSpace, x: *const f64, len: usize, out: *mut f64) -> BjStatus {
    guard(|| {
        let n = space_ref(s)?.norm(slice(x, len, "x")?)?;
        put(out, n)
    })
}

/// Number of extreme supporting functionals at `x`.
///
/// # Safety
/// `x` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_support_count(s: *const BjSpace, x: *const f64, len: usize, out: *mut usize) -> BjStatus {
    guard(|| {
        let set = space_ref(s)?.support_set(slice(x, len, "x")?)?;
        put(out, set.extreme_count())
    })
}

/// Decide `x ⊥_eps y`; `eps = 0` is Birkhoff-James orthogonality. The
/// signed margin is written to `margin` when it is not NULL.
///
/// # Safety
/// `x` and `y` must point to `len` doubles; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_eps_orthogonal(
    s: *const BjSpace,
    x: *const f64,
    y: *const f64,
    len: usize,
    eps: f64,
    tol: f64,
    holds: *mut bool,
    margin: *mut f64,
) -> BjStatus {
    guard(|| {
        let cfg = OrthoConfig {
            epsilon: eps,
            tol,
            ..Default::default()
        };
        let d = orthogonality::is_eps_orthogonal(space_ref(s)?, slice(x, len, "x")?, slice(y, len, "y")?, &cfg)?;
        if !margin.is_null() {
            *margin = d.margin;
        }
        put(holds, d.holds)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_epsilon_x(s: *const BjSpace, out: *mut f64) -> BjStatus {
    guard(|| {
        let e = orthogonality::epsilon_x(space_ref(s)?)?;
        put(out, e.value)
    })
}

/// Parse an operator from JSON (matrix plus domain and codomain spaces).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_operator_from_json(json: *const c_char, out: *mut *mut BjOperator) -> BjStatus {
    guard(|| {
        let loaded = io::operator_from_json(text(json, "json")?, None)?;
        put(out, Box::into_raw(Box::new(BjOperator(loaded.op))))
    })
}

/// Row-major `rows x cols` matrix between two spaces. The spaces are
/// copied; the caller keeps ownership of them.
///
/// # Safety
/// `data` must point to `rows * cols` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_operator_new(
    data: *const f64,
    rows: usize,
    cols: usize,
    domain: *const BjSpace,
    codomain: *const BjSpace,
    out: *mut *mut BjOperator,
) -> BjStatus {
    guard(|| {
        let flat = slice(data, rows * cols, "data")?;
        let m: Vec<Vec<f64>> = flat.chunks(cols.max(1)).map(<[f64]>::to_vec).collect();
        let op = Operator::new(&m, space_ref(domain)?.clone(), space_ref(codomain)?.clone())?;
        put(out, Box::into_raw(Box::new(BjOperator(op))))
    })
}

/// # Safety
/// `o` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn bj_operator_free(o: *mut BjOperator) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Does the operator preserve eps-orthogonality at `x`?
///
/// # Safety
/// `x` must point to `len` doubles; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_preserves_eps_at(
    o: *const BjOperator,
    x: *const f64,
    len: usize,
    eps: f64,
    seed: u64,
    holds: *mut bool,
) -> BjStatus {
    guard(|| {
        let cfg = PreservationConfig {
            seed,
            ..Default::default()
        };
        let v = operators::preserves_eps_at(op_ref(o)?, slice(x, len, "x")?, eps, &cfg)?;
        put(holds, v.holds)
    })
}

/// Writes `k > 0` when the operator is `k` times an isometry, else 0.
///
/// # Safety
/// `k` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_is_scalar_isometry(o: *const BjOperator, tol: f64, k: *mut f64) -> BjStatus {
    guard(|| {
        let r = operators::is_scalar_isometry(op_ref(o)?, tol)?;
        put(k, r.unwrap_or(0.0))
    })
}
