//! C ABI over `z8sums`.
//!
//! Every fallible call returns a [`Z8Status`]; on failure the message is
//! kept per thread and read back with [`z8_last_error_message`]. Ring
//! elements cross the boundary as four `int64_t` coordinates in the basis
//! 1, ω, ω², ω³. Handles are opaque and released with their `_free`
//! function; strings returned by the library are released with
//! [`z8_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use num_complex::Complex64;
use z8sums::characters::{power_symbol, AdditiveMode};
use z8sums::error::Error;
use z8sums::expsums::{self, PolySpec, Report, TwistSpec};
use z8sums::ring::{CycInt, Modulus};
use z8sums::series::{self, SeriesPoint};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Z8Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Precondition = 3,
    Hypothesis = 4,
    NotCoprime = 5,
    TooLarge = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Z8Mode {
    Plain = 0,
    Different = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Z8Complex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Z8Complex {
    fn from(z: Complex64) -> Self {
        Z8Complex { re: z.re, im: z.im }
    }
}

/// A modulus c of Z[ω₈] with its residue system.
pub struct Z8Modulus(Modulus);

/// The outcome of an identity evaluation.
pub struct Z8Report(Report);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> Z8Status {
    match e {
        Error::Precondition(_) | Error::Unit | Error::EvenRamified | Error::NoNormalizedAssociate => Z8Status::Precondition,
        Error::Hypothesis(_) => Z8Status::Hypothesis,
        Error::NotCoprime(_) => Z8Status::NotCoprime,
        Error::TooLarge { .. } => Z8Status::TooLarge,
        _ => Z8Status::InvalidArgument,
    }
}

struct Fail(Z8Status, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(Z8Status::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> Z8Status {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Z8Status::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            Z8Status::Internal
        }
    }
}

unsafe fn elem(p: *const i64, what: &str) -> Result<CycInt, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    let c = std::slice::from_raw_parts(p, 4);
    Ok(CycInt::from_i64s([c[0], c[1], c[2], c[3]]))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(Z8Status::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Additive modes travel as plain integers so that a bad value from C is
/// an error rather than an invalid enum.
fn mode(m: u32) -> Result<AdditiveMode, Fail> {
    match m {
        m if m == Z8Mode::Plain as u32 => Ok(AdditiveMode::Plain),
        m if m == Z8Mode::Different as u32 => Ok(AdditiveMode::Different),
        _ => Err(Fail(Z8Status::InvalidArgument, format!("unknown additive mode {m}"))),
    }
}

fn poly(s: &str) -> Result<PolySpec, Fail> {
    s.parse().map_err(Fail::from)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn z8_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated,
/// always NUL-terminated when `len > 0`). Returns the full message length,
/// or 0 when the last call succeeded.
///
/// # Safety
/// `buf` must be valid for `len` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn z8_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn z8_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the modulus with generator `coeffs`.
///
/// # Safety
/// `coeffs` must point to four values; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn z8_modulus_new(coeffs: *const i64, result: *mut *mut Z8Modulus) -> Z8Status {
    guard(|| {
        let c = elem(coeffs, "coeffs")?;
        let slot = out(result, "result")?;
        *slot = Box::into_raw(Box::new(Z8Modulus(Modulus::new(c)?)));
        Ok(())
    })
}

/// # Safety
/// `m` must come from [`z8_modulus_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn z8_modulus_free(m: *mut Z8Modulus) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `norm` must be writable.
#[no_mangle]
pub unsafe extern "C" fn z8_modulus_norm(m: *const Z8Modulus, norm: *mut u64) -> Z8Status {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("modulus"))?;
        *out(norm, "norm")? = m.0.norm();
        Ok(())
    })
}

/// (a/c)_k for k ∈ {2, 4} as the exponent j of i^j, or −1 when a and c
/// are not coprime.
///
/// # Safety
/// `a` and `c` must point to four values; `exponent` must be writable.
#[no_mangle]
pub unsafe extern "C" fn z8_power_symbol(a: *const i64, c: *const i64, k: u32, exponent: *mut i32) -> Z8Status {
    guard(|| {
        let (a, c) = (elem(a, "a")?, elem(c, "c")?);
        let v = power_symbol(&a, &c, k)?;
        *out(exponent, "exponent")? = v.exponent().map_or(-1, i32::from);
        Ok(())
    })
}

/// Σ_{x mod c} ψ_c(f(x)) by enumeration; `poly` is "coef:exp,...".
///
/// # Safety
/// `poly` must be a NUL-terminated string; `m` a live handle; `value`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn z8_complete_sum(
    poly: *const c_char,
    m: *const Z8Modulus,
    mode: u32,
    value: *mut Z8Complex,
) -> Z8Status {
    guard(|| {
        let f = self::poly(text(poly, "poly")?)?;
        let m = m.as_ref().ok_or_else(|| null("modulus"))?;
        let v = expsums::complete_sum(&f, &m.0, &TwistSpec::None, self::mode(mode)?)?;
        *out(value, "value")? = v.value.into();
        Ok(())
    })
}

/// The twisted Kloosterman sum S₄(r, s; c).
///
/// # Safety
/// `r` and `s` must point to four values; `m` a live handle; `value`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn z8_kloosterman_s4(
    r: *const i64,
    s: *const i64,
    m: *const Z8Modulus,
    mode: u32,
    value: *mut Z8Complex,
) -> Z8Status {
    guard(|| {
        let (r, s) = (elem(r, "r")?, elem(s, "s")?);
        let m = m.as_ref().ok_or_else(|| null("modulus"))?;
        *out(value, "value")? = expsums::kloosterman_s4(&r, &s, &m.0, self::mode(mode)?)?.value.into();
        Ok(())
    })
}

/// The prime identity for Σψ(Ax⁴+Bx²) at the prime p.
///
/// # Safety
/// `a`, `b` and `p` must point to four values; `report` writable.
#[no_mangle]
pub unsafe extern "C" fn z8_identity_prime(
    a: *const i64,
    b: *const i64,
    p: *const i64,
    mode: u32,
    report: *mut *mut Z8Report,
) -> Z8Status {
    guard(|| {
        let (a, b, p) = (elem(a, "a")?, elem(b, "b")?, elem(p, "p")?);
        let r = expsums::identity_prime(&a, &b, &p, self::mode(mode)?)?;
        *out(report, "report")? = Box::into_raw(Box::new(Z8Report(r)));
        Ok(())
    })
}

/// The composite decomposition of Σψ_c(Ax⁴+Bx²) for c ≡ 1 mod 4.
///
/// # Safety
/// `a` and `b` must point to four values; `m` a live handle; `report`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn z8_identity_composite(
    a: *const i64,
    b: *const i64,
    m: *const Z8Modulus,
    mode: u32,
    report: *mut *mut Z8Report,
) -> Z8Status {
    guard(|| {
        let (a, b) = (elem(a, "a")?, elem(b, "b")?);
        let m = m.as_ref().ok_or_else(|| null("modulus"))?;
        let r = expsums::identity_composite(&a, &b, &m.0, self::mode(mode)?)?;
        *out(report, "report")? = Box::into_raw(Box::new(Z8Report(r)));
        Ok(())
    })
}

/// Absolute residual and the scale √N(c) it is judged against.
///
/// # Safety
/// `r` must be a live handle; `residual` and `scale` writable.
#[no_mangle]
pub unsafe extern "C" fn z8_report_residual(r: *const Z8Report, residual: *mut f64, scale: *mut f64) -> Z8Status {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("report"))?;
        *out(residual, "residual")? = r.0.residual;
        *out(scale, "scale")? = r.0.scale;
        Ok(())
    })
}

/// The report as JSON; free the string with [`z8_string_free`].
///
/// # Safety
/// `r` must be a live handle; `json` writable.
#[no_mangle]
pub unsafe extern "C" fn z8_report_json(r: *const Z8Report, json: *mut *mut c_char) -> Z8Status {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("report"))?;
        let s = serde_json::to_string(&r.0).map_err(|e| Fail(Z8Status::Internal, e.to_string()))?;
        *out(json, "json")? = CString::new(s).map_err(|e| Fail(Z8Status::Internal, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `r` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn z8_report_free(r: *mut Z8Report) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// S(f, X) = Σ_{c ≤ X} Σ_{x mod c} e(f(x)/c) for f with integer
/// coefficients.
///
/// # Safety
/// `poly` must be a NUL-terminated string; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn z8_patterson_sum(poly: *const c_char, x: u64, value: *mut Z8Complex) -> Z8Status {
    guard(|| {
        let f = self::poly(text(poly, "poly")?)?;
        *out(value, "value")? = series::patterson_sum_int(&f, x)?.value.into();
        Ok(())
    })
}

/// Least-squares slope of log |value| against log X over `n` points.
///
/// # Safety
/// `xs` and `abs` must hold `n` values; `slope` and `stderr` writable.
#[no_mangle]
pub unsafe extern "C" fn z8_fit_exponent(
    xs: *const f64,
    abs: *const f64,
    n: usize,
    slope: *mut f64,
    stderr: *mut f64,
) -> Z8Status {
    guard(|| {
        if n > 0 && (xs.is_null() || abs.is_null()) {
            return Err(null("points"));
        }
        let pts: Vec<SeriesPoint> = (0..n)
            .map(|i| SeriesPoint::new(*xs.add(i), Complex64::new(*abs.add(i), 0.0), 0, Duration::ZERO))
            .collect();
        let fit = series::fit_exponent(&pts, None)?;
        *out(slope, "slope")? = fit.slope;
        *out(stderr, "stderr")? = fit.stderr;
        Ok(())
    })
}
