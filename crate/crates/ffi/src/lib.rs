//! C interface to `weyl-core`.
//!
//! Contexts and elements are opaque heap handles released with their
//! `_free` function. Every call returns a [`WeylStatus`]; on failure the
//! message is available from [`weyl_last_error_message`]. Strings handed
//! out by the library are released with [`weyl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use weyl_core::algebra::{AlgebraContext, Element, ExponentMode};
use weyl_core::commutators::{self, Method};
use weyl_core::output::element_json;
use weyl_core::scalar::DEFAULT_TRUNCATION;
use weyl_core::{calculus, parse_element, Error};

/// Result code of every exported function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    IndexOutOfRange = 4,
    ModeError = 5,
    ContextMismatch = 6,
    InvalidArgument = 7,
    MethodDisagreement = 8,
    Overflow = 9,
    Internal = 10,
}

/// Commutator evaluation strategy. `All` runs every strategy and reports
/// `MethodDisagreement` unless they coincide.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylMethod {
    Direct = 0,
    Series = 1,
    Grouped = 2,
    Flat = 3,
    All = 4,
}

/// Algebra settings: number of pairs, exponent mode and truncation order.
pub struct WeylContext {
    ctx: AlgebraContext,
}

/// An element in pq-normal order.
pub struct WeylElement {
    inner: Element,
}

struct Failure {
    status: WeylStatus,
    message: String,
}

impl Failure {
    fn new(status: WeylStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Syntax { .. } => WeylStatus::ParseError,
            Error::IndexOutOfRange { .. } | Error::InvalidGenerator { .. } | Error::InvalidIndex { .. } => {
                WeylStatus::IndexOutOfRange
            }
            Error::ModeMismatch { .. }
            | Error::NegativeExponentInPolynomialMode { .. }
            | Error::MixedNegativeExact
            | Error::NegativePower(_)
            | Error::LaurentModeUnsupported
            | Error::TruncatedCoefficientsUnsupported => WeylStatus::ModeError,
            Error::ContextMismatch => WeylStatus::ContextMismatch,
            Error::Overflow(_) => WeylStatus::Overflow,
            _ => WeylStatus::InvalidArgument,
        };
        Failure::new(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> WeylStatus {
    let outcome = catch_unwind(AssertUnwindSafe(body))
        .unwrap_or_else(|_| Err(Failure::new(WeylStatus::Internal, "internal panic")));
    match outcome {
        Ok(()) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            WeylStatus::Ok
        }
        Err(f) => {
            set_last_error(&f.message);
            f.status
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(WeylStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_slot<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure::new(WeylStatus::NullPointer, format!("{what} is null")))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(WeylStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(WeylStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure::new(WeylStatus::Internal, "string contains a NUL byte"))
}

fn boxed(inner: Element) -> *mut WeylElement {
    Box::into_raw(Box::new(WeylElement { inner }))
}

unsafe fn binary(
    a: *const WeylElement,
    b: *const WeylElement,
    out: *mut *mut WeylElement,
    op: impl FnOnce(&Element, &Element) -> Result<Element, Failure>,
) -> WeylStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let a = deref(a, "a")?;
        let b = deref(b, "b")?;
        *out = boxed(op(&a.inner, &b.inner)?);
        Ok(())
    })
}

/// Creates a context with `n_pairs` canonical pairs. `laurent` enables
/// negative exponents. A negative `trunc` means exact coefficients, which
/// Laurent mode rejects; otherwise coefficients are kept modulo
/// `c^(trunc+1)`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn weyl_context_new(
    n_pairs: u32,
    laurent: bool,
    trunc: i64,
    out: *mut *mut WeylContext,
) -> WeylStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let mode = if laurent {
            ExponentMode::Laurent
        } else {
            ExponentMode::Polynomial
        };
        let trunc = match trunc {
            t if t < 0 => None,
            t => Some(
                u32::try_from(t)
                    .map_err(|_| Failure::new(WeylStatus::InvalidArgument, "truncation order is too large"))?,
            ),
        };
        let ctx = AlgebraContext::new(n_pairs, mode, trunc)?;
        *out = Box::into_raw(Box::new(WeylContext { ctx }));
        Ok(())
    })
}

/// Releases a context. Null is ignored.
///
/// # Safety
/// `ctx` must be null or a handle from [`weyl_context_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn weyl_context_free(ctx: *mut WeylContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Parses `src` and normal-orders it in `ctx`.
///
/// # Safety
/// `ctx` must be a live context, `src` a NUL-terminated string and `out`
/// writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn weyl_element_parse(
    ctx: *const WeylContext,
    src: *const c_char,
    out: *mut *mut WeylElement,
) -> WeylStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let ctx = deref(ctx, "ctx")?;
        let src = read_str(src, "src")?;
        *out = boxed(parse_element(src, &ctx.ctx)?);
        Ok(())
    })
}

/// Releases an element. Null is ignored.
///
/// # Safety
/// `e` must be null or an element handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn weyl_element_free(e: *mut WeylElement) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Renders `e` as text in the same form the parser accepts.
///
/// # Safety
/// `e` must be a live element and `out` writable storage for one pointer.
/// The string is released with [`weyl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn weyl_element_render(e: *const WeylElement, out: *mut *mut c_char) -> WeylStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let e = deref(e, "e")?;
        *out = into_c_string(e.inner.to_string())?;
        Ok(())
    })
}

/// Renders `e` as a JSON document with its context.
///
/// # Safety
/// Same as [`weyl_element_render`].
#[no_mangle]
pub unsafe extern "C" fn weyl_element_to_json(e: *const WeylElement, out: *mut *mut c_char) -> WeylStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let e = deref(e, "e")?;
        *out = into_c_string(element_json(&e.inner, DEFAULT_TRUNCATION).to_string())?;
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn weyl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `a + b`.
///
/// # Safety
/// `a` and `b` must be live elements and `out` writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn weyl_element_add(
    a: *const WeylElement,
    b: *const WeylElement,
    out: *mut *mut WeylElement,
) -> WeylStatus {
    binary(a, b, out, |a, b| Ok(a.add(b)?))
}

/// `a b`.
///
/// # Safety
/// Same as [`weyl_element_add`].
#[no_mangle]
pub unsafe extern "C" fn weyl_element_mul(
    a: *const WeylElement,
    b: *const WeylElement,
    out: *mut *mut WeylElement,
) -> WeylStatus {
    binary(a, b, out, |a, b| Ok(a.mul(b)?))
}

/// Writes whether `a` and `b` are equal.
///
/// # Safety
/// `a` and `b` must be live elements and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn weyl_element_equal(
    a: *const WeylElement,
    b: *const WeylElement,
    out: *mut bool,
) -> WeylStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let a = deref(a, "a")?;
        let b = deref(b, "b")?;
        *out = a.inner.equals(&b.inner)?;
        Ok(())
    })
}

/// `[a, b]` by the chosen method.
///
/// # Safety
/// Same as [`weyl_element_add`].
#[no_mangle]
pub unsafe extern "C" fn weyl_commutator(
    a: *const WeylElement,
    b: *const WeylElement,
    method: WeylMethod,
    out: *mut *mut WeylElement,
) -> WeylStatus {
    binary(a, b, out, |a, b| {
        let single = match method {
            WeylMethod::Direct => Method::Direct,
            WeylMethod::Series => Method::Series,
            WeylMethod::Grouped => Method::Grouped,
            WeylMethod::Flat => Method::Flat,
            WeylMethod::All => {
                let direct = Method::Direct.apply(a, b)?;
                for m in &Method::ALL[1..] {
                    if m.apply(a, b)? != direct {
                        return Err(Failure::new(
                            WeylStatus::MethodDisagreement,
                            format!("{m} disagrees with direct"),
                        ));
                    }
                }
                return Ok(direct);
            }
        };
        Ok(single.apply(a, b)?)
    })
}

/// The order-`k` term of the commutator series.
///
/// # Safety
/// Same as [`weyl_element_add`].
#[no_mangle]
pub unsafe extern "C" fn weyl_series_term(
    a: *const WeylElement,
    b: *const WeylElement,
    k: u32,
    out: *mut *mut WeylElement,
) -> WeylStatus {
    binary(a, b, out, |a, b| {
        if k == 0 {
            return Err(Failure::new(WeylStatus::InvalidArgument, "series order must be at least 1"));
        }
        Ok(commutators::series_term_k(a, b, k)?)
    })
}

/// Poisson bracket `{a, b}`, the coefficient of `c` in `[a, b]`.
///
/// # Safety
/// Same as [`weyl_element_add`].
#[no_mangle]
pub unsafe extern "C" fn weyl_poisson_leading(
    a: *const WeylElement,
    b: *const WeylElement,
    out: *mut *mut WeylElement,
) -> WeylStatus {
    binary(a, b, out, |a, b| Ok(commutators::poisson_leading(a, b)?))
}

/// `k`-th derivative of `e` in `p_index`.
///
/// # Safety
/// `e` must be a live element and `out` writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn weyl_d_p(
    e: *const WeylElement,
    index: u32,
    k: u32,
    out: *mut *mut WeylElement,
) -> WeylStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let e = deref(e, "e")?;
        *out = boxed(calculus::d_p(&e.inner, index, k)?);
        Ok(())
    })
}

/// `k`-th derivative of `e` in `q_index`.
///
/// # Safety
/// Same as [`weyl_d_p`].
#[no_mangle]
pub unsafe extern "C" fn weyl_d_q(
    e: *const WeylElement,
    index: u32,
    k: u32,
    out: *mut *mut WeylElement,
) -> WeylStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let e = deref(e, "e")?;
        *out = boxed(calculus::d_q(&e.inner, index, k)?);
        Ok(())
    })
}

fn write_u64(value: impl TryInto<u64>, out: &mut u64, what: &str) -> Result<(), Failure> {
    *out = value
        .try_into()
        .map_err(|_| Failure::new(WeylStatus::Overflow, format!("{what} exceeds 64 bits")))?;
    Ok(())
}

/// Sum of the multinomial coefficients over all multi-indices of length
/// `n` and total `k`, which is `n^k`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn weyl_multinomial_sum(n: u32, k: u32, out: *mut u64) -> WeylStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        write_u64(commutators::multinomial_sum(n as usize, k), out, "multinomial sum")
    })
}

/// Number of multi-indices of length `n` and total `k`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn weyl_composition_count(n: u32, k: u32, out: *mut u64) -> WeylStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        write_u64(commutators::composition_count(n as usize, k), out, "composition count")
    })
}

/// Message of the last failed call on this thread, or null after a
/// successful call. Release with [`weyl_string_free`].
#[no_mangle]
pub extern "C" fn weyl_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn weyl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
