//! C ABI over the `descent-tree` library.
//!
//! Trees, polynomials and engines cross the boundary as opaque handles.
//! Every fallible call returns a [`DtStatus`]; on failure the message is
//! available from [`dt_last_error`] on the same thread. Strings handed out
//! by the library are released with [`dt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use descent_tree::{expand, verify_roots, Algo, Basis, Engine, Error, ExactPolynomial, MarkedTree, TreeFormat};

/// Opaque rooted tree with a marked descent set.
pub struct DtTree(MarkedTree);

/// Opaque exact rational polynomial in `n`.
pub struct DtPoly(ExactPolynomial);

/// Opaque counting engine; owns the memo cache shared across calls.
pub struct DtEngine(Engine);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    CapExceeded = 5,
    NotQualifying = 6,
    Numeric = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DtAlgo {
    Auto = 0,
    Brute = 1,
    Cut = 2,
    AscentCut = 3,
    Explicit = 4,
    Shift = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DtFormat {
    Compact = 0,
    Structured = 1,
}

impl From<DtAlgo> for Algo {
    fn from(a: DtAlgo) -> Self {
        match a {
            DtAlgo::Auto => Algo::Auto,
            DtAlgo::Brute => Algo::Brute,
            DtAlgo::Cut => Algo::Cut,
            DtAlgo::AscentCut => Algo::AscentCut,
            DtAlgo::Explicit => Algo::Explicit,
            DtAlgo::Shift => Algo::Shift,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(DtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Syntax { .. } | Error::EmptyInput | Error::InvalidTree(_) | Error::Json(_) => {
                DtStatus::Parse
            }
            Error::CapExceeded { .. } => DtStatus::CapExceeded,
            Error::NotQualifying(_) => DtStatus::NotQualifying,
            Error::NonInteger { .. } | Error::ZeroPolynomial | Error::NoConvergence(_) => DtStatus::Numeric,
            Error::Io(_) => DtStatus::Internal,
            _ => DtStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            DtStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside descent-tree");
            DtStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(DtStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(DtStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(DtStatus::Internal, "string contains NUL".into()))?;
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(c.into_raw());
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure(DtStatus::Internal, e.to_string()))
}

/// Runs `f` with the caller's engine, or a fresh default one when null.
unsafe fn with_engine<R>(engine: *const DtEngine, f: impl FnOnce(&Engine) -> R) -> R {
    match engine.as_ref() {
        Some(e) => f(&e.0),
        None => f(&Engine::default()),
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn dt_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn dt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Engine whose brute-force route refuses trees larger than `brute_cap`.
#[no_mangle]
pub extern "C" fn dt_engine_new(brute_cap: usize) -> *mut DtEngine {
    Box::into_raw(Box::new(DtEngine(Engine::with_brute_cap(brute_cap))))
}

/// # Safety
/// `e` must be null or a handle from [`dt_engine_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn dt_engine_free(e: *mut DtEngine) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Parses compact (`a[d,a]`) or structured JSON tree text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_tree_parse(text: *const c_char, out: *mut *mut DtTree) -> DtStatus {
    guard(|| {
        let t = MarkedTree::parse_any(read_str(text, "text")?)?;
        write_out(out, Box::into_raw(Box::new(DtTree(t))))
    })
}

/// # Safety
/// `t` must be null or a handle from [`dt_tree_parse`], freed once.
#[no_mangle]
pub unsafe extern "C" fn dt_tree_free(t: *mut DtTree) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live tree handle.
#[no_mangle]
pub unsafe extern "C" fn dt_tree_size(t: *const DtTree) -> usize {
    t.as_ref().map_or(0, |t| t.0.size())
}

/// Degree of the descent polynomial (sum of hooks of maximal descents).
///
/// # Safety
/// `t` must be null or a live tree handle.
#[no_mangle]
pub unsafe extern "C" fn dt_tree_degree(t: *const DtTree) -> usize {
    t.as_ref().map_or(0, |t| t.0.degree())
}

/// # Safety
/// `t` must be a live tree handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_tree_to_string(t: *const DtTree, format: DtFormat, out: *mut *mut c_char) -> DtStatus {
    guard(|| {
        let t = borrow(t, "tree")?;
        let f = match format {
            DtFormat::Compact => TreeFormat::Compact,
            DtFormat::Structured => TreeFormat::Structured,
        };
        write_string(out, t.0.serialize(f))
    })
}

/// Number of natural labelings, as a decimal string.
///
/// # Safety
/// `t` must be a live tree handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_tree_natlab(t: *const DtTree, out: *mut *mut c_char) -> DtStatus {
    guard(|| write_string(out, borrow(t, "tree")?.0.natlab().to_string()))
}

/// Exact count d(T; n) as a decimal string. `engine` may be null.
///
/// # Safety
/// `t` must be a live tree handle, `engine` null or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_tree_count(
    engine: *const DtEngine,
    t: *const DtTree,
    n: usize,
    algo: DtAlgo,
    out: *mut *mut c_char,
) -> DtStatus {
    guard(|| {
        let t = borrow(t, "tree")?;
        let v = with_engine(engine, |e| e.count(&t.0, n, algo.into()))?;
        write_string(out, v.to_string())
    })
}

/// Descent polynomial of `t`. `engine` may be null.
///
/// # Safety
/// `t` must be a live tree handle, `engine` null or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_tree_polynomial(
    engine: *const DtEngine,
    t: *const DtTree,
    algo: DtAlgo,
    out: *mut *mut DtPoly,
) -> DtStatus {
    guard(|| {
        let t = borrow(t, "tree")?;
        let p = with_engine(engine, |e| e.polynomial(&t.0, algo.into()))?;
        write_out(out, Box::into_raw(Box::new(DtPoly(p))))
    })
}

/// Expansion in the named basis (`a`, `abar`, `c`, `c:<offset>`, `nk`) as
/// JSON. `engine` may be null.
///
/// # Safety
/// `t` must be a live tree handle, `basis` a NUL-terminated string,
/// `engine` null or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_tree_expand(
    engine: *const DtEngine,
    t: *const DtTree,
    basis: *const c_char,
    out: *mut *mut c_char,
) -> DtStatus {
    guard(|| {
        let t = borrow(t, "tree")?;
        let basis: Basis = read_str(basis, "basis")?.parse()?;
        let e = with_engine(engine, |eng| expand(&t.0, basis, eng))?;
        write_string(out, json(&e)?)
    })
}

/// Root report (integer roots, predictions and verdicts) as JSON.
///
/// # Safety
/// `t` must be a live tree handle, `engine` null or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_tree_roots(engine: *const DtEngine, t: *const DtTree, out: *mut *mut c_char) -> DtStatus {
    guard(|| {
        let t = borrow(t, "tree")?;
        let r = with_engine(engine, |e| verify_roots(&t.0, e))?;
        write_string(out, json(&r)?)
    })
}

/// # Safety
/// `p` must be null or a handle from [`dt_tree_polynomial`] or
/// [`dt_poly_from_json`], freed once.
#[no_mangle]
pub unsafe extern "C" fn dt_poly_free(p: *mut DtPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Degree, or -1 for the zero polynomial or a null handle.
///
/// # Safety
/// `p` must be null or a live polynomial handle.
#[no_mangle]
pub unsafe extern "C" fn dt_poly_degree(p: *const DtPoly) -> i64 {
    p.as_ref().and_then(|p| p.0.degree()).map_or(-1, |d| d as i64)
}

/// Human-readable form, e.g. `1/3·n^3 − n^2 + 80`.
///
/// # Safety
/// `p` must be a live polynomial handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_poly_to_string(p: *const DtPoly, out: *mut *mut c_char) -> DtStatus {
    guard(|| write_string(out, borrow(p, "polynomial")?.0.to_string()))
}

/// Ascending `[numerator, denominator]` pairs as JSON.
///
/// # Safety
/// `p` must be a live polynomial handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_poly_to_json(p: *const DtPoly, out: *mut *mut c_char) -> DtStatus {
    guard(|| write_string(out, borrow(p, "polynomial")?.0.to_json()))
}

/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_poly_from_json(text: *const c_char, out: *mut *mut DtPoly) -> DtStatus {
    guard(|| {
        let p = ExactPolynomial::from_json(read_str(text, "text")?)?;
        write_out(out, Box::into_raw(Box::new(DtPoly(p))))
    })
}

/// Value at integer `n` as a reduced fraction string (`p/q` or `p`).
///
/// # Safety
/// `p` must be a live polynomial handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_poly_eval(p: *const DtPoly, n: i64, out: *mut *mut c_char) -> DtStatus {
    guard(|| write_string(out, borrow(p, "polynomial")?.0.eval_int(n).to_string()))
}

/// Distinct integer roots in ascending order. Writes the total count to
/// `len` and at most `cap` roots to `roots`, which may be null when `cap`
/// is 0; call once with `cap = 0` to size the buffer.
///
/// # Safety
/// `p` must be a live polynomial handle, `roots` valid for `cap` writes,
/// `len` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_poly_integer_roots(
    p: *const DtPoly,
    roots: *mut i64,
    cap: usize,
    len: *mut usize,
) -> DtStatus {
    guard(|| {
        let found = descent_tree::roots::integer_root_values(&borrow(p, "polynomial")?.0)?;
        if cap > 0 && roots.is_null() {
            return Err(null("roots buffer"));
        }
        for (i, &r) in found.iter().take(cap).enumerate() {
            roots.add(i).write(r);
        }
        write_out(len, found.len())
    })
}
