//! C interface to `eqhodge`.
//!
//! Every fallible call returns an [`EqhStatus`]; on failure the message is
//! available from [`eqh_last_error_message`] on the same thread. Handles are
//! opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use eqhodge::config::JobConfig;
use eqhodge::covers::Cover;
use eqhodge::engine::{full_diamond, BundleSpec};
use eqhodge::mwbound::MwReport;
use eqhodge::poly::Poly;
use eqhodge::report::{self, Command};
use eqhodge::weierstrass::{SurfaceReport, WeierstrassSurface};
use eqhodge::{Error, ErrorClass};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqhStatus {
    Ok = 0,
    NullPointer = 1,
    Config = 2,
    Hypothesis = 3,
    Internal = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// A minimal Weierstrass surface together with its fiber analysis.
pub struct EqhSurface {
    report: SurfaceReport,
}

/// A Galois cover of the projective line.
pub struct EqhCover {
    cover: Cover,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EqhInvariants {
    pub n: u32,
    pub d_e: u32,
    pub c_e: u32,
    pub mu: u32,
    pub singular_fibers: u32,
    pub isotrivial: bool,
}

/// `a [C[G]] + b chi(O) + c [C] - delta [H^0(T)]`, with `b` split by side.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EqhClass {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub delta: i64,
    pub b_structure: i64,
    pub b_canonical: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EqhMwBound {
    pub rank_bound_dim: i64,
    pub pal_bound: i64,
    pub pal_bound_plus_variant: i64,
    pub epsilon: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EqhStatus {
    match e.class() {
        ErrorClass::Input => EqhStatus::Config,
        ErrorClass::Hypothesis => EqhStatus::Hypothesis,
        ErrorClass::Internal => EqhStatus::Internal,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
    Small(usize),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EqhStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EqhStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            EqhStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Small(need))) => {
            set_error(format!("buffer too small, need {need} entries"));
            EqhStatus::BufferTooSmall
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            EqhStatus::Panic
        }
    }
}

unsafe fn cstr<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(Error::Parse(format!("{what} is not UTF-8"))))
}

unsafe fn poly(coeffs: *const *const c_char, len: usize, what: &'static str) -> Result<Poly, Fail> {
    if len == 0 {
        return Ok(Poly::zero());
    }
    if coeffs.is_null() {
        return Err(Fail::Null(what));
    }
    let strs = std::slice::from_raw_parts(coeffs, len)
        .iter()
        .map(|&p| cstr(p, what))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::from_strs(&strs)?)
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

/// Builds a surface from coefficient strings (`"num/den"` or integers,
/// lowest degree first). Fails on non-minimal or singular input.
///
/// # Safety
/// `a` and `b` point to `a_len` and `b_len` NUL-terminated strings; `out` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn eqh_surface_new(
    n: u32,
    a: *const *const c_char,
    a_len: usize,
    b: *const *const c_char,
    b_len: usize,
    out_surface: *mut *mut EqhSurface,
) -> EqhStatus {
    guard(|| {
        let slot = out(out_surface, "out_surface")?;
        *slot = ptr::null_mut();
        let s = WeierstrassSurface::new(n, poly(a, a_len, "a")?, poly(b, b_len, "b")?)?;
        let report = s.report()?;
        *slot = Box::into_raw(Box::new(EqhSurface { report }));
        Ok(())
    })
}

/// # Safety
/// `surface` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn eqh_surface_invariants(
    surface: *const EqhSurface,
    out_inv: *mut EqhInvariants,
) -> EqhStatus {
    guard(|| {
        let r = &handle(surface, "surface")?.report;
        *out(out_inv, "out_inv")? = EqhInvariants {
            n: r.n(),
            d_e: r.d_e,
            c_e: r.c_e,
            mu: r.mu,
            singular_fibers: r.fibers.len() as u32,
            isotrivial: r.isotrivial,
        };
        Ok(())
    })
}

/// # Safety
/// `surface` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eqh_surface_free(surface: *mut EqhSurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}

/// The cover `y^m = f(t)` with `Z/m` acting on `y`.
///
/// # Safety
/// `f` points to `f_len` NUL-terminated strings; `out_cover` is writable.
#[no_mangle]
pub unsafe extern "C" fn eqh_cover_superelliptic(
    m: u32,
    f: *const *const c_char,
    f_len: usize,
    out_cover: *mut *mut EqhCover,
) -> EqhStatus {
    guard(|| {
        let slot = out(out_cover, "out_cover")?;
        *slot = ptr::null_mut();
        let cover = Cover::superelliptic(m, poly(f, f_len, "f")?)?;
        *slot = Box::into_raw(Box::new(EqhCover { cover }));
        Ok(())
    })
}

/// Builds the `[cover]` section of a TOML job file.
///
/// # Safety
/// `toml` is a NUL-terminated string; `out_cover` is writable.
#[no_mangle]
pub unsafe extern "C" fn eqh_cover_from_toml(
    toml: *const c_char,
    out_cover: *mut *mut EqhCover,
) -> EqhStatus {
    guard(|| {
        let slot = out(out_cover, "out_cover")?;
        *slot = ptr::null_mut();
        let cover = JobConfig::parse(cstr(toml, "toml")?)?.cover()?;
        *slot = Box::into_raw(Box::new(EqhCover { cover }));
        Ok(())
    })
}

/// # Safety
/// `cover` is a live handle and `out_genus` is writable.
#[no_mangle]
pub unsafe extern "C" fn eqh_cover_genus(cover: *const EqhCover, out_genus: *mut u32) -> EqhStatus {
    guard(|| {
        let g = handle(cover, "cover")?.cover.genus_up()?;
        *out(out_genus, "out_genus")? = g;
        Ok(())
    })
}

/// Multiplicities of `H^0(K)` over the irreducible characters. `len`
/// receives the number of characters; if `cap` is smaller nothing is copied
/// and `BufferTooSmall` is returned.
///
/// # Safety
/// `buf` has room for `cap` values (may be NULL when `cap` is 0); `len` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn eqh_cover_h0_canonical(
    cover: *const EqhCover,
    buf: *mut i64,
    cap: usize,
    len: *mut usize,
) -> EqhStatus {
    guard(|| {
        let m = handle(cover, "cover")?.cover.h0_canonical()?;
        let mult = m.multiplicities();
        *out(len, "len")? = mult.len();
        if cap < mult.len() {
            return Err(Fail::Small(mult.len()));
        }
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        ptr::copy_nonoverlapping(mult.as_ptr(), buf, mult.len());
        Ok(())
    })
}

/// # Safety
/// `cover` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eqh_cover_free(cover: *mut EqhCover) {
    if !cover.is_null() {
        drop(Box::from_raw(cover));
    }
}

/// Symbolic class of `H^{p,q}` for the zero locus of a section of
/// `O(d) (x) L^ell` on the projectivization of `sum O(degrees[i])`.
///
/// # Safety
/// `degrees` points to `rank` values; `out_class` is writable.
#[no_mangle]
pub unsafe extern "C" fn eqh_engine_hodge_class(
    degrees: *const i64,
    rank: usize,
    ell: i64,
    d: i64,
    lefschetz: bool,
    singular: bool,
    p: usize,
    q: usize,
    out_class: *mut EqhClass,
) -> EqhStatus {
    guard(|| {
        let slot = out(out_class, "out_class")?;
        if degrees.is_null() && rank > 0 {
            return Err(Fail::Null("degrees"));
        }
        let degs = if rank == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(degrees, rank).to_vec()
        };
        let bundle = BundleSpec::new(degs, ell, d, lefschetz)?;
        let diamond = full_diamond(&bundle, singular)?;
        let class = diamond
            .get(p)
            .and_then(|row| row.get(q))
            .ok_or_else(|| Error::Config(format!("(p, q) = ({p}, {q}) outside the diamond")))?;
        *slot = EqhClass {
            a: class.a,
            b: class.b(),
            c: class.c,
            delta: class.delta,
            b_structure: class.b_structure,
            b_canonical: class.b_canonical,
        };
        Ok(())
    })
}

/// Rank bounds after base change; `epsilon = 0` means `|G|`.
///
/// # Safety
/// `surface` and `cover` are live handles; `out_bound` is writable.
#[no_mangle]
pub unsafe extern "C" fn eqh_mw_bound(
    surface: *const EqhSurface,
    cover: *const EqhCover,
    epsilon: u32,
    out_bound: *mut EqhMwBound,
) -> EqhStatus {
    guard(|| {
        let r = &handle(surface, "surface")?.report;
        let c = &handle(cover, "cover")?.cover;
        let slot = out(out_bound, "out_bound")?;
        let mw = MwReport::new(r, c, (epsilon != 0).then_some(epsilon))?;
        *slot = EqhMwBound {
            rank_bound_dim: mw.rank_bound_dim,
            pal_bound: mw.pal_bound,
            pal_bound_plus_variant: mw.pal_bound_plus_variant,
            epsilon: mw.epsilon,
        };
        Ok(())
    })
}

/// Runs a CLI command (`"analyze"`, `"mwbound"`, ...) on a TOML job and
/// returns the JSON report, to be released with [`eqh_string_free`].
///
/// # Safety
/// `command` and `toml` are NUL-terminated strings; `out_json` is writable.
#[no_mangle]
pub unsafe extern "C" fn eqh_run_job(
    command: *const c_char,
    toml: *const c_char,
    full_check: bool,
    out_json: *mut *mut c_char,
) -> EqhStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = ptr::null_mut();
        let command = Command::parse(cstr(command, "command")?)?;
        let config = JobConfig::parse(cstr(toml, "toml")?)?;
        let value = report::run(&config, command, full_check)?;
        let text = serde_json::to_string(&value).map_err(|e| Error::Internal(e.to_string()))?;
        *slot = CString::new(text)
            .map_err(|e| Error::Internal(e.to_string()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` is NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eqh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn eqh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
