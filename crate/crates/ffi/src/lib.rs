//! C interface to `liouv`.
//!
//! Every function returns a `LiouvStatus`; results go through out-pointers.
//! On failure `liouv_last_error()` gives a message for the calling thread.
//! Handles are created by `*_new`/`*_compute` and released with `*_free`.

use liouv::ed::{full_spectrum, spectral_gap, SpectrumResult, Vectors};
use liouv::semiclassics::spectral_edges;
use liouv::steady::{p0_eigenvalue, steady_state, t1_t2};
use liouv::{Error, ModelParams};
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiouvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParam = 2,
    Index = 3,
    Domain = 4,
    NoConvergence = 5,
    Numerical = 6,
    Panic = 7,
}

/// Validated model parameters.
pub struct LiouvParams(ModelParams);

/// Eigenvalues of all sectors, ordered by `q` then real part descending.
pub struct LiouvSpectrum(SpectrumResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> LiouvStatus {
    match e {
        Error::InvalidParam { .. } | Error::Usage(_) | Error::TooLarge { .. } => LiouvStatus::InvalidParam,
        Error::Index(_) | Error::Dimension { .. } => LiouvStatus::Index,
        Error::Domain(_) | Error::Pole(_) | Error::NoSolution { .. } => LiouvStatus::Domain,
        Error::NoConvergence(_) | Error::Collision(_) | Error::NotEigenmode(_) | Error::Branch(_) => {
            LiouvStatus::NoConvergence
        }
        Error::Eigen { .. } | Error::SteadyStateNotFound | Error::Io(_) => LiouvStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> Result<(), LiouvStatus>) -> LiouvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LiouvStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            LiouvStatus::Panic
        }
    }
}

fn fail(e: Error) -> LiouvStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, LiouvStatus> {
    p.as_ref().ok_or_else(|| {
        set_error(format!("{name} is null"));
        LiouvStatus::NullPointer
    })
}

unsafe fn write<T>(p: *mut T, v: T, name: &str) -> Result<(), LiouvStatus> {
    if p.is_null() {
        set_error(format!("{name} is null"));
        return Err(LiouvStatus::NullPointer);
    }
    p.write(v);
    Ok(())
}

/// Message of the last failed call on this thread, empty if none.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn liouv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn liouv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer to a `LiouvParams*`.
#[no_mangle]
pub unsafe extern "C" fn liouv_params_new(
    h: f64,
    gamma: f64,
    gamma0: f64,
    p: f64,
    two_s: u32,
    out: *mut *mut LiouvParams,
) -> LiouvStatus {
    guard(|| {
        let m = ModelParams::new(h, gamma, gamma0, p, two_s).map_err(fail)?;
        write(out, Box::into_raw(Box::new(LiouvParams(m))), "out")
    })
}

/// # Safety
/// `params` must come from `liouv_params_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn liouv_params_free(params: *mut LiouvParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Eigenvalues of every charge sector.
///
/// # Safety
/// `params` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn liouv_spectrum_compute(params: *const LiouvParams, out: *mut *mut LiouvSpectrum) -> LiouvStatus {
    guard(|| {
        let m = &deref(params, "params")?.0;
        let spec = full_spectrum(m, None, Vectors::None).map_err(fail)?;
        write(out, Box::into_raw(Box::new(LiouvSpectrum(spec))), "out")
    })
}

/// # Safety
/// `spec` must be a live handle and `len` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn liouv_spectrum_len(spec: *const LiouvSpectrum, len: *mut usize) -> LiouvStatus {
    guard(|| {
        let n = deref(spec, "spec")?.0.records.len();
        write(len, n, "len")
    })
}

/// # Safety
/// `spec` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn liouv_spectrum_get(
    spec: *const LiouvSpectrum,
    index: usize,
    q: *mut i32,
    re: *mut f64,
    im: *mut f64,
) -> LiouvStatus {
    guard(|| {
        let records = &deref(spec, "spec")?.0.records;
        let r = records
            .get(index)
            .ok_or_else(|| fail(Error::Index(format!("{index} >= {}", records.len()))))?;
        write(q, r.q, "q")?;
        write(re, r.lambda.re, "re")?;
        write(im, r.lambda.im, "im")
    })
}

/// Smallest `|Re λ|` among non-stationary modes.
///
/// # Safety
/// `spec` must be a live handle and `gap` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn liouv_spectrum_gap(spec: *const LiouvSpectrum, gap: *mut f64) -> LiouvStatus {
    guard(|| {
        let g = spectral_gap(&deref(spec, "spec")?.0).map_err(fail)?;
        write(gap, g, "gap")
    })
}

/// # Safety
/// `spec` must come from `liouv_spectrum_compute` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn liouv_spectrum_free(spec: *mut LiouvSpectrum) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Steady-state magnetization and von Neumann entropy.
///
/// # Safety
/// `params` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn liouv_steady_state(params: *const LiouvParams, mean_sz: *mut f64, entropy: *mut f64) -> LiouvStatus {
    guard(|| {
        let ss = steady_state(&deref(params, "params")?.0);
        write(mean_sz, ss.mean_sz, "mean_sz")?;
        write(entropy, ss.entropy, "entropy")
    })
}

/// Large-`s` edges of `Re Λ/s` at `x = |q|/2s`. `separator` is NaN where
/// region I is absent.
///
/// # Safety
/// `params` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn liouv_spectral_edges(
    params: *const LiouvParams,
    x: f64,
    top: *mut f64,
    separator: *mut f64,
    bottom: *mut f64,
) -> LiouvStatus {
    guard(|| {
        let e = spectral_edges(x, &deref(params, "params")?.0).map_err(fail)?;
        write(top, e.top, "top")?;
        write(separator, e.separator.unwrap_or(f64::NAN), "separator")?;
        write(bottom, e.bottom, "bottom")
    })
}

/// Exact eigenvalue `n` of sector `q` (`|q| <= 1`) for an unpolarized bath.
///
/// # Safety
/// `params` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn liouv_p0_eigenvalue(
    params: *const LiouvParams,
    n: u32,
    q: i32,
    re: *mut f64,
    im: *mut f64,
) -> LiouvStatus {
    guard(|| {
        let l = p0_eigenvalue(n, q, &deref(params, "params")?.0).map_err(fail)?;
        write(re, l.re, "re")?;
        write(im, l.im, "im")
    })
}

/// Relaxation times of an unpolarized bath; infinite when a rate vanishes.
///
/// # Safety
/// `params` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn liouv_relaxation_times(params: *const LiouvParams, t1: *mut f64, t2: *mut f64) -> LiouvStatus {
    guard(|| {
        let t = t1_t2(&deref(params, "params")?.0).map_err(fail)?;
        write(t1, t.t1, "t1")?;
        write(t2, t.t2, "t2")
    })
}
