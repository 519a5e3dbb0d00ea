//! C ABI over `ibm_qds`.
//!
//! Every fallible function returns an [`IbmQdsStatus`] and writes results
//! through out-pointers. On failure the thread-local message from
//! [`ibm_qds_last_error`] says what went wrong. Models and eigen results are
//! opaque handles that the caller releases with the matching `_free`.
//! Panics never cross the boundary; they surface as `IBM_QDS_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ibm_qds::classical::potential;
use ibm_qds::harmonic::fit_harmonic;
use ibm_qds::observables::{
    be2_first_excited, classify_phase, transition_width, ClassifierConfig, PhaseLabel,
};
use ibm_qds::rpa::{rpa_be2, rpa_solve};
use ibm_qds::{solve, EigenDecomposition, Error, ModelParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IbmQdsStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    NoConvergence = 3,
    HarmonicBreakdown = 4,
    IndexOutOfRange = 5,
    Ambiguous = 6,
    NoPhase = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IbmQdsPhase {
    U5 = 0,
    O6 = 1,
    Transition = 2,
}

/// Model parameters (N, alpha).
pub struct IbmQdsModel(ModelParams);

/// Eigenvalues and eigenvectors of one seniority sector.
pub struct IbmQdsEigen(EigenDecomposition);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct IbmQdsRpa {
    pub a: f64,
    pub b: f64,
    pub epsilon: f64,
    pub x: f64,
    pub y: f64,
    pub be2: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct IbmQdsHarmonic {
    pub n0: f64,
    pub kinetic: f64,
    pub curvature: f64,
    pub omega: f64,
    pub u_min: f64,
    pub width: f64,
}

/// Deviations are `INFINITY` where the reference model does not apply.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct IbmQdsVerdict {
    pub label: IbmQdsPhase,
    pub u5_deviation: f64,
    pub o6_deviation: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct IbmQdsWidth {
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub width: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> IbmQdsStatus {
    match err {
        Error::Domain(_) | Error::Config(_) => IbmQdsStatus::Domain,
        Error::NoConvergence { .. } => IbmQdsStatus::NoConvergence,
        Error::HarmonicBreakdown { .. } => IbmQdsStatus::HarmonicBreakdown,
        Error::IndexOutOfRange { .. } => IbmQdsStatus::IndexOutOfRange,
        Error::Ambiguous(_) => IbmQdsStatus::Ambiguous,
        Error::NoPhase(_) => IbmQdsStatus::NoPhase,
        _ => IbmQdsStatus::Internal,
    }
}

enum Fail {
    Null(&'static str),
    Small { need: usize, have: usize },
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> IbmQdsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IbmQdsStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            IbmQdsStatus::NullPointer
        }
        Ok(Err(Fail::Small { need, have })) => {
            set_error(format!("buffer holds {have} values, {need} needed"));
            IbmQdsStatus::BufferTooSmall
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            IbmQdsStatus::Internal
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    unsafe { p.as_mut() }.ok_or(Fail::Null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    unsafe { p.as_ref() }.ok_or(Fail::Null(what))
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), Fail> {
    if buf.is_null() {
        return Err(Fail::Null("buffer"));
    }
    if len < src.len() {
        return Err(Fail::Small {
            need: src.len(),
            have: len,
        });
    }
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len()) };
    Ok(())
}

/// Message of the last failure on this thread, or null if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ibm_qds_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a model with `n_bosons >= 1` and `0 <= alpha <= 1`.
///
/// # Safety
/// `model` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ibm_qds_model_new(
    n_bosons: u32,
    alpha: f64,
    model: *mut *mut IbmQdsModel,
) -> IbmQdsStatus {
    guard(|| {
        let slot = unsafe { out(model, "model")? };
        *slot = ptr::null_mut();
        let params = ModelParams::new(n_bosons, alpha)?;
        *slot = Box::into_raw(Box::new(IbmQdsModel(params)));
        Ok(())
    })
}

/// # Safety
/// `model` must come from `ibm_qds_model_new` and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ibm_qds_model_free(model: *mut IbmQdsModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Diagonalizes seniority sector `seniority`.
///
/// # Safety
/// `model` must be a live handle and `eigen` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn ibm_qds_sector_solve(
    model: *const IbmQdsModel,
    seniority: u32,
    eigen: *mut *mut IbmQdsEigen,
) -> IbmQdsStatus {
    guard(|| {
        let slot = unsafe { out(eigen, "eigen")? };
        *slot = ptr::null_mut();
        let m = unsafe { handle(model, "model")? };
        let h = ibm_qds::sector::build_h(&m.0, seniority)?;
        *slot = Box::into_raw(Box::new(IbmQdsEigen(solve(&h)?)));
        Ok(())
    })
}

/// # Safety
/// `eigen` must come from `ibm_qds_sector_solve`; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ibm_qds_eigen_free(eigen: *mut IbmQdsEigen) {
    if !eigen.is_null() {
        drop(unsafe { Box::from_raw(eigen) });
    }
}

/// Sector dimension, 0 for a null handle.
///
/// # Safety
/// `eigen` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ibm_qds_eigen_dimension(eigen: *const IbmQdsEigen) -> usize {
    unsafe { eigen.as_ref() }.map_or(0, |e| e.0.dimension())
}

/// Copies the ascending eigenvalues into `buf` (capacity `len`).
///
/// # Safety
/// `eigen` must be a live handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ibm_qds_eigen_values(
    eigen: *const IbmQdsEigen,
    buf: *mut f64,
    len: usize,
) -> IbmQdsStatus {
    guard(|| {
        let e = unsafe { handle(eigen, "eigen")? };
        unsafe { copy_out(e.0.eigenvalues(), buf, len) }
    })
}

/// Copies eigenvector `k` (components ordered by d-boson number) into `buf`.
///
/// # Safety
/// `eigen` must be a live handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ibm_qds_eigen_vector(
    eigen: *const IbmQdsEigen,
    k: usize,
    buf: *mut f64,
    len: usize,
) -> IbmQdsStatus {
    guard(|| {
        let e = unsafe { handle(eigen, "eigen")? };
        unsafe { copy_out(e.0.eigenvector(k)?, buf, len) }
    })
}

/// B(E2) from the ground state to the first excited state, in units where
/// the pure vibrator gives 100.
///
/// # Safety
/// `model` must be a live handle and `be2` writable.
#[no_mangle]
pub unsafe extern "C" fn ibm_qds_be2(model: *const IbmQdsModel, be2: *mut f64) -> IbmQdsStatus {
    guard(|| {
        let m = unsafe { handle(model, "model")? };
        let slot = unsafe { out(be2, "be2")? };
        *slot = be2_first_excited(&m.0)?;
        Ok(())
    })
}

/// Quasi-boson solution, defined for `0 <= alpha < 0.5`.
///
/// # Safety
/// `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibm_qds_rpa(alpha: f64, result: *mut IbmQdsRpa) -> IbmQdsStatus {
    guard(|| {
        let slot = unsafe { out(result, "result")? };
        let r = rpa_solve(alpha)?;
        *slot = IbmQdsRpa {
            a: r.a,
            b: r.b,
            epsilon: r.epsilon,
            x: r.x,
            y: r.y,
            be2: rpa_be2(alpha)?,
        };
        Ok(())
    })
}

/// Oscillator fit of sector `seniority`, defined for `0.5 < alpha <= 1`.
///
/// # Safety
/// `model` must be a live handle and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn ibm_qds_harmonic_fit(
    model: *const IbmQdsModel,
    seniority: u32,
    result: *mut IbmQdsHarmonic,
) -> IbmQdsStatus {
    guard(|| {
        let m = unsafe { handle(model, "model")? };
        let slot = unsafe { out(result, "result")? };
        let h = fit_harmonic(&m.0, seniority)?;
        *slot = IbmQdsHarmonic {
            n0: h.n0,
            kinetic: h.kinetic,
            curvature: h.curvature,
            omega: h.omega,
            u_min: h.u_min,
            width: h.width(),
        };
        Ok(())
    })
}

/// Classical energy surface at deformation `beta >= 0`.
///
/// # Safety
/// `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibm_qds_potential(
    alpha: f64,
    n_bosons: u32,
    beta: f64,
    value: *mut f64,
) -> IbmQdsStatus {
    guard(|| {
        let slot = unsafe { out(value, "value")? };
        *slot = potential(alpha, n_bosons, beta)?;
        Ok(())
    })
}

/// Phase verdict at the model's alpha.
///
/// # Safety
/// `model` must be a live handle and `verdict` writable.
#[no_mangle]
pub unsafe extern "C" fn ibm_qds_classify(
    model: *const IbmQdsModel,
    tolerance: f64,
    levels: usize,
    verdict: *mut IbmQdsVerdict,
) -> IbmQdsStatus {
    guard(|| {
        let m = unsafe { handle(model, "model")? };
        let slot = unsafe { out(verdict, "verdict")? };
        let v = classify_phase(&m.0, &classifier(tolerance, levels)?)?;
        *slot = IbmQdsVerdict {
            label: match v.label {
                PhaseLabel::U5 => IbmQdsPhase::U5,
                PhaseLabel::O6 => IbmQdsPhase::O6,
                PhaseLabel::Transition => IbmQdsPhase::Transition,
            },
            u5_deviation: v.u5_deviation,
            o6_deviation: v.o6_deviation,
        };
        Ok(())
    })
}

/// Width of the transitional region for `n_bosons`, scanned at spacing `step`.
///
/// # Safety
/// `width` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibm_qds_transition_width(
    n_bosons: u32,
    tolerance: f64,
    levels: usize,
    step: f64,
    width: *mut IbmQdsWidth,
) -> IbmQdsStatus {
    guard(|| {
        let slot = unsafe { out(width, "width")? };
        let w = transition_width(n_bosons, &classifier(tolerance, levels)?, step)?;
        *slot = IbmQdsWidth {
            alpha_lo: w.alpha_lo,
            alpha_hi: w.alpha_hi,
            width: w.width,
        };
        Ok(())
    })
}

fn classifier(tolerance: f64, levels: usize) -> Result<ClassifierConfig, Error> {
    if !(tolerance > 0.0 && tolerance < 1.0) || levels == 0 {
        return Err(Error::Domain(format!(
            "classifier needs 0 < tolerance < 1 and levels >= 1, got {tolerance} and {levels}"
        )));
    }
    Ok(ClassifierConfig { tolerance, levels })
}
