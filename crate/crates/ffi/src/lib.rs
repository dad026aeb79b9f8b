//! C ABI for the `toroid` library.
//!
//! Every fallible entry point returns a [`ToroidStatus`]; results are written
//! through out-pointers. Spectra and bound-state tables are opaque handles
//! that must be released with the matching `*_free` function. The message of
//! the most recent failure on the calling thread is available from
//! [`toroid_last_error`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use toroid::eigensolver::{self, Spectrum};
use toroid::geometry::{self, CurvatureBundle, MongeSurface, TorusGeometry};
use toroid::spectra::{self, BoundStateTable};
use toroid::{Error, ModeSpec, Parity};

pub const TOROID_PARITY_EVEN: u32 = 0;
pub const TOROID_PARITY_ODD: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToroidStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidAlpha = 3,
    InvalidTruncation = 4,
    Domain = 5,
    NonFinite = 6,
    NonRealSpectrum = 7,
    SolverFailure = 8,
    ZeroVector = 9,
    OutOfRange = 10,
    Panic = 11,
}

/// Curvatures at a surface point, in units of the input lengths.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ToroidCurvature {
    pub k1: f64,
    pub k2: f64,
    pub mean: f64,
    pub gaussian: f64,
    pub potential: f64,
}

/// Summary of one eigenstate; coefficients are read separately.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ToroidStateInfo {
    pub beta: f64,
    pub norm_constant: f64,
    pub m: u32,
    pub parity: u32,
    pub n_index: usize,
    pub degeneracy: u32,
    pub node_count: usize,
    pub coeff_count: usize,
}

/// Opaque solved sector.
pub struct ToroidSpectrum(Spectrum);

/// Opaque bound-state table.
pub struct ToroidBoundTable(BoundStateTable);

/// Real-valued callback `f(rho, user_data)` used to describe a Monge profile.
pub type ToroidProfileFn = Option<unsafe extern "C" fn(rho: f64, user_data: *mut c_void) -> f64>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ToroidStatus {
    match e {
        Error::Domain(_) => ToroidStatus::Domain,
        Error::NonFinite { .. } => ToroidStatus::NonFinite,
        Error::InvalidRadii { .. } | Error::InvalidAlpha(_) => ToroidStatus::InvalidAlpha,
        Error::InvalidTruncation(_) => ToroidStatus::InvalidTruncation,
        Error::GridTooSmall(_) | Error::InvalidArgument(_) => ToroidStatus::InvalidArgument,
        Error::NonRealSpectrum { .. } => ToroidStatus::NonRealSpectrum,
        Error::SolverFailure(_) => ToroidStatus::SolverFailure,
        Error::ZeroVector => ToroidStatus::ZeroVector,
    }
}

fn fail(status: ToroidStatus, msg: impl Into<String>) -> ToroidStatus {
    set_last_error(msg);
    status
}

/// Runs `f`, mapping library errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), ToroidStatus>) -> ToroidStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ToroidStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(ToroidStatus::Panic, "panic inside toroid"),
    }
}

fn lib<T>(r: toroid::Result<T>) -> Result<T, ToroidStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn parity_from(raw: u32) -> Result<Parity, ToroidStatus> {
    match raw {
        TOROID_PARITY_EVEN => Ok(Parity::Even),
        TOROID_PARITY_ODD => Ok(Parity::Odd),
        other => Err(fail(ToroidStatus::InvalidArgument, format!("unknown parity {other}"))),
    }
}

fn parity_to(p: Parity) -> u32 {
    match p {
        Parity::Even => TOROID_PARITY_EVEN,
        Parity::Odd => TOROID_PARITY_ODD,
    }
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, ToroidStatus> {
    p.as_mut()
        .ok_or_else(|| fail(ToroidStatus::NullPointer, "null output pointer"))
}

unsafe fn handle_ref<'a, T>(p: *const T) -> Result<&'a T, ToroidStatus> {
    p.as_ref()
        .ok_or_else(|| fail(ToroidStatus::NullPointer, "null handle"))
}

impl From<CurvatureBundle> for ToroidCurvature {
    fn from(b: CurvatureBundle) -> Self {
        Self { k1: b.k1, k2: b.k2, mean: b.mean, gaussian: b.gaussian, potential: b.potential }
    }
}

/// Static description of a status code; unknown codes get a generic
/// message. Never null.
#[no_mangle]
pub extern "C" fn toroid_status_message(status: i32) -> *const c_char {
    let s: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer\0",
        2 => b"invalid argument\0",
        3 => b"aspect ratio outside (0, 1)\0",
        4 => b"truncation below minimum\0",
        5 => b"point outside surface domain\0",
        6 => b"non-finite surface derivative\0",
        7 => b"non-real eigenvalue\0",
        8 => b"eigensolver failure\0",
        9 => b"zero coefficient vector\0",
        10 => b"index out of range\0",
        11 => b"internal panic\0",
        _ => b"unknown status\0",
    };
    s.as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `cap`). Returns the full message length, 0 if none.
#[no_mangle]
pub unsafe extern "C" fn toroid_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let slot = slot.borrow();
        let Some(msg) = slot.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Closed-form curvatures of a torus with radii `minor < major` at angle `theta`.
#[no_mangle]
pub unsafe extern "C" fn toroid_torus_curvatures(
    minor: f64,
    major: f64,
    theta: f64,
    out: *mut ToroidCurvature,
) -> ToroidStatus {
    guard(|| {
        let out = out_ref(out)?;
        let geom = lib(TorusGeometry::new(minor, major))?;
        *out = geometry::torus_curvatures(&geom, theta).into();
        Ok(())
    })
}

/// Curvatures of the surface of revolution with profile derivatives
/// `shape_d1 = S'(ρ)` and `shape_d2 = S''(ρ)` at radius `rho`.
#[no_mangle]
pub unsafe extern "C" fn toroid_monge_curvatures(
    shape_d1: ToroidProfileFn,
    shape_d2: ToroidProfileFn,
    user_data: *mut c_void,
    rho: f64,
    out: *mut ToroidCurvature,
) -> ToroidStatus {
    guard(|| {
        let out = out_ref(out)?;
        let (Some(d1), Some(d2)) = (shape_d1, shape_d2) else {
            return Err(fail(ToroidStatus::NullPointer, "null profile callback"));
        };
        if !(rho > 0.0) {
            return lib(Err(Error::Domain(rho)));
        }
        // The callbacks only live for this call; evaluate them eagerly.
        let v1 = d1(rho, user_data);
        let v2 = d2(rho, user_data);
        let surface = MongeSurface::new(|_| f64::NAN, move |_| v1, move |_| v2);
        *out = lib(geometry::monge_curvatures(&surface, rho))?.into();
        Ok(())
    })
}

/// `W = 1 + 2qH + q²K`; returns NaN for a null bundle.
#[no_mangle]
pub unsafe extern "C" fn toroid_norm_weight(q: f64, bundle: *const ToroidCurvature) -> f64 {
    match bundle.as_ref() {
        Some(b) => 1.0 + 2.0 * q * b.mean + q * q * b.gaussian,
        None => f64::NAN,
    }
}

/// Largest `m` with `2mα < 1`.
#[no_mangle]
pub unsafe extern "C" fn toroid_cutoff_m(alpha: f64, out: *mut u32) -> ToroidStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = lib(spectra::cutoff_m(alpha))?;
        Ok(())
    })
}

/// Solves one sector at truncation `n_basis`. On success `*out` owns a new
/// handle.
#[no_mangle]
pub unsafe extern "C" fn toroid_spectrum_solve(
    alpha: f64,
    m: u32,
    parity: u32,
    include_vc: bool,
    n_basis: usize,
    out: *mut *mut ToroidSpectrum,
) -> ToroidStatus {
    guard(|| {
        let out = out_ref(out)?;
        let spec = lib(ModeSpec::new(m, parity_from(parity)?, n_basis, include_vc))?;
        let s = lib(eigensolver::solve_checked(alpha, spec, eigensolver::DEFAULT_TOLERANCE))?;
        *out = Box::into_raw(Box::new(ToroidSpectrum(s)));
        Ok(())
    })
}

/// Doubles the truncation from `n_start` until the lowest eigenvalues settle
/// to `tol`.
#[no_mangle]
pub unsafe extern "C" fn toroid_spectrum_converge(
    alpha: f64,
    m: u32,
    parity: u32,
    include_vc: bool,
    tol: f64,
    n_start: usize,
    out: *mut *mut ToroidSpectrum,
) -> ToroidStatus {
    guard(|| {
        let out = out_ref(out)?;
        let p = parity_from(parity)?;
        let s = lib(eigensolver::converge_spectrum(alpha, m, p, include_vc, tol, n_start))?;
        *out = Box::into_raw(Box::new(ToroidSpectrum(s)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn toroid_spectrum_free(handle: *mut ToroidSpectrum) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of states; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn toroid_spectrum_len(handle: *const ToroidSpectrum) -> usize {
    handle.as_ref().map_or(0, |h| h.0.states.len())
}

#[no_mangle]
pub unsafe extern "C" fn toroid_spectrum_truncation(handle: *const ToroidSpectrum) -> usize {
    handle.as_ref().map_or(0, |h| h.0.truncation_used)
}

#[no_mangle]
pub unsafe extern "C" fn toroid_spectrum_converged(handle: *const ToroidSpectrum) -> bool {
    handle.as_ref().is_some_and(|h| h.0.converged)
}

fn state_at(s: &Spectrum, index: usize) -> Result<&toroid::Eigenstate, ToroidStatus> {
    s.states.get(index).ok_or_else(|| {
        fail(
            ToroidStatus::OutOfRange,
            format!("state {index} out of range ({} states)", s.states.len()),
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn toroid_spectrum_state(
    handle: *const ToroidSpectrum,
    index: usize,
    out: *mut ToroidStateInfo,
) -> ToroidStatus {
    guard(|| {
        let h = handle_ref(handle)?;
        let out = out_ref(out)?;
        let st = state_at(&h.0, index)?;
        *out = ToroidStateInfo {
            beta: st.beta,
            norm_constant: st.wavefunction.norm_constant,
            m: st.m,
            parity: parity_to(st.parity()),
            n_index: st.n_index,
            degeneracy: st.degeneracy(),
            node_count: st.wavefunction.node_count,
            coeff_count: st.coeffs().len(),
        };
        Ok(())
    })
}

/// Copies up to `cap` normalized coefficients of state `index` into `buf`
/// and stores the total count in `*written` (may be null).
#[no_mangle]
pub unsafe extern "C" fn toroid_spectrum_coeffs(
    handle: *const ToroidSpectrum,
    index: usize,
    buf: *mut f64,
    cap: usize,
    written: *mut usize,
) -> ToroidStatus {
    guard(|| {
        let h = handle_ref(handle)?;
        let coeffs = state_at(&h.0, index)?.coeffs();
        if cap > 0 {
            if buf.is_null() {
                return Err(fail(ToroidStatus::NullPointer, "null coefficient buffer"));
            }
            let n = coeffs.len().min(cap);
            ptr::copy_nonoverlapping(coeffs.as_ptr(), buf, n);
        }
        if let Some(w) = written.as_mut() {
            *w = coeffs.len();
        }
        Ok(())
    })
}

/// `ψ(θ)` of state `index`.
#[no_mangle]
pub unsafe extern "C" fn toroid_spectrum_eval(
    handle: *const ToroidSpectrum,
    index: usize,
    theta: f64,
    out: *mut f64,
) -> ToroidStatus {
    guard(|| {
        let h = handle_ref(handle)?;
        let out = out_ref(out)?;
        *out = state_at(&h.0, index)?.wavefunction.eval(theta);
        Ok(())
    })
}

/// All `β < 0` states for `m = 0..=m_max`.
#[no_mangle]
pub unsafe extern "C" fn toroid_bound_state_scan(
    alpha: f64,
    m_max: u32,
    out: *mut *mut ToroidBoundTable,
) -> ToroidStatus {
    guard(|| {
        let out = out_ref(out)?;
        let t = lib(spectra::bound_state_scan(alpha, m_max))?;
        *out = Box::into_raw(Box::new(ToroidBoundTable(t)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn toroid_bound_table_free(handle: *mut ToroidBoundTable) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

#[no_mangle]
pub unsafe extern "C" fn toroid_bound_table_len(handle: *const ToroidBoundTable) -> usize {
    handle.as_ref().map_or(0, |h| h.0.entries.len())
}

/// Bound-state count weighting `m > 0` entries by two.
#[no_mangle]
pub unsafe extern "C" fn toroid_bound_table_degenerate_count(handle: *const ToroidBoundTable) -> usize {
    handle.as_ref().map_or(0, |h| h.0.total_count_with_degeneracy)
}

#[no_mangle]
pub unsafe extern "C" fn toroid_bound_table_entry(
    handle: *const ToroidBoundTable,
    index: usize,
    out: *mut ToroidStateInfo,
) -> ToroidStatus {
    guard(|| {
        let h = handle_ref(handle)?;
        let out = out_ref(out)?;
        let e = h.0.entries.get(index).ok_or_else(|| {
            fail(ToroidStatus::OutOfRange, format!("entry {index} out of range"))
        })?;
        *out = ToroidStateInfo {
            beta: e.beta,
            norm_constant: e.coeffs.first().copied().unwrap_or(0.0),
            m: e.m,
            parity: parity_to(e.parity),
            n_index: e.n_index,
            degeneracy: e.degeneracy,
            node_count: eigensolver::count_nodes(e.parity, &e.coeffs, eigensolver::NODE_SAMPLES),
            coeff_count: e.coeffs.len(),
        };
        Ok(())
    })
}
