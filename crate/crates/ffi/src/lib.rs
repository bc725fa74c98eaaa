//! C ABI for `polariton-sn`.
//!
//! Conventions:
//!
//! * Every fallible function returns an [`SnStatus`]; results go through out
//!   pointers that are written only on `SN_STATUS_OK`.
//! * Handles (`SnCavity`, `SnState`, `SnCertificate`) are opaque, created by
//!   `*_new` style functions and released with the matching `*_free`.
//!   Freeing `NULL` is a no-op.
//! * On failure a description is kept per thread and can be copied out with
//!   [`sn_last_error_message`].
//! * Units: energies and wave vectors in eV, times in 1/eV.
//! * Panics never cross the boundary; they surface as `SN_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polariton_sn::phase_matching;
use polariton_sn::state::{self, BipartiteState, DephasedState, Media, MediumDispersion};
use polariton_sn::witness::{self, CertifyOptions, SearchMode};
use polariton_sn::{cavity, Branch, CavityParams, Error, PumpSpec, WaveVector};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NoPhaseMatching = 3,
    DegeneratePotentials = 4,
    CapacityExceeded = 5,
    InvalidState = 6,
    BufferTooSmall = 7,
    Panic = 99,
}

/// Hopfield coefficients; `m12 >= 0` and `m21 = -m12`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SnHopfield {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

/// Cavity parameters.
pub struct SnCavity(CavityParams);

/// Arrival-time averaged two-photon density matrix.
pub struct SnState {
    state: DephasedState,
    gamma: Vec<f64>,
}

/// Outcome of a Schmidt-number test.
pub struct SnCertificate(witness::SnCertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SnStatus {
    match e {
        Error::NoPhaseMatching { .. } => SnStatus::NoPhaseMatching,
        Error::DegeneratePotentials => SnStatus::DegeneratePotentials,
        Error::CapacityExceeded { .. } => SnStatus::CapacityExceeded,
        Error::InvalidState(_) | Error::NullState | Error::NotHermitian(_) => SnStatus::InvalidState,
        _ => SnStatus::InvalidArgument,
    }
}

struct Failure(SnStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SnStatus::NullPointer, format!("{what} is NULL"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SnStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            SnStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(unsafe { std::slice::from_raw_parts_mut(p, len) })
}

fn branch(index: u8) -> Result<Branch, Failure> {
    Ok(Branch::try_from(index)?)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated and
/// NUL-terminated when `len > 0`). Returns the full message length
/// excluding the terminator, or 0 when no error is recorded.
///
/// # Safety
/// `buf` must be valid for `len` bytes or be NULL with `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn sn_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            if !buf.is_null() && len > 0 {
                unsafe { *buf = 0 };
            }
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Clears the calling thread's last error message.
#[no_mangle]
pub extern "C" fn sn_clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Creates cavity parameters: `E_C(0)`, `Omega_R`, `E_b` in eV and the
/// normalized detuning `delta`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn sn_cavity_new(ec0: f64, omega_r: f64, eb: f64, delta: f64, out: *mut *mut SnCavity) -> SnStatus {
    guard(|| {
        let p = CavityParams::new(ec0, omega_r, eb, delta)?;
        unsafe { write(out, Box::into_raw(Box::new(SnCavity(p))), "out") }
    })
}

/// Overrides the saturation ratio `p_s` (default `2 Omega_R / E_b`).
///
/// # Safety
/// `cavity` must be a live handle from [`sn_cavity_new`].
#[no_mangle]
pub unsafe extern "C" fn sn_cavity_set_saturation_ratio(cavity: *mut SnCavity, p_s: f64) -> SnStatus {
    guard(|| {
        let c = unsafe { cavity.as_mut() }.ok_or_else(|| null("cavity"))?;
        c.0 = c.0.with_saturation_ratio(p_s)?;
        Ok(())
    })
}

/// # Safety
/// `cavity` must be NULL or a handle from [`sn_cavity_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sn_cavity_free(cavity: *mut SnCavity) {
    if !cavity.is_null() {
        drop(unsafe { Box::from_raw(cavity) });
    }
}

/// `k0 = E_C(0)`, the unit of in-plane wave numbers.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sn_cavity_k0(cavity: *const SnCavity, out: *mut f64) -> SnStatus {
    guard(|| {
        let c = unsafe { deref(cavity, "cavity") }?;
        unsafe { write(out, c.0.k0(), "out") }
    })
}

/// Effective saturation ratio `p_s`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sn_cavity_saturation_ratio(cavity: *const SnCavity, out: *mut f64) -> SnStatus {
    guard(|| {
        let c = unsafe { deref(cavity, "cavity") }?;
        unsafe { write(out, c.0.saturation_ratio(), "out") }
    })
}

/// Bare cavity photon energy `E_C(k)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sn_photon_energy(cavity: *const SnCavity, kx: f64, ky: f64, out: *mut f64) -> SnStatus {
    guard(|| {
        let c = unsafe { deref(cavity, "cavity") }?;
        unsafe { write(out, cavity::photon_energy(&c.0, WaveVector::new(kx, ky)), "out") }
    })
}

/// Polariton energy on branch 1 (lower) or 2 (upper).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sn_polariton_energy(
    cavity: *const SnCavity,
    branch_index: u8,
    kx: f64,
    ky: f64,
    out: *mut f64,
) -> SnStatus {
    guard(|| {
        let c = unsafe { deref(cavity, "cavity") }?;
        let e = cavity::polariton_energy(&c.0, branch(branch_index)?, WaveVector::new(kx, ky));
        unsafe { write(out, e, "out") }
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sn_hopfield(cavity: *const SnCavity, kx: f64, ky: f64, out: *mut SnHopfield) -> SnStatus {
    guard(|| {
        let c = unsafe { deref(cavity, "cavity") }?;
        let m = cavity::hopfield(&c.0, WaveVector::new(kx, ky));
        unsafe { write(out, SnHopfield { m11: m.m11, m12: m.m12, m21: m.m21, m22: m.m22 }, "out") }
    })
}

/// Branch-resolved effective potential `V^{j1 j2 j3 j4}_{k, k', q}` with
/// branch indices in {1, 2}.
///
/// # Safety
/// `branches` must point to 4 bytes; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sn_effective_potential(
    cavity: *const SnCavity,
    k: *const f64,
    k_prime: *const f64,
    q: *const f64,
    branches: *const u8,
    out: *mut f64,
) -> SnStatus {
    guard(|| {
        let c = unsafe { deref(cavity, "cavity") }?;
        let vec = |p: *const f64, what: &str| -> Result<WaveVector, Failure> {
            let s = unsafe { slice(p, 2, what) }?;
            Ok(WaveVector::new(s[0], s[1]))
        };
        let js = unsafe { slice(branches, 4, "branches") }?;
        let v = cavity::effective_potential_indexed(&c.0, vec(k, "k")?, vec(k_prime, "k_prime")?, vec(q, "q")?, [
            js[0], js[1], js[2], js[3],
        ])?;
        unsafe { write(out, v, "out") }
    })
}

/// Phase-matched scattering vector for the pump `(kpx, kpy)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sn_scattering_vector(
    cavity: *const SnCavity,
    kpx: f64,
    kpy: f64,
    out_qx: *mut f64,
    out_qy: *mut f64,
) -> SnStatus {
    guard(|| {
        let c = unsafe { deref(cavity, "cavity") }?;
        if out_qx.is_null() || out_qy.is_null() {
            return Err(null("out_qx/out_qy"));
        }
        let q = phase_matching::solve_scattering_vector(&c.0, WaveVector::new(kpx, kpy))?;
        unsafe {
            write(out_qx, q.kx, "out_qx")?;
            write(out_qy, q.ky, "out_qy")
        }
    })
}

/// Normalized pair amplitudes `(alpha, beta)` for pump `kp` and scattering
/// vector `q`, signs preserved.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sn_pair_amplitudes(
    cavity: *const SnCavity,
    kpx: f64,
    kpy: f64,
    qx: f64,
    qy: f64,
    out_alpha: *mut f64,
    out_beta: *mut f64,
) -> SnStatus {
    guard(|| {
        let c = unsafe { deref(cavity, "cavity") }?;
        if out_alpha.is_null() || out_beta.is_null() {
            return Err(null("out_alpha/out_beta"));
        }
        let (a, b) = cavity::pair_amplitudes(&c.0, WaveVector::new(kpx, kpy), WaveVector::new(qx, qy))?;
        unsafe {
            write(out_alpha, a, "out_alpha")?;
            write(out_beta, b, "out_beta")
        }
    })
}

unsafe fn build_state(
    cavity: *const SnCavity,
    direction_x: f64,
    direction_y: f64,
    magnitudes: *const f64,
    n_pumps: usize,
) -> Result<BipartiteState, Failure> {
    let c = unsafe { deref(cavity, "cavity") }?;
    let mags = unsafe { slice(magnitudes, n_pumps, "magnitudes") }?;
    let pumps = PumpSpec::new([direction_x, direction_y], mags.to_vec())?;
    let pairs = phase_matching::build_pairs(&c.0, &pumps)?;
    Ok(BipartiteState::from_pairs(&pairs)?)
}

fn media(slope_minus: f64, slope_plus: f64) -> Result<Media, Failure> {
    Ok(Media::new(MediumDispersion::new(slope_minus)?, MediumDispersion::new(slope_plus)?))
}

/// Builds the emitted state for collinear pumps along `(direction_x,
/// direction_y)` with magnitudes in units of `k0`, propagated through media
/// with group slopes `slope_minus`, `slope_plus` and averaged over the
/// arrival window `[t_mid - dt/2, t_mid + dt/2]`. `dt = 0` gives the pure
/// state.
///
/// # Safety
/// `magnitudes` must hold `n_pumps` values; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sn_state_new(
    cavity: *const SnCavity,
    direction_x: f64,
    direction_y: f64,
    magnitudes: *const f64,
    n_pumps: usize,
    slope_minus: f64,
    slope_plus: f64,
    t_mid: f64,
    dt: f64,
    out: *mut *mut SnState,
) -> SnStatus {
    guard(|| {
        let s = unsafe { build_state(cavity, direction_x, direction_y, magnitudes, n_pumps) }?;
        let rho = state::dephased_density_window(&s, media(slope_minus, slope_plus)?, t_mid, dt)?;
        let handle = SnState { state: rho, gamma: s.gamma().to_vec() };
        unsafe { write(out, Box::into_raw(Box::new(handle)), "out") }
    })
}

/// As [`sn_state_new`] in the limit of an infinite window.
///
/// # Safety
/// `magnitudes` must hold `n_pumps` values; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sn_state_new_fully_dephased(
    cavity: *const SnCavity,
    direction_x: f64,
    direction_y: f64,
    magnitudes: *const f64,
    n_pumps: usize,
    out: *mut *mut SnState,
) -> SnStatus {
    guard(|| {
        let s = unsafe { build_state(cavity, direction_x, direction_y, magnitudes, n_pumps) }?;
        let handle = SnState { state: state::full_dephasing_limit(&s), gamma: s.gamma().to_vec() };
        unsafe { write(out, Box::into_raw(Box::new(handle)), "out") }
    })
}

/// # Safety
/// `state` must be NULL or a live state handle.
#[no_mangle]
pub unsafe extern "C" fn sn_state_free(state: *mut SnState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Hilbert-space dimension `2^N` of one side, or 0 for NULL.
///
/// # Safety
/// `state` must be NULL or a live state handle.
#[no_mangle]
pub unsafe extern "C" fn sn_state_dim(state: *const SnState) -> usize {
    unsafe { state.as_ref() }.map_or(0, |s| s.state.dim())
}

/// Pure-state Schmidt coefficients `gamma_m` (`dim` values).
///
/// # Safety
/// `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sn_state_gamma(state: *const SnState, out: *mut f64, len: usize) -> SnStatus {
    guard(|| {
        let s = unsafe { deref(state, "state") }?;
        let dst = unsafe { slice_mut(out, len, "out") }?;
        if len < s.gamma.len() {
            return Err(Failure(SnStatus::BufferTooSmall, format!("need {} values, got {len}", s.gamma.len())));
        }
        dst[..s.gamma.len()].copy_from_slice(&s.gamma);
        Ok(())
    })
}

/// Density matrix `rho_ml` in row-major order, real and imaginary parts in
/// separate buffers of `dim * dim` doubles each.
///
/// # Safety
/// `re` and `im` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sn_state_density(state: *const SnState, re: *mut f64, im: *mut f64, len: usize) -> SnStatus {
    guard(|| {
        let s = unsafe { deref(state, "state") }?;
        let d = s.state.dim();
        if len < d * d {
            return Err(Failure(SnStatus::BufferTooSmall, format!("need {} values, got {len}", d * d)));
        }
        let re = unsafe { slice_mut(re, len, "re") }?;
        let im = unsafe { slice_mut(im, len, "im") }?;
        for m in 0..d {
            for l in 0..d {
                let z = s.state.entry(m, l);
                re[m * d + l] = z.re;
                im[m * d + l] = z.im;
            }
        }
        Ok(())
    })
}

/// Certifies the Schmidt number with the default support threshold and the
/// pruned search.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sn_certify(state: *const SnState, tolerance: f64, out: *mut *mut SnCertificate) -> SnStatus {
    unsafe { sn_certify_with(state, witness::DEFAULT_RANK_TOLERANCE, tolerance, false, out) }
}

/// Certification with an explicit support threshold; `exhaustive` selects
/// full subset enumeration instead of branch and bound.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sn_certify_with(
    state: *const SnState,
    rank_tolerance: f64,
    tolerance: f64,
    exhaustive: bool,
    out: *mut *mut SnCertificate,
) -> SnStatus {
    guard(|| {
        let s = unsafe { deref(state, "state") }?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mode = if exhaustive { SearchMode::Exhaustive } else { SearchMode::Pruned };
        let cert = witness::certify_sn_with(&s.state, CertifyOptions { rank_tolerance, tolerance, mode })?;
        unsafe { write(out, Box::into_raw(Box::new(SnCertificate(cert))), "out") }
    })
}

/// # Safety
/// `cert` must be NULL or a live certificate handle.
#[no_mangle]
pub unsafe extern "C" fn sn_certificate_free(cert: *mut SnCertificate) {
    if !cert.is_null() {
        drop(unsafe { Box::from_raw(cert) });
    }
}

/// Certified Schmidt number, or 0 for NULL.
///
/// # Safety
/// `cert` must be NULL or a live certificate handle.
#[no_mangle]
pub unsafe extern "C" fn sn_certificate_schmidt_number(cert: *const SnCertificate) -> usize {
    unsafe { cert.as_ref() }.map_or(0, |c| c.0.certified_sn)
}

/// `<L>`, or NaN for NULL.
///
/// # Safety
/// `cert` must be NULL or a live certificate handle.
#[no_mangle]
pub unsafe extern "C" fn sn_certificate_expectation(cert: *const SnCertificate) -> f64 {
    unsafe { cert.as_ref() }.map_or(f64::NAN, |c| c.0.expectation)
}

/// Copies up to `len` values `f_1, f_2, ...` into `out` and returns how many
/// exist in total.
///
/// # Safety
/// `out` must be valid for `len` doubles or be NULL with `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn sn_certificate_f_values(cert: *const SnCertificate, out: *mut f64, len: usize) -> usize {
    let Some(c) = (unsafe { cert.as_ref() }) else { return 0 };
    let f = &c.0.f_values;
    if !out.is_null() {
        let n = f.len().min(len);
        unsafe { ptr::copy_nonoverlapping(f.as_ptr(), out, n) };
    }
    f.len()
}
