//! C ABI for qbounce.
//!
//! Objects are passed as opaque handles created by `qb_*_new` style functions
//! and released with the matching `qb_*_free`. Every fallible call returns a
//! [`QbStatus`]; on failure the message is available from
//! [`qb_last_error_message`] on the same thread. Energies are in joules,
//! lengths in metres, wavevectors in 1/m.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qbounce::airy::{airy_pair, zero};
use qbounce::cavity::{
    complex_poles, ideal_levels, lifetime_of, numeric_solver, resonances_effective_range, resonances_with,
    EffectiveRangeCavity,
};
use qbounce::effrange::EffectiveRangeCoefficients;
use qbounce::potential::{PhysicalSetup, PotentialModel, SurfacePreset};
use qbounce::scatter::{reflection_amplitude, SolverOptions};
use qbounce::{Complex64, Error};

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NumericalFailure = 3,
    Panic = 4,
}

/// Atom mass and gravity.
pub struct QbSetup(PhysicalSetup);

/// Casimir–Polder potential model.
pub struct QbModel(PotentialModel);

/// Effective-range coefficients (ℓ, α₀, α₂).
pub struct QbCoefficients(EffectiveRangeCoefficients);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

enum Failure {
    Null,
    Invalid(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::NonPositiveAltitude(_) => Failure::Invalid(format!("{}: {e}", e.name())),
            other => Failure::Lib(other),
        }
    }
}

fn guard<F>(f: F) -> QbStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            QbStatus::Ok
        }
        Ok(Err(Failure::Null)) => {
            set_error("null pointer argument".into());
            QbStatus::NullPointer
        }
        Ok(Err(Failure::Invalid(msg))) => {
            set_error(msg);
            QbStatus::InvalidArgument
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(format!("{}: {e}", e.name()));
            QbStatus::NumericalFailure
        }
        Err(_) => {
            set_error("internal panic".into());
            QbStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null)
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize) -> Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return Err(Failure::Null);
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn put<T>(p: *mut T, v: T) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure::Null);
    }
    p.write(v);
    Ok(())
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null);
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Invalid("string is not UTF-8".into()))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn qb_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Creates a setup for the given mass (kg) and gravity (m/s²).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qb_setup_new(mass: f64, gravity: f64, out: *mut *mut QbSetup) -> QbStatus {
    guard(|| {
        let s = PhysicalSetup::new(mass, gravity)?;
        put(out, Box::into_raw(Box::new(QbSetup(s))))
    })
}

/// Hydrogen atom in standard gravity.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qb_setup_hydrogen(out: *mut *mut QbSetup) -> QbStatus {
    guard(|| put(out, Box::into_raw(Box::new(QbSetup(PhysicalSetup::hydrogen())))))
}

/// # Safety
/// `setup` must come from a `qb_setup_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn qb_setup_free(setup: *mut QbSetup) {
    if !setup.is_null() {
        drop(Box::from_raw(setup));
    }
}

/// Gravitational length ℓ_g (m) and energy ε_g (J).
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qb_setup_scales(setup: *const QbSetup, ell_g: *mut f64, eps_g: *mut f64) -> QbStatus {
    guard(|| {
        let s = &get(setup)?.0;
        put(ell_g, s.ell_g())?;
        put(eps_g, s.eps_g())
    })
}

/// Homogeneous −C4/z⁴ model (C4 in J·m⁴).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qb_model_v4(c4: f64, out: *mut *mut QbModel) -> QbStatus {
    guard(|| {
        let m = PotentialModel::homogeneous_v4(c4)?;
        put(out, Box::into_raw(Box::new(QbModel(m))))
    })
}

/// Interpolating −C4/(z³(z + C4/C3)) model (C3 in J·m³, C4 in J·m⁴).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qb_model_v3v4(c3: f64, c4: f64, out: *mut *mut QbModel) -> QbStatus {
    guard(|| {
        let m = PotentialModel::v3v4(c3, c4)?;
        put(out, Box::into_raw(Box::new(QbModel(m))))
    })
}

/// # Safety
/// `model` must come from a `qb_model_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn qb_model_free(model: *mut QbModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Coefficients of a shipped surface preset (`perfect-mirror`, `silicon`, `silica`).
///
/// # Safety
/// `name` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qb_coefficients_preset(name: *const c_char, out: *mut *mut QbCoefficients) -> QbStatus {
    guard(|| {
        let p = SurfacePreset::by_name(c_str(name)?)?;
        put(out, Box::into_raw(Box::new(QbCoefficients(p.coefficients()))))
    })
}

/// Coefficients from explicit values (ℓ in metres).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qb_coefficients_new(
    ell: f64,
    alpha0_re: f64,
    alpha0_im: f64,
    alpha2_re: f64,
    alpha2_im: f64,
    out: *mut *mut QbCoefficients,
) -> QbStatus {
    guard(|| {
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(Failure::Invalid(format!("length must be positive, got {ell}")));
        }
        let c = EffectiveRangeCoefficients::new(
            ell,
            Complex64::new(alpha0_re, alpha0_im),
            Complex64::new(alpha2_re, alpha2_im),
        );
        put(out, Box::into_raw(Box::new(QbCoefficients(c))))
    })
}

/// # Safety
/// `coeffs` must come from a `qb_coefficients_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn qb_coefficients_free(coeffs: *mut QbCoefficients) {
    if !coeffs.is_null() {
        drop(Box::from_raw(coeffs));
    }
}

/// Complex scattering length a (m).
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qb_coefficients_scattering_length(
    coeffs: *const QbCoefficients,
    re: *mut f64,
    im: *mut f64,
) -> QbStatus {
    guard(|| {
        let a = get(coeffs)?.0.scattering_length().0;
        put(re, a.re)?;
        put(im, a.im)
    })
}

/// Ai, Ai′, Bi, Bi′ at z, written as 8 doubles (re, im pairs in that order).
///
/// # Safety
/// `out` must point to 8 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qb_airy(re: f64, im: f64, out: *mut f64) -> QbStatus {
    guard(|| {
        let v = airy_pair(Complex64::new(re, im))?;
        let o = out_slice(out, 8)?;
        for (i, c) in [v.ai, v.ai_prime, v.bi, v.bi_prime].iter().enumerate() {
            o[2 * i] = c.re;
            o[2 * i + 1] = c.im;
        }
        Ok(())
    })
}

/// n-th Airy zero as a positive number λ_n (Ai(−λ_n) = 0), n ≥ 1.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qb_airy_zero(n: usize, out: *mut f64) -> QbStatus {
    guard(|| put(out, zero(n)?))
}

/// Ideal bouncer levels E_n = λ_n ε_g for n = 1..=n_max.
///
/// # Safety
/// `out` must point to `n_max` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qb_ideal_levels(setup: *const QbSetup, n_max: usize, out: *mut f64) -> QbStatus {
    guard(|| {
        let levels = ideal_levels(&get(setup)?.0, n_max)?;
        out_slice(out, n_max)?.copy_from_slice(&levels);
        Ok(())
    })
}

/// Reflection amplitude r(k) of the model's CP tail on an absorbing surface.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qb_reflection(
    setup: *const QbSetup,
    model: *const QbModel,
    k: f64,
    r_re: *mut f64,
    r_im: *mut f64,
) -> QbStatus {
    guard(|| {
        let s = reflection_amplitude(&get(setup)?.0, &get(model)?.0, k)?;
        put(r_re, s.r.re)?;
        put(r_im, s.r.im)
    })
}

/// Resonance energies (J) by direct integration, n = 1..=n_max.
///
/// # Safety
/// `out` must point to `n_max` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qb_resonances_numeric(
    setup: *const QbSetup,
    model: *const QbModel,
    n_max: usize,
    out: *mut f64,
) -> QbStatus {
    guard(|| {
        let (s, m) = (&get(setup)?.0, &get(model)?.0);
        let solver = numeric_solver(s, m, n_max, SolverOptions::default())?;
        let records = resonances_with(s, &solver, n_max)?;
        let o = out_slice(out, n_max)?;
        for (slot, r) in o.iter_mut().zip(records) {
            *slot = r.energy.unwrap_or(f64::NAN);
        }
        Ok(())
    })
}

/// Resonance energies (J) of the effective-range model, n = 1..=n_max.
///
/// # Safety
/// `out` must point to `n_max` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qb_resonances_effective_range(
    setup: *const QbSetup,
    coeffs: *const QbCoefficients,
    n_max: usize,
    out: *mut f64,
) -> QbStatus {
    guard(|| {
        let records = resonances_effective_range(&get(setup)?.0, &get(coeffs)?.0, n_max)?;
        let o = out_slice(out, n_max)?;
        for (slot, r) in o.iter_mut().zip(records) {
            *slot = r.energy.unwrap_or(f64::NAN);
        }
        Ok(())
    })
}

unsafe fn write_poles(poles: &[Complex64], re: *mut f64, im: *mut f64) -> Result<(), Failure> {
    let (o_re, o_im) = (out_slice(re, poles.len())?, out_slice(im, poles.len())?);
    for (i, p) in poles.iter().enumerate() {
        o_re[i] = p.re;
        o_im[i] = p.im;
    }
    Ok(())
}

/// Complex poles (J) of the cavity response for the effective-range model.
///
/// # Safety
/// `re` and `im` must each point to `n_max` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qb_poles_effective_range(
    setup: *const QbSetup,
    coeffs: *const QbCoefficients,
    n_max: usize,
    re: *mut f64,
    im: *mut f64,
) -> QbStatus {
    guard(|| {
        let s = &get(setup)?.0;
        let cavity = EffectiveRangeCavity::new(s, &get(coeffs)?.0);
        write_poles(&complex_poles(s, &cavity, n_max)?, re, im)
    })
}

/// Complex poles (J) of the cavity response by direct integration.
///
/// # Safety
/// `re` and `im` must each point to `n_max` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qb_poles_numeric(
    setup: *const QbSetup,
    model: *const QbModel,
    n_max: usize,
    re: *mut f64,
    im: *mut f64,
) -> QbStatus {
    guard(|| {
        let (s, m) = (&get(setup)?.0, &get(model)?.0);
        let solver = numeric_solver(s, m, n_max, SolverOptions::default())?;
        write_poles(&complex_poles(s, &solver, n_max)?, re, im)
    })
}

/// Lifetime −ħ/(2 Im ℰ) in seconds for a pole with imaginary part `im_energy` (J).
#[no_mangle]
pub extern "C" fn qb_lifetime(im_energy: f64) -> f64 {
    lifetime_of(Complex64::new(0.0, im_energy))
}
