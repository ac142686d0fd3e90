//! C ABI over `nfconst`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free` function. Every fallible call returns an [`NfStatus`];
//! on failure the message is available from [`nf_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use nfconst::experiments::{self, ExperimentConfig};
use nfconst::lattice::DomainSpec;
use nfconst::quadform::{self, QuadForm};
use nfconst::weights::{self, Chi, WeightParams};
use nfconst::{primes, AlgInt, Error, Field};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    Overflow = 3,
    Unsupported = 4,
    Infeasible = 5,
    Internal = 6,
    Io = 7,
    NullPointer = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

/// A number field.
pub struct NfField {
    inner: Arc<Field>,
}

/// A fundamental domain for the unit group of a field.
pub struct NfDomain {
    inner: DomainSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NfStatus {
    match e {
        Error::Invalid(_) => NfStatus::InvalidArgument,
        Error::Parse(_) | Error::Json(_) => NfStatus::ParseError,
        Error::Overflow(_) => NfStatus::Overflow,
        Error::Unsupported(_) => NfStatus::Unsupported,
        Error::Infeasible(_) => NfStatus::Infeasible,
        Error::Internal(_) => NfStatus::Internal,
        Error::Io(_) => NfStatus::Io,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Small(usize),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> NfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NfStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            NfStatus::NullPointer
        }
        Ok(Err(Fail::Small(need))) => {
            set_error(format!("output buffer too small, need {need}"));
            NfStatus::BufferTooSmall
        }
        Err(_) => {
            set_error("panic inside nfconst".into());
            NfStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Lib(Error::Parse(format!("{what} is not UTF-8"))))
}

unsafe fn element(field: &Field, coords: *const i64, len: usize) -> Result<AlgInt, Fail> {
    if coords.is_null() {
        return Err(Fail::Null("coords"));
    }
    if len != field.degree() {
        return Err(Fail::Lib(Error::Invalid(format!("expected {} coordinates, got {len}", field.degree()))));
    }
    Ok(AlgInt::new(std::slice::from_raw_parts(coords, len).to_vec()))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to fit) and returns the full message length, 0 if there is none.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn nf_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Parses a field spec such as `quadratic d=-1` or `monogenic poly=-2,0,0,1`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nf_field_new(spec: *const c_char, out_field: *mut *mut NfField) -> NfStatus {
    guard(|| {
        let o = out(out_field, "out_field")?;
        let f = Field::parse(c_str(spec, "spec")?)?;
        *o = Box::into_raw(Box::new(NfField { inner: Arc::new(f) }));
        Ok(())
    })
}

/// # Safety
/// `field` must come from [`nf_field_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nf_field_free(field: *mut NfField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nf_field_degree(field: *const NfField, out_degree: *mut usize) -> NfStatus {
    guard(|| {
        *out(out_degree, "out_degree")? = as_ref(field, "field")?.inner.degree();
        Ok(())
    })
}

/// Field norm of the element with the given coordinates.
///
/// # Safety
/// `coords` must hold `len` values; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nf_element_norm(field: *const NfField, coords: *const i64, len: usize, out_norm: *mut i64) -> NfStatus {
    guard(|| {
        let f = &as_ref(field, "field")?.inner;
        let a = element(f, coords, len)?;
        let n = f.element_norm(&a)?;
        *out(out_norm, "out_norm")? = i64::try_from(n).map_err(|_| Error::Overflow("norm"))?;
        Ok(())
    })
}

/// Whether the element generates a prime ideal.
///
/// # Safety
/// `coords` must hold `len` values; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nf_is_prime_element(field: *const NfField, coords: *const i64, len: usize, out_prime: *mut bool) -> NfStatus {
    guard(|| {
        let f = &as_ref(field, "field")?.inner;
        let a = element(f, coords, len)?;
        *out(out_prime, "out_prime")? = primes::is_prime_element(f, &a)?;
        Ok(())
    })
}

/// Truncated von Mangoldt weight of the principal ideal, with the bump cutoff.
///
/// # Safety
/// `coords` must hold `len` values; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nf_lambda(field: *const NfField, coords: *const i64, len: usize, r: f64, out_value: *mut f64) -> NfStatus {
    guard(|| {
        let f = &as_ref(field, "field")?.inner;
        let a = element(f, coords, len)?;
        let p = WeightParams::new(r, Chi::Bump, None, None)?;
        *out(out_value, "out_value")? = weights::lambda_element(f, &a, &p)?;
        Ok(())
    })
}

/// The standard fundamental domain (first embedding, computed or supplied units).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nf_domain_new(field: *const NfField, out_domain: *mut *mut NfDomain) -> NfStatus {
    guard(|| {
        let o = out(out_domain, "out_domain")?;
        let f = as_ref(field, "field")?.inner.clone();
        let d = DomainSpec::standard(f)?;
        *o = Box::into_raw(Box::new(NfDomain { inner: d }));
        Ok(())
    })
}

/// # Safety
/// `domain` must come from [`nf_domain_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nf_domain_free(domain: *mut NfDomain) {
    if !domain.is_null() {
        drop(Box::from_raw(domain));
    }
}

/// # Safety
/// `coords` must hold `len` values; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nf_in_domain(domain: *const NfDomain, coords: *const i64, len: usize, out_inside: *mut bool) -> NfStatus {
    guard(|| {
        let d = &as_ref(domain, "domain")?.inner;
        let a = element(d.field(), coords, len)?;
        *out(out_inside, "out_inside")? = d.in_domain(&a)?;
        Ok(())
    })
}

/// Writes the associate of the element lying in the domain to `out_coords` (`len` values).
///
/// # Safety
/// `coords` and `out_coords` must hold `len` values; `domain` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nf_canonical_associate(domain: *const NfDomain, coords: *const i64, len: usize, out_coords: *mut i64) -> NfStatus {
    guard(|| {
        let d = &as_ref(domain, "domain")?.inner;
        let a = element(d.field(), coords, len)?;
        let c = d.canonical_associate(&a)?;
        if out_coords.is_null() {
            return Err(Fail::Null("out_coords"));
        }
        ptr::copy_nonoverlapping(c.coords.as_ptr(), out_coords, len);
        Ok(())
    })
}

/// Number of associates of the element with all coordinates at most `m` in absolute value.
///
/// # Safety
/// `coords` must hold `len` values; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nf_orbit_count(domain: *const NfDomain, coords: *const i64, len: usize, m: f64, out_count: *mut u64) -> NfStatus {
    guard(|| {
        let d = &as_ref(domain, "domain")?.inner;
        let a = element(d.field(), coords, len)?;
        *out(out_count, "out_count")? = d.orbit_count(&a, m)?;
        Ok(())
    })
}

/// Classes of primitive forms of discriminant `disc` (positive definite ones when `disc` < 0).
///
/// # Safety
/// `out_h` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nf_class_number(disc: i64, out_h: *mut u64) -> NfStatus {
    guard(|| {
        *out(out_h, "out_h")? = quadform::class_number(disc as i128)?;
        Ok(())
    })
}

/// Canonical representative of the class of a x^2 + b x y + c y^2, written to `out_abc[0..3]`.
///
/// # Safety
/// `out_abc` must hold three values.
#[no_mangle]
pub unsafe extern "C" fn nf_reduce_form(a: i64, b: i64, c: i64, out_abc: *mut i64) -> NfStatus {
    guard(|| {
        if out_abc.is_null() {
            return Err(Fail::Null("out_abc"));
        }
        let r = quadform::reduce_form(&QuadForm::new(a, b, c))?;
        for (i, v) in [r.a, r.b, r.c].into_iter().enumerate() {
            *out_abc.add(i) = v;
        }
        Ok(())
    })
}

/// Cutoff value chi(x); `delta` = 0 selects the bump, otherwise the smoothed triangle.
///
/// # Safety
/// `out_value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nf_chi(x: f64, delta: f64, out_value: *mut f64) -> NfStatus {
    guard(|| {
        let chi = if delta == 0.0 { Chi::Bump } else { Chi::smoothed_triangle(delta)? };
        *out(out_value, "out_value")? = chi.eval(x);
        Ok(())
    })
}

/// c_chi for the cutoff selected as in [`nf_chi`].
///
/// # Safety
/// `out_value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nf_c_chi(delta: f64, out_value: *mut f64) -> NfStatus {
    guard(|| {
        let chi = if delta == 0.0 { Chi::Bump } else { Chi::smoothed_triangle(delta)? };
        *out(out_value, "out_value")? = chi.c_chi();
        Ok(())
    })
}

/// Runs an experiment from a JSON config and returns the JSON report in a
/// newly allocated string, released with [`nf_string_free`].
///
/// # Safety
/// `config_json` must be NUL-terminated; `out_report` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nf_run_experiment_json(config_json: *const c_char, out_report: *mut *mut c_char) -> NfStatus {
    guard(|| {
        let o = out(out_report, "out_report")?;
        let cfg = ExperimentConfig::from_json(c_str(config_json, "config_json")?)?;
        let rep = experiments::run(&cfg)?;
        let text = rep.to_json()?;
        *o = CString::new(text).map_err(|e| Error::Internal(e.to_string()))?.into_raw();
        Ok(())
    })
}

/// Copies the `data` section of a report for `config_json` into `buf`.
/// Returns BufferTooSmall (with the needed size in `out_len`) when it does not fit.
///
/// # Safety
/// `buf` must be valid for `len` bytes; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nf_run_experiment_data(config_json: *const c_char, buf: *mut c_char, len: usize, out_len: *mut usize) -> NfStatus {
    guard(|| {
        let ol = out(out_len, "out_len")?;
        let cfg = ExperimentConfig::from_json(c_str(config_json, "config_json")?)?;
        let text = experiments::run(&cfg)?.data_json()?;
        *ol = text.len() + 1;
        if buf.is_null() || len < text.len() + 1 {
            return Err(Fail::Small(text.len() + 1));
        }
        ptr::copy_nonoverlapping(text.as_ptr() as *const c_char, buf, text.len());
        *buf.add(text.len()) = 0;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
