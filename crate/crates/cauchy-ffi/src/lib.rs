//! C ABI for the cauchy-core library.
//!
//! Handles are opaque pointers created and destroyed here; every function
//! returns a [`CauchyStatus`] and writes results through out-pointers.
//! On failure the per-thread message from [`cauchy_last_error_message`]
//! describes what went wrong. Strings returned through out-pointers are
//! owned by the caller and must be released with [`cauchy_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cauchy_core::boundary::BoundaryFunction;
use cauchy_core::domain::AnalyticDomain;
use cauchy_core::error::Error;
use cauchy_core::kernel::KernelExpansion;
use cauchy_core::operator::SeriesOperator;
use cauchy_core::verify::Tolerances;
use num_complex::Complex64;

/// Status codes for every FFI entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CauchyStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    ConfigError = 4,
    SizeError = 5,
    NotConformal = 6,
    NotInjective = 7,
    BoundaryNotAnalytic = 8,
    InversionDiverged = 9,
    NearBoundary = 10,
    KernelSingular = 11,
    RadiiError = 12,
    ProvenanceMismatch = 13,
    ToleranceBreach = 14,
    InternalError = 15,
}

/// Opaque handle to a validated analytic domain.
pub struct CauchyDomain(AnalyticDomain);

/// Opaque handle to an extracted kernel expansion.
pub struct CauchyExpansion(KernelExpansion);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_for(err: &Error) -> CauchyStatus {
    match err {
        Error::Config(_) => CauchyStatus::ConfigError,
        Error::Json(_) => CauchyStatus::InvalidJson,
        Error::SizeError(_) => CauchyStatus::SizeError,
        Error::NotConformal { .. } => CauchyStatus::NotConformal,
        Error::NotInjective { .. } => CauchyStatus::NotInjective,
        Error::BoundaryNotAnalytic(_) => CauchyStatus::BoundaryNotAnalytic,
        Error::InversionDiverged { .. } => CauchyStatus::InversionDiverged,
        Error::NearBoundary { .. } => CauchyStatus::NearBoundary,
        Error::KernelSingular => CauchyStatus::KernelSingular,
        Error::RadiiError { .. } => CauchyStatus::RadiiError,
        Error::ProvenanceMismatch => CauchyStatus::ProvenanceMismatch,
        _ => CauchyStatus::InternalError,
    }
}

fn fail(err: &Error) -> CauchyStatus {
    set_error(&err.to_string());
    status_for(err)
}

/// Runs a closure, converting panics into `InternalError` instead of
/// unwinding across the ABI boundary.
fn guarded(f: impl FnOnce() -> CauchyStatus) -> CauchyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            CauchyStatus::InternalError
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, CauchyStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(CauchyStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        CauchyStatus::InvalidUtf8
    })
}

fn write_string(out: *mut *mut c_char, text: String) -> CauchyStatus {
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            CauchyStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            CauchyStatus::InternalError
        }
    }
}

/// Version string of the underlying library (static storage, do not free).
#[no_mangle]
pub extern "C" fn cauchy_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cauchy_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned through an out-pointer.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cauchy_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a domain from spec JSON:
/// `{ "name": ..., "psi": [[re,im],...], "R": number|null }`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cauchy_domain_from_json(
    json: *const c_char,
    out: *mut *mut CauchyDomain,
) -> CauchyStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null out pointer");
            return CauchyStatus::NullArgument;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let spec: cauchy_core::DomainSpec = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(e) => {
                set_error(&format!("bad domain JSON: {e}"));
                return CauchyStatus::InvalidJson;
            }
        };
        match spec.build() {
            Ok(dom) => {
                *out = Box::into_raw(Box::new(CauchyDomain(dom)));
                CauchyStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Builds a shipped preset domain by name (`disk`,
/// `perturbed-disk[-eps]`, `cubic-blob[-eps]`).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cauchy_domain_preset(
    name: *const c_char,
    out: *mut *mut CauchyDomain,
) -> CauchyStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null out pointer");
            return CauchyStatus::NullArgument;
        }
        let name = match read_str(name) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match cauchy_core::preset(name) {
            Ok(Some(dom)) => {
                *out = Box::into_raw(Box::new(CauchyDomain(dom)));
                CauchyStatus::Ok
            }
            Ok(None) => {
                set_error(&format!("unknown preset {name:?}"));
                CauchyStatus::ConfigError
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a domain handle.
///
/// # Safety
/// `dom` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cauchy_domain_free(dom: *mut CauchyDomain) {
    if !dom.is_null() {
        drop(Box::from_raw(dom));
    }
}

/// Certified radius of analyticity and injectivity.
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cauchy_domain_radius(
    dom: *const CauchyDomain,
    out: *mut f64,
) -> CauchyStatus {
    if dom.is_null() || out.is_null() {
        set_error("null argument");
        return CauchyStatus::NullArgument;
    }
    *out = (*dom).0.radius();
    CauchyStatus::Ok
}

/// Conformality/injectivity evidence as a JSON document. `r_check <= 0`
/// uses the certified radius.
///
/// # Safety
/// `dom` and `out_json` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cauchy_domain_validate_json(
    dom: *const CauchyDomain,
    r_check: f64,
    out_json: *mut *mut c_char,
) -> CauchyStatus {
    guarded(|| {
        if dom.is_null() || out_json.is_null() {
            set_error("null argument");
            return CauchyStatus::NullArgument;
        }
        let domain = &(*dom).0;
        let radius = if r_check > 0.0 { r_check } else { domain.radius() };
        match cauchy_core::validate_conformal(domain.psi(), radius) {
            Ok(report) => match serde_json::to_string_pretty(&report) {
                Ok(text) => write_string(out_json, text),
                Err(e) => fail(&Error::Json(e)),
            },
            Err(e) => fail(&e),
        }
    })
}

/// Extracts kernel coefficients. `m < 0` selects the automatic
/// tail-driven truncation; `grid_n = 0` selects the matching default
/// grid. Explicit values use the default contour radii.
///
/// # Safety
/// `dom` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cauchy_expansion_compute(
    dom: *const CauchyDomain,
    m: i64,
    grid_n: u64,
    out: *mut *mut CauchyExpansion,
) -> CauchyStatus {
    guarded(|| {
        if dom.is_null() || out.is_null() {
            set_error("null argument");
            return CauchyStatus::NullArgument;
        }
        let domain = &(*dom).0;
        let result = if m < 0 {
            cauchy_core::kernel_coefficients_auto(domain)
        } else {
            let truncation = m as usize;
            let grid = if grid_n == 0 {
                cauchy_core::kernel::auto_grid(truncation)
            } else {
                grid_n as usize
            };
            cauchy_core::domain::RadiiPair::default_for(domain.radius())
                .and_then(|radii| cauchy_core::kernel_coefficients(domain, &radii, truncation, grid))
        };
        match result {
            Ok(exp) => {
                *out = Box::into_raw(Box::new(CauchyExpansion(exp)));
                CauchyStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases an expansion handle.
///
/// # Safety
/// `exp` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cauchy_expansion_free(exp: *mut CauchyExpansion) {
    if !exp.is_null() {
        drop(Box::from_raw(exp));
    }
}

/// Truncation degree M of the expansion.
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cauchy_expansion_truncation(
    exp: *const CauchyExpansion,
    out: *mut u64,
) -> CauchyStatus {
    if exp.is_null() || out.is_null() {
        set_error("null argument");
        return CauchyStatus::NullArgument;
    }
    *out = (*exp).0.truncation() as u64;
    CauchyStatus::Ok
}

/// Coefficient `a_mn` of the expansion.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cauchy_expansion_coefficient(
    exp: *const CauchyExpansion,
    m: u64,
    n: u64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> CauchyStatus {
    if exp.is_null() || out_re.is_null() || out_im.is_null() {
        set_error("null argument");
        return CauchyStatus::NullArgument;
    }
    let expansion = &(*exp).0;
    if m as usize > expansion.truncation() || n as usize > expansion.truncation() {
        set_error(&format!(
            "index ({m},{n}) outside the truncation square of side {}",
            expansion.truncation() + 1
        ));
        return CauchyStatus::SizeError;
    }
    let a = expansion.coefficient(m as usize, n as usize);
    *out_re = a.re;
    *out_im = a.im;
    CauchyStatus::Ok
}

/// Norm-bound data: the sampled kernel sup, the contour radii, the
/// absolute coefficient sum, the geometric tail bound, and their total —
/// the upper bound for the operator norm. Null out-pointers are skipped.
///
/// # Safety
/// `exp` must be valid; out-pointers must each be valid or null.
#[no_mangle]
pub unsafe extern "C" fn cauchy_expansion_bounds(
    exp: *const CauchyExpansion,
    out_sup_h: *mut f64,
    out_r: *mut f64,
    out_s: *mut f64,
    out_abs_sum: *mut f64,
    out_tail_bound: *mut f64,
    out_norm_upper: *mut f64,
) -> CauchyStatus {
    if exp.is_null() {
        set_error("null expansion");
        return CauchyStatus::NullArgument;
    }
    let e = &(*exp).0;
    let write = |ptr: *mut f64, value: f64| {
        if !ptr.is_null() {
            *ptr = value;
        }
    };
    write(out_sup_h, e.sup_h);
    write(out_r, e.radii.r);
    write(out_s, e.radii.s);
    write(out_abs_sum, e.abs_sum);
    write(out_tail_bound, e.tail_bound);
    write(out_norm_upper, e.norm_upper());
    CauchyStatus::Ok
}

/// Applies the series operator to boundary samples on the unit circle
/// (`n_samples` a power of two, at least 8) and writes the Taylor
/// coefficients of the Hardy-space image. `capacity` is the room
/// available in `out_re`/`out_im`; the full coefficient count
/// (`n_samples/2 + M`) is stored in `written` and the leading
/// `min(capacity, written)` coefficients are copied.
///
/// # Safety
/// Arrays must match the stated lengths; all pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cauchy_apply(
    dom: *const CauchyDomain,
    exp: *const CauchyExpansion,
    in_re: *const f64,
    in_im: *const f64,
    n_samples: usize,
    out_re: *mut f64,
    out_im: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> CauchyStatus {
    guarded(|| {
        if dom.is_null()
            || exp.is_null()
            || in_re.is_null()
            || in_im.is_null()
            || out_re.is_null()
            || out_im.is_null()
            || written.is_null()
        {
            set_error("null argument");
            return CauchyStatus::NullArgument;
        }
        let re = std::slice::from_raw_parts(in_re, n_samples);
        let im = std::slice::from_raw_parts(in_im, n_samples);
        let samples: Vec<Complex64> =
            re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let f = match BoundaryFunction::new(samples) {
            Ok(f) => f,
            Err(e) => return fail(&e),
        };
        let op = match SeriesOperator::new((*dom).0.clone(), (*exp).0.clone()) {
            Ok(op) => op,
            Err(e) => return fail(&e),
        };
        let result = op.apply(&f);
        let taylor = result.taylor();
        *written = taylor.len();
        let out_re = std::slice::from_raw_parts_mut(out_re, capacity);
        let out_im = std::slice::from_raw_parts_mut(out_im, capacity);
        for (k, c) in taylor.iter().take(capacity).enumerate() {
            out_re[k] = c.re;
            out_im[k] = c.im;
        }
        CauchyStatus::Ok
    })
}

/// Runs the full verification pipeline and returns the report JSON.
/// Returns `ToleranceBreach` (with the JSON still written) when any
/// suite fails its tolerance.
///
/// # Safety
/// `dom` and `out_json` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cauchy_report_json(
    dom: *const CauchyDomain,
    seed: u64,
    out_json: *mut *mut c_char,
) -> CauchyStatus {
    guarded(|| {
        if dom.is_null() || out_json.is_null() {
            set_error("null argument");
            return CauchyStatus::NullArgument;
        }
        match cauchy_core::report::run_pipeline(&(*dom).0, seed, &Tolerances::default()) {
            Ok(report) => {
                let pass = report.pass;
                match serde_json::to_string_pretty(&report) {
                    Ok(text) => {
                        let status = write_string(out_json, text);
                        if status == CauchyStatus::Ok && !pass {
                            set_error("one or more verification suites breached tolerance");
                            return CauchyStatus::ToleranceBreach;
                        }
                        status
                    }
                    Err(e) => fail(&Error::Json(e)),
                }
            }
            Err(e) => fail(&e),
        }
    })
}
