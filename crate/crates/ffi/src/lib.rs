//! C ABI for `pslab-core`.
//!
//! Curves and surfaces are opaque handles created by `pslab_*_new`-style
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`PslabStatus`]; on failure the message is available from
//! [`pslab_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pslab_core::classifier::{veronese_congruence_test, TheoremSurface, Verdict};
use pslab_core::curve::{validate_theorem_curve, NullCurve};
use pslab_core::surface::{LocalGeometry, Rect, SurfacePatch, DEFAULT_SURFACE_ORDER};
use pslab_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PslabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnknownBuiltin = 4,
    InvalidCurve = 5,
    InvalidArgument = 6,
    OutsideDomain = 7,
    Degenerate = 8,
    Numeric = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PslabVerdict {
    VeroneseCongruent = 0,
    NotCongruent = 1,
    Inconclusive = 2,
}

/// Opaque null curve in the light cone.
pub struct PslabCurve(NullCurve);

/// Opaque surface built from a validated null curve.
pub struct PslabSurface(TheoremSurface);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PslabValidation {
    pub passed: c_int,
    /// `|<a,a>|`, `|<a',a'>|`, `|<a'',a''> - 4/9|` (scale-relative maxima).
    pub residuals: [f64; 3],
    pub worst_t: [f64; 3],
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PslabCurvature {
    pub k: f64,
    pub k_normal: f64,
    pub k_normal_abs: f64,
    pub mean_curvature_max: f64,
    pub sphere_residual: f64,
    pub gauss_residual: f64,
    pub codazzi_residual: f64,
    pub ricci_residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PslabCongruence {
    pub verdict: PslabVerdict,
    pub max_abs_c: f64,
    pub worst_s: f64,
    pub worst_t: f64,
    pub c4_residual: f64,
    pub evaluated: usize,
    pub failures: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PslabStatus {
    match e {
        Error::Parse { .. } | Error::CurveSpec { .. } => PslabStatus::Parse,
        Error::UnknownBuiltin(_) => PslabStatus::UnknownBuiltin,
        Error::InvalidCurve(_) => PslabStatus::InvalidCurve,
        Error::InvalidArgument(_) | Error::DimensionMismatch { .. } | Error::OrderTooLow { .. } => {
            PslabStatus::InvalidArgument
        }
        Error::OutsideDomain { .. } => PslabStatus::OutsideDomain,
        Error::DegenerateTangent { .. } | Error::NotPseudoOrthonormal { .. } => {
            PslabStatus::Degenerate
        }
        _ => PslabStatus::Numeric,
    }
}

struct Fail(PslabStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PslabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PslabStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            PslabStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(PslabStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut()
        .ok_or_else(|| Fail(PslabStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(PslabStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(PslabStatus::InvalidUtf8, format!("{what}: {e}")))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next `pslab_*` call on the same thread.
#[no_mangle]
pub extern "C" fn pslab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pslab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a curve spec (`c1:` .. `c5:`, `domain:`, optional `label:`).
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out_curve` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pslab_curve_from_spec(
    spec: *const c_char,
    out_curve: *mut *mut PslabCurve,
) -> PslabStatus {
    guard(|| {
        let slot = out(out_curve, "out_curve")?;
        let curve = NullCurve::from_spec(text(spec, "spec")?)?;
        *slot = Box::into_raw(Box::new(PslabCurve(curve)));
        Ok(())
    })
}

/// Loads a builtin curve by name (`veronese-generator`, `alpha0`).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out_curve` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pslab_curve_builtin(
    name: *const c_char,
    out_curve: *mut *mut PslabCurve,
) -> PslabStatus {
    guard(|| {
        let slot = out(out_curve, "out_curve")?;
        let curve = NullCurve::builtin(text(name, "name")?)?;
        *slot = Box::into_raw(Box::new(PslabCurve(curve)));
        Ok(())
    })
}

/// Checks the null-curve constraints at `samples` points. A curve that fails
/// the constraints still returns `PSLAB_STATUS_OK` with `passed == 0`.
///
/// # Safety
/// `curve` must come from this library; `out_report` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pslab_curve_validate(
    curve: *const PslabCurve,
    samples: usize,
    tol: f64,
    out_report: *mut PslabValidation,
) -> PslabStatus {
    guard(|| {
        let curve = deref(curve, "curve")?;
        let slot = out(out_report, "out_report")?;
        let rep = validate_theorem_curve(&curve.0, samples, tol)?;
        *slot = PslabValidation {
            passed: rep.passed as c_int,
            residuals: rep.constraints.clone().map(|r| r.max),
            worst_t: rep.constraints.map(|r| r.worst_t),
        };
        Ok(())
    })
}

/// # Safety
/// `curve` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pslab_curve_free(curve: *mut PslabCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Builds the surface of a curve over `s_min < s < s_max`. The curve is
/// validated first and may be freed afterwards.
///
/// # Safety
/// `curve` must come from this library; `out_surface` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pslab_surface_new(
    curve: *const PslabCurve,
    s_min: f64,
    s_max: f64,
    out_surface: *mut *mut PslabSurface,
) -> PslabStatus {
    guard(|| {
        let curve = deref(curve, "curve")?;
        let slot = out(out_surface, "out_surface")?;
        let ts = TheoremSurface::build(curve.0.clone(), (s_min, s_max))?;
        *slot = Box::into_raw(Box::new(PslabSurface(ts)));
        Ok(())
    })
}

/// Writes the point `x(s, t)` of E^5_2 to `out_xyz[0..5]`.
///
/// # Safety
/// `surface` must come from this library; `out_xyz` must hold 5 doubles.
#[no_mangle]
pub unsafe extern "C" fn pslab_surface_position(
    surface: *const PslabSurface,
    s: f64,
    t: f64,
    out_xyz: *mut f64,
) -> PslabStatus {
    guard(|| {
        let ts = deref(surface, "surface")?;
        if out_xyz.is_null() {
            return Err(Fail(PslabStatus::NullPointer, "out is null".into()));
        }
        let x = ts.0.position(s, t)?;
        std::slice::from_raw_parts_mut(out_xyz, 5).copy_from_slice(&x);
        Ok(())
    })
}

/// Curvatures and fundamental-equation residuals at `(s, t)`.
///
/// # Safety
/// `surface` must come from this library; `out_report` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pslab_surface_curvature(
    surface: *const PslabSurface,
    s: f64,
    t: f64,
    out_report: *mut PslabCurvature,
) -> PslabStatus {
    guard(|| {
        let ts = deref(surface, "surface")?;
        let slot = out(out_report, "out_report")?;
        let r = LocalGeometry::new(&ts.0, s, t, DEFAULT_SURFACE_ORDER)?.report();
        *slot = PslabCurvature {
            k: r.k,
            k_normal: r.k_normal,
            k_normal_abs: r.k_normal_abs,
            mean_curvature_max: r.mean_curvature_max,
            sphere_residual: r.sphere,
            gauss_residual: r.residuals.gauss,
            codazzi_residual: r.residuals.codazzi,
            ricci_residual: r.residuals.ricci,
        };
        Ok(())
    })
}

/// The f3- and f4-coefficients `c`, `c4` of h(f2~, f2~) in the canonical
/// frame; the surface is congruent to the Veronese surface iff `c` vanishes.
///
/// # Safety
/// `surface` must come from this library; `c` and `c4` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pslab_surface_congruence_coefficient(
    surface: *const PslabSurface,
    s: f64,
    t: f64,
    c: *mut f64,
    c4: *mut f64,
) -> PslabStatus {
    guard(|| {
        let ts = deref(surface, "surface")?;
        let (c_out, c4_out) = (out(c, "c")?, out(c4, "c4")?);
        (*c_out, *c4_out) = ts.0.congruence_coefficients(s, t)?;
        Ok(())
    })
}

/// Grid test of the congruence coefficient over the surface's s-range and
/// `t_min <= t <= t_max`.
///
/// # Safety
/// `surface` must come from this library; `out_result` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pslab_surface_congruence_test(
    surface: *const PslabSurface,
    t_min: f64,
    t_max: f64,
    ns: usize,
    nt: usize,
    tol: f64,
    out_result: *mut PslabCongruence,
) -> PslabStatus {
    guard(|| {
        let ts = deref(surface, "surface")?;
        let slot = out(out_result, "out_result")?;
        let rect = Rect::new(ts.0.s_range(), (t_min, t_max));
        let cert = veronese_congruence_test(&ts.0, rect, (ns, nt), tol)?;
        let (worst_s, worst_t) = cert.worst_point.unwrap_or((f64::NAN, f64::NAN));
        *slot = PslabCongruence {
            verdict: match cert.verdict {
                Verdict::VeroneseCongruent => PslabVerdict::VeroneseCongruent,
                Verdict::NotCongruent => PslabVerdict::NotCongruent,
                Verdict::Inconclusive => PslabVerdict::Inconclusive,
            },
            max_abs_c: cert.max_abs_c,
            worst_s,
            worst_t,
            c4_residual: cert.c4_residual,
            evaluated: cert.evaluated,
            failures: cert.failures.len(),
        };
        Ok(())
    })
}

/// # Safety
/// `surface` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pslab_surface_free(surface: *mut PslabSurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}
