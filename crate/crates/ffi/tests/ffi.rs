use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use pslab_ffi::*;

fn last_error() -> String {
    let p = pslab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn builtin(name: &str) -> *mut PslabCurve {
    let name = CString::new(name).unwrap();
    let mut curve = ptr::null_mut();
    assert_eq!(
        unsafe { pslab_curve_builtin(name.as_ptr(), &mut curve) },
        PslabStatus::Ok
    );
    curve
}

fn surface(name: &str) -> *mut PslabSurface {
    let curve = builtin(name);
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { pslab_surface_new(curve, -3.0, 3.0, &mut s) },
        PslabStatus::Ok
    );
    unsafe { pslab_curve_free(curve) };
    s
}

#[test]
fn builtin_curves_validate() {
    for name in ["veronese-generator", "alpha0"] {
        let curve = builtin(name);
        let mut rep = PslabValidation::default();
        assert_eq!(
            unsafe { pslab_curve_validate(curve, 101, 1e-9, &mut rep) },
            PslabStatus::Ok
        );
        assert_eq!(rep.passed, 1, "{name}");
        assert!(rep.residuals.iter().all(|r| *r < 1e-12));
        unsafe { pslab_curve_free(curve) };
    }
}

#[test]
fn broken_curve_is_rejected_by_surface_new() {
    let spec = CString::new(
        "c1: 2*cos(t)/(3*sqrt3)\nc2: 2*sin(t)/(3*sqrt3)\nc3: cos(2*t)/(3*sqrt3)\n\
         c4: sin(2*t)/(3*sqrt3)\nc5: 1\ndomain: -pi pi\n",
    )
    .unwrap();
    let mut curve = ptr::null_mut();
    assert_eq!(
        unsafe { pslab_curve_from_spec(spec.as_ptr(), &mut curve) },
        PslabStatus::Ok
    );
    let mut rep = PslabValidation::default();
    assert_eq!(
        unsafe { pslab_curve_validate(curve, 101, 1e-9, &mut rep) },
        PslabStatus::Ok
    );
    assert_eq!(rep.passed, 0);
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { pslab_surface_new(curve, -3.0, 3.0, &mut s) },
        PslabStatus::InvalidCurve
    );
    assert!(s.is_null());
    assert!(last_error().contains("validation"));
    unsafe { pslab_curve_free(curve) };
}

#[test]
fn error_codes() {
    let mut curve = ptr::null_mut();
    let bad = CString::new("c1: cos(\n").unwrap();
    assert_eq!(
        unsafe { pslab_curve_from_spec(bad.as_ptr(), &mut curve) },
        PslabStatus::Parse
    );
    assert_eq!(
        unsafe { pslab_curve_from_spec(ptr::null(), &mut curve) },
        PslabStatus::NullPointer
    );
    let name = CString::new("nope").unwrap();
    assert_eq!(
        unsafe { pslab_curve_builtin(name.as_ptr(), &mut curve) },
        PslabStatus::UnknownBuiltin
    );
    assert!(last_error().contains("nope"));
    let invalid = [0xffu8, 0];
    assert_eq!(
        unsafe { pslab_curve_builtin(invalid.as_ptr().cast(), &mut curve) },
        PslabStatus::InvalidUtf8
    );

    let s = surface("alpha0");
    let mut x = [0.0; 5];
    assert_eq!(
        unsafe { pslab_surface_position(s, 0.0, 2.0, x.as_mut_ptr()) },
        PslabStatus::OutsideDomain
    );
    let mut cert = std::mem::MaybeUninit::<PslabCongruence>::uninit();
    assert_eq!(
        unsafe { pslab_surface_congruence_test(s, 0.3, 1.2, 1, 1, 1e-8, cert.as_mut_ptr()) },
        PslabStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { pslab_surface_position(s, 0.0, 0.5, x.as_mut_ptr()) },
        PslabStatus::Ok
    );
    assert!(pslab_last_error().is_null());
    unsafe { pslab_surface_free(s) };
    unsafe { pslab_surface_free(ptr::null_mut()) };
    unsafe { pslab_curve_free(ptr::null_mut()) };
}

#[test]
fn curvature_and_congruence() {
    for (name, congruent) in [("veronese-generator", true), ("alpha0", false)] {
        let s = surface(name);
        let (t0, t1) = if congruent {
            (-1.0, 1.0)
        } else {
            (0.3, std::f64::consts::FRAC_PI_2 - 0.3)
        };
        let mut k = PslabCurvature::default();
        assert_eq!(
            unsafe { pslab_surface_curvature(s, 0.4, 0.6, &mut k) },
            PslabStatus::Ok
        );
        assert!((k.k - 1.0 / 3.0).abs() < 1e-8, "{name}: {k:?}");
        assert!((k.k_normal_abs - 2.0 / 3.0).abs() < 1e-8);
        assert!(k.mean_curvature_max < 1e-8);
        assert!(
            k.gauss_residual
                .max(k.codazzi_residual)
                .max(k.ricci_residual)
                < 1e-8
        );

        let mut cert = std::mem::MaybeUninit::<PslabCongruence>::uninit();
        assert_eq!(
            unsafe { pslab_surface_congruence_test(s, t0, t1, 10, 10, 1e-8, cert.as_mut_ptr()) },
            PslabStatus::Ok
        );
        let cert = unsafe { cert.assume_init() };
        assert_eq!(cert.evaluated, 100);
        assert!(cert.c4_residual < 1e-8);
        let want = if congruent {
            PslabVerdict::VeroneseCongruent
        } else {
            PslabVerdict::NotCongruent
        };
        assert_eq!(cert.verdict, want, "{name}");
        unsafe { pslab_surface_free(s) };
    }

    let s = surface("alpha0");
    let (mut c, mut c4) = (0.0, 0.0);
    let st = unsafe {
        pslab_surface_congruence_coefficient(s, 0.0, std::f64::consts::FRAC_PI_4, &mut c, &mut c4)
    };
    assert_eq!(st, PslabStatus::Ok);
    assert!((c + 69.72).abs() < 1e-9, "{c}");
    assert!((c4 + 2.0 / 3.0).abs() < 1e-9);
    unsafe { pslab_surface_free(s) };
}

/// Compiles `tests/c/smoke.c` against the generated header and the static
/// library, then runs it.
#[test]
fn c_program_links_against_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .and_then(|d| d.parent())
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libpslab_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pslab_smoke");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status();
    let Ok(status) = status else {
        eprintln!("skipping: no C compiler ({cc})");
        return;
    };
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        out.status.success(),
        "{stdout}{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let f: Vec<&str> = stdout.split_whitespace().collect();
    assert_eq!(f[0], env!("CARGO_PKG_VERSION"));
    let num = |i: usize| f[i].parse::<f64>().unwrap();
    assert!(num(1) < 1e-12);
    assert!((num(2) - 1.0 / 3.0).abs() < 1e-9);
    assert!((num(3) - 2.0 / 3.0).abs() < 1e-9);
    assert!((num(4) + 69.72).abs() < 1e-5);
    assert!((num(5) + 2.0 / 3.0).abs() < 1e-6);
    assert_eq!(f[6], "1");
}
