use super::*;
use crate::curve::NullCurve;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

fn surface(name: &str) -> TheoremSurface {
    TheoremSurface::build(NullCurve::builtin(name).unwrap(), DEFAULT_S_RANGE).unwrap()
}

fn alpha0_interior() -> Rect {
    Rect::new(DEFAULT_S_RANGE, (0.3, FRAC_PI_2 - 0.3))
}

fn closed_form(s: f64, t: f64) -> V5 {
    let k = 1.0 / (6.0 * 3f64.sqrt());
    [
        k * 2.0 * s * (s * t.cos() - 3.0 * t.sin()),
        k * 2.0 * s * (s * t.sin() + 3.0 * t.cos()),
        k * ((s * s - 9.0) * (2.0 * t).cos() - 6.0 * s * (2.0 * t).sin()),
        k * ((s * s - 9.0) * (2.0 * t).sin() + 6.0 * s * (2.0 * t).cos()),
        k * 3f64.sqrt() * (s * s + 3.0),
    ]
}

fn alpha0_coefficient(t: f64) -> f64 {
    let (sn, cs) = (t.sin(), t.cos());
    21.0 / 800.0 * (-180.0 * (2.0 * t).cos() + 45.0 * (4.0 * t).cos() - 121.0)
        / (sn.powi(4) * cs.powi(4))
}

#[test]
fn circle_surface_matches_closed_form() {
    let ts = surface("veronese-generator");
    let x = ts.position(0.0, 0.0).unwrap();
    let want = [0.0, 0.0, -0.5 * 3f64.sqrt(), 0.0, 0.5];
    assert!(max_abs(&crate::surface::diff(&x, &want)) < 1e-15);
    for (s, t) in Rect::new((-3.0, 3.0), (-3.0, 3.0)).grid(10, 10) {
        let x = ts.position(s, t).unwrap();
        assert!(max_abs(&crate::surface::diff(&x, &closed_form(s, t))) < 1e-12);
        assert!((crate::surface::ip(&x, &x) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn invalid_curve_is_rejected() {
    let spec = NullCurve::builtin("veronese-generator").unwrap().to_spec();
    let broken = spec.replace("c5: sqrt3 / (3 * sqrt3)", "c5: 1");
    assert_ne!(spec, broken);
    let curve = NullCurve::from_spec(&broken).unwrap();
    let err = TheoremSurface::build(curve, DEFAULT_S_RANGE).unwrap_err();
    assert!(
        matches!(err, Error::InvalidCurve(ref m) if m.contains("light_cone")),
        "{err}"
    );
    assert!(TheoremSurface::unchecked(NullCurve::builtin("alpha0").unwrap(), (1.0, 1.0)).is_err());
}

#[test]
fn metric_normal_form() {
    for (name, rect) in [
        ("veronese-generator", surface("veronese-generator").domain()),
        ("alpha0", alpha0_interior()),
    ] {
        let ts = surface(name);
        for (s, t) in rect.grid(6, 6) {
            let g = LocalGeometry::new(&ts, s, t, 3).unwrap().metric();
            assert!(g.g_ss.abs() < 1e-11, "{name} {s} {t}");
            assert!((g.g_st + 1.0).abs() < 1e-11);
            assert!(ts.metric_form_residual(s, t, &g).unwrap() < 1e-9);
        }
    }
}

#[test]
fn canonical_frame_is_pseudo_orthonormal() {
    let f = surface("veronese-generator")
        .canonical_frame(0.0, 0.0)
        .unwrap();
    assert!(f.gram_residual < 1e-10 && f.position_residual < 1e-10);
    let f = surface("alpha0").canonical_frame(0.0, FRAC_PI_4).unwrap();
    assert!(f.gram_residual < 1e-8 && f.position_residual < 1e-8);
    assert_eq!(f.vectors()[2], f.f3);
}

#[test]
fn connection_forms_follow_the_linear_pattern() {
    for name in ["veronese-generator", "alpha0"] {
        let w = surface(name).connection_forms(1.5, 0.4).unwrap();
        assert!((w.psi(2) + 1.0).abs() < 1e-7, "{name}");
        assert!((w.phi(2) + 0.5).abs() < 1e-7);
        assert!(w.get(1, 4, 1).abs() < 1e-7 && w.get(1, 4, 2).abs() < 1e-7);
        assert!((w.get(2, 4, 2) + 2.0 / 3.0).abs() < 1e-7);
    }
}

#[test]
fn frame_identities_hold() {
    for (name, rect) in [
        ("veronese-generator", surface("veronese-generator").domain()),
        ("alpha0", alpha0_interior()),
    ] {
        let ts = surface(name);
        for (s, t) in rect.grid(5, 5) {
            let c = frame_checks(&ts, s, t).unwrap();
            assert!(c.h11_is_f3 < 1e-9 && c.h12_is_x < 1e-9, "{name} {c:?}");
            assert!(c.h11_null < 1e-10);
            assert!(
                c.normal_connection < 1e-8 && c.levi_civita < 1e-8,
                "{name} {c:?}"
            );
            assert!(c.connection < 1e-7);
        }
    }
}

#[test]
fn congruence_coefficient_values() {
    let circle = surface("veronese-generator");
    let a0 = surface("alpha0");
    for &(s, t) in &[(0.0, 0.0), (1.0, 2.0), (-2.5, -1.0)] {
        let (c, c4) = circle.congruence_coefficients(s, t).unwrap();
        assert!(c.abs() < 1e-9 && (c4 + 2.0 / 3.0).abs() < 1e-9);
    }
    let (c, c4) = a0.congruence_coefficients(0.0, FRAC_PI_4).unwrap();
    assert!((c + 69.72).abs() < 1e-6, "{c}");
    assert!((c4 + 2.0 / 3.0).abs() < 1e-9);
    for i in 0..10 {
        let t = 0.3 + (FRAC_PI_2 - 0.6) * (i as f64 + 0.5) / 10.0;
        let c = a0.congruence_coefficient(0.0, t).unwrap();
        let want = alpha0_coefficient(t);
        assert!(((c - want) / want).abs() < 1e-6, "t = {t}: {c} vs {want}");
    }
}

#[test]
fn congruence_verdicts() {
    let circle = surface("veronese-generator");
    let cert = veronese_congruence_test(&circle, circle.domain(), (10, 10), 1e-8).unwrap();
    assert_eq!(cert.verdict, Verdict::VeroneseCongruent);
    assert_eq!(cert.evaluated, 100);
    assert!(cert.c4_residual < 1e-9);

    let a0 = surface("alpha0");
    let cert = veronese_congruence_test(&a0, alpha0_interior(), (10, 10), 1e-8).unwrap();
    assert_eq!(cert.verdict, Verdict::NotCongruent);
    assert!(cert.max_abs_c > 69.0);

    let strip = Rect::new(DEFAULT_S_RANGE, (0.0, 0.01));
    let cert = veronese_congruence_test(&a0, strip, (10, 10), 1e-8).unwrap();
    assert_eq!(cert.verdict, Verdict::Inconclusive);
    assert!(!cert.failures.is_empty());

    assert!(veronese_congruence_test(&a0, alpha0_interior(), (2, 2), 1e-8).is_err());
    assert_eq!(Verdict::NotCongruent.as_str(), "not-congruent");
}

#[test]
fn veronese_reference_frame_orientation() {
    let p = veronese_patch();
    for (s, t) in p.domain().grid(5, 5) {
        let g = LocalGeometry::new(&p, s, t, DEFAULT_SURFACE_ORDER).unwrap();
        let f = veronese_reference_frame(&g);
        let kd = g.normal_curvature_orthonormal(&f).unwrap();
        assert!((kd - VERONESE_KD).abs() < 1e-8);
        assert!((g.normal_curvature() - VERONESE_KD).abs() < 1e-8);
    }
}

#[test]
fn classification_of_builtins() {
    let p = veronese_patch();
    let expect = Expectations {
        k_normal: Some(VERONESE_KD),
        ..Expectations::default()
    };
    let rep = classification_report(&p, p.domain(), (8, 8), 1e-8, expect).unwrap();
    assert!(rep.passed(), "{:?}", rep.violations);
    assert!(rep.metric_form.is_none());

    let circle = surface("veronese-generator");
    let rep = classification_report(
        &circle,
        circle.domain(),
        (8, 8),
        1e-8,
        Expectations::default(),
    )
    .unwrap();
    assert!(rep.passed() && rep.minimal(), "{:?}", rep.violations);
    assert!(rep.metric_form.unwrap().max < 1e-9);
    assert!(rep.k_std < 1e-8 && rep.k_normal_std < 1e-8);

    let a0 = surface("alpha0");
    let rep = classification_report(
        &a0,
        alpha0_interior(),
        (8, 8),
        1e-7,
        Expectations::default(),
    )
    .unwrap();
    assert!(rep.passed(), "{:?}", rep.violations);
}

#[test]
fn classification_reports_violations() {
    let p = crate::surface::ProductPatch::new(0.6).unwrap();
    let rep = classification_report(&p, p.domain(), (5, 5), 1e-8, Expectations::default()).unwrap();
    assert!(!rep.passed() && !rep.minimal());
    assert!(rep.violations.iter().any(|v| v.check == "mean-curvature"));
    assert!(rep
        .violations
        .iter()
        .any(|v| v.check == "gaussian-curvature"));
}

mod properties {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn builtin(name: &str) -> &'static TheoremSurface {
        static CIRCLE: OnceLock<TheoremSurface> = OnceLock::new();
        static ALPHA0: OnceLock<TheoremSurface> = OnceLock::new();
        let cell = if name == "alpha0" { &ALPHA0 } else { &CIRCLE };
        cell.get_or_init(|| surface(name))
    }

    fn point() -> impl Strategy<Value = (&'static str, f64, f64)> {
        prop_oneof![
            (-3.0f64..3.0, -3.1f64..3.1).prop_map(|(s, t)| ("veronese-generator", s, t)),
            (-3.0f64..3.0, 0.3f64..FRAC_PI_2 - 0.3).prop_map(|(s, t)| ("alpha0", s, t)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn metric_normal_form_at_random_points((name, s, t) in point()) {
            let ts = builtin(name);
            let g = LocalGeometry::new(ts, s, t, 3).unwrap().metric();
            prop_assert!(g.g_ss.abs() < 1e-11);
            prop_assert!((g.g_st + 1.0).abs() < 1e-11);
            let m = ts.m_tilde(s, t).unwrap();
            prop_assert!((g.g_tt - 2.0 * m).abs() < 1e-9, "{} {} {}", name, s, t);
        }

        #[test]
        fn frame_identities_at_random_points((name, s, t) in point()) {
            let ts = builtin(name);
            let f = ts.canonical_frame(s, t).unwrap();
            prop_assert!(f.gram_residual < 1e-12 && f.position_residual < 1e-12, "{:?}", f);
            let scale = f.f4.iter().map(|v| v * v).sum::<f64>().max(1.0);
            prop_assert!(f.gram_residual_abs < 1e-12 * scale);
            let c = frame_checks(ts, s, t).unwrap();
            prop_assert!(c.h11_is_f3 < 1e-9 && c.h12_is_x < 1e-9, "{:?}", c);
            prop_assert!(c.h11_null < 1e-10);
            prop_assert!(c.normal_connection < 1e-8 && c.levi_civita < 1e-8, "{:?}", c);
        }
    }
}
