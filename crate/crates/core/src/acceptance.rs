//! The end-to-end acceptance suite run by `pslab selftest` and the
//! `acceptance` integration test.

use std::f64::consts::FRAC_PI_2;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifier::{
    classification_report, frame_checks, veronese_congruence_test, veronese_patch,
    veronese_reference_frame, Expectations, TheoremSurface, Verdict, CONNECTION_FORM_CURVE_ORDER,
    DEFAULT_S_RANGE, VERONESE_KD,
};
use crate::curve::{NullCurve, BUILTIN_CURVES, DEFAULT_MARGIN};
use crate::error::Result;
use crate::jet::{fd_crosscheck, fd_step, JetFunction};
use crate::surface::{LocalGeometry, Rect, SurfacePatch, DEFAULT_SURFACE_ORDER};

pub const CRITERIA: usize = 8;

/// Well-conditioned part of the α₀ domain used for surface-level checks.
pub const ALPHA0_INTERIOR: (f64, f64) = (0.3, FRAC_PI_2 - 0.3);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptanceConfig {
    /// Tolerance for the curvature constants of criteria 1 and 2.
    pub tol_geom: f64,
    pub tol_cong: f64,
    pub jet_order: usize,
    pub seed: u64,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            tol_geom: 1e-8,
            tol_cong: 1e-8,
            jet_order: 6,
            seed: 20_240_229,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub status: Status,
    /// Largest residual relevant to the criterion.
    pub max_residual: f64,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    /// `PASS [1] veronese-constants: ...`
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        format!(
            "{tag} [{}] {}: {} ({:.2} s)",
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

pub const NAMES: [&str; CRITERIA] = [
    "veronese-constants",
    "minimal-constants",
    "closed-form-surface",
    "congruence-discrimination",
    "canonical-frame-connection",
    "fundamental-equations",
    "jet-vs-finite-differences",
    "null-h11-instance",
];

/// Theorem surface of a builtin curve and the grid rectangle its surface
/// checks use.
pub fn builtin_surface(name: &str) -> Result<(TheoremSurface, Rect)> {
    let ts = TheoremSurface::build(NullCurve::builtin(name)?, DEFAULT_S_RANGE)?;
    let rect = interior_rect(&ts, name);
    Ok((ts, rect))
}

pub fn interior_rect(ts: &TheoremSurface, name: &str) -> Rect {
    if name == "alpha0" {
        Rect::new(ts.s_range(), ALPHA0_INTERIOR)
    } else {
        ts.rect_with_margin(DEFAULT_MARGIN)
    }
}

/// Random points for the finite-difference comparison keep this distance from
/// the ends of the curve domain.
pub const FD_CLEARANCE: f64 = 0.3;

struct Outcome {
    ok: bool,
    max: f64,
    detail: String,
    skipped: bool,
}

impl Outcome {
    fn new(ok: bool, max: f64, detail: String) -> Self {
        Outcome {
            ok,
            max,
            detail,
            skipped: false,
        }
    }
}

pub fn run_criterion(id: usize, cfg: &AcceptanceConfig) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => veronese_constants(cfg),
        2 => minimal_constants(cfg),
        3 => closed_form(),
        4 => congruence(cfg),
        5 => connection(cfg),
        6 => fundamental(),
        7 => jets_vs_fd(cfg),
        8 => null_h11_instance(),
        _ => Ok(Outcome::new(false, f64::NAN, format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let outcome = outcome.unwrap_or_else(|e| Outcome::new(false, f64::NAN, format!("error: {e}")));
    let budget = match id {
        1 => Some(10.0),
        2 => Some(30.0),
        _ => None,
    };
    let mut detail = outcome.detail;
    let mut ok = outcome.ok;
    if let Some(b) = budget {
        if elapsed.as_secs_f64() >= b {
            ok = false;
            detail.push_str(&format!("; over the {b} s budget"));
        }
    }
    let status = if outcome.skipped {
        Status::Skipped
    } else if ok {
        Status::Pass
    } else {
        Status::Fail
    };
    CriterionResult {
        id,
        name: NAMES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        status,
        max_residual: outcome.max,
        detail,
        elapsed,
    }
}

pub fn run_all(cfg: &AcceptanceConfig) -> Vec<CriterionResult> {
    (1..=CRITERIA).map(|id| run_criterion(id, cfg)).collect()
}

fn veronese_constants(cfg: &AcceptanceConfig) -> Result<Outcome> {
    let p = veronese_patch();
    let expect = Expectations {
        k_normal: Some(VERONESE_KD),
        ..Expectations::default()
    };
    let rep = classification_report(&p, p.domain(), (20, 20), cfg.tol_geom, expect)?;
    let mut reference: f64 = 0.0;
    for (s, t) in p.domain().grid(20, 20) {
        let g = LocalGeometry::new(&p, s, t, DEFAULT_SURFACE_ORDER)?;
        let kd = g.normal_curvature_orthonormal(&veronese_reference_frame(&g))?;
        reference = reference.max((kd - VERONESE_KD).abs());
    }
    let k = rep.k_deviation.max;
    let kd = rep.k_normal_deviation.max.max(reference);
    let ok = rep.singular.is_empty() && k < cfg.tol_geom && kd < cfg.tol_geom;
    Ok(Outcome::new(
        ok,
        k.max(kd),
        format!("20x20, max |K-1/3| = {k:.1e}, max |K^D+2/3| = {kd:.1e}"),
    ))
}

fn minimal_constants(cfg: &AcceptanceConfig) -> Result<Outcome> {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for name in BUILTIN_CURVES {
        let (ts, rect) = builtin_surface(name)?;
        let rep =
            classification_report(&ts, rect, (20, 20), cfg.tol_geom, Expectations::default())?;
        let (h, k, kd) = (
            rep.mean_curvature.max,
            rep.k_deviation.max,
            rep.k_normal_deviation.max,
        );
        ok &= rep.singular.is_empty() && h < cfg.tol_geom && k < cfg.tol_geom && kd < cfg.tol_geom;
        worst = worst.max(h).max(k).max(kd);
        parts.push(format!("{name}: |H| {h:.1e}, dK {k:.1e}, d|K^D| {kd:.1e}"));
    }
    Ok(Outcome::new(ok, worst, parts.join("; ")))
}

fn closed_form() -> Result<Outcome> {
    let (ts, _) = builtin_surface("veronese-generator")?;
    let k = 1.0 / (6.0 * 3f64.sqrt());
    let mut worst: f64 = 0.0;
    for (s, t) in Rect::new((-3.0, 3.0), (-3.0, 3.0)).grid(10, 10) {
        let want = [
            k * 2.0 * s * (s * t.cos() - 3.0 * t.sin()),
            k * 2.0 * s * (s * t.sin() + 3.0 * t.cos()),
            k * ((s * s - 9.0) * (2.0 * t).cos() - 6.0 * s * (2.0 * t).sin()),
            k * ((s * s - 9.0) * (2.0 * t).sin() + 6.0 * s * (2.0 * t).cos()),
            k * 3f64.sqrt() * (s * s + 3.0),
        ];
        let x = ts.position(s, t)?;
        for i in 0..5 {
            worst = worst.max((x[i] - want[i]).abs());
        }
    }
    Ok(Outcome::new(
        worst < 1e-12,
        worst,
        format!("10x10 on [-3,3]^2, max componentwise error {worst:.1e}"),
    ))
}

/// The α₀ congruence coefficient along `s = 0` in closed form.
pub fn alpha0_coefficient(t: f64) -> f64 {
    21.0 / 800.0 * (-180.0 * (2.0 * t).cos() + 45.0 * (4.0 * t).cos() - 121.0)
        / (t.sin().powi(4) * t.cos().powi(4))
}

fn congruence(cfg: &AcceptanceConfig) -> Result<Outcome> {
    let (circle, rect) = builtin_surface("veronese-generator")?;
    let c1 = veronese_congruence_test(&circle, rect, (10, 10), cfg.tol_cong)?;
    let (a0, rect) = builtin_surface("alpha0")?;
    let c2 = veronese_congruence_test(&a0, rect, (10, 10), cfg.tol_cong)?;
    let (lo, hi) = ALPHA0_INTERIOR;
    let mut rel: f64 = 0.0;
    for i in 0..10 {
        let t = lo + (hi - lo) * (i as f64 + 0.5) / 10.0;
        let c = a0.congruence_coefficient(0.0, t)?;
        let want = alpha0_coefficient(t);
        rel = rel.max(((c - want) / want).abs());
    }
    let c4 = c1.c4_residual.max(c2.c4_residual);
    let ok = c1.verdict == Verdict::VeroneseCongruent
        && c2.verdict == Verdict::NotCongruent
        && rel < 1e-6
        && c4 < 1e-6;
    Ok(Outcome::new(
        ok,
        rel,
        format!(
            "circle {} (max |c| {:.1e}), alpha0 {} (max |c| {:.2}), closed-form rel err {rel:.1e}, |c4+2/3| {c4:.1e}",
            c1.verdict.as_str(),
            c1.max_abs_c,
            c2.verdict.as_str(),
            c2.max_abs_c,
        ),
    ))
}

fn connection(cfg: &AcceptanceConfig) -> Result<Outcome> {
    if cfg.jet_order < CONNECTION_FORM_CURVE_ORDER {
        return Ok(Outcome {
            ok: true,
            max: f64::NAN,
            detail: format!(
                "skipped: jet order {} < {CONNECTION_FORM_CURVE_ORDER}",
                cfg.jet_order
            ),
            skipped: true,
        });
    }
    let mut gram: f64 = 0.0;
    let mut gram_abs: f64 = 0.0;
    let mut conn: f64 = 0.0;
    for name in BUILTIN_CURVES {
        let (ts, rect) = builtin_surface(name)?;
        for (s, t) in rect.grid(5, 5) {
            let c = frame_checks(&ts, s, t)?;
            gram = gram.max(c.gram);
            gram_abs = gram_abs.max(c.gram_abs);
            conn = conn.max(c.connection);
        }
    }
    Ok(Outcome::new(
        gram < 1e-8 && conn < 1e-7,
        gram.max(conn),
        format!(
            "50 points, max Gram residual {gram:.1e} ({gram_abs:.1e} unscaled), \
             max connection-form error {conn:.1e}"
        ),
    ))
}

fn fundamental() -> Result<Outcome> {
    let mut patches: Vec<(Box<dyn SurfacePatch>, Rect)> = Vec::new();
    let v = veronese_patch();
    let r = v.domain();
    patches.push((Box::new(v), r));
    for name in BUILTIN_CURVES {
        let (ts, rect) = builtin_surface(name)?;
        patches.push((Box::new(ts), rect));
    }
    let mut worst = [0.0f64; 3];
    let mut singular = 0;
    for (p, rect) in &patches {
        let rep =
            classification_report(p.as_ref(), *rect, (10, 10), 1e-7, Expectations::default())?;
        singular += rep.singular.len();
        worst[0] = worst[0].max(rep.gauss.max);
        worst[1] = worst[1].max(rep.codazzi.max);
        worst[2] = worst[2].max(rep.ricci.max);
    }
    let max = worst.iter().fold(0.0f64, |a, &b| a.max(b));
    Ok(Outcome::new(
        singular == 0 && max < 1e-7,
        max,
        format!(
            "3 patches, 10x10 each: gauss {:.1e}, codazzi {:.1e}, ricci {:.1e}",
            worst[0], worst[1], worst[2]
        ),
    ))
}

fn jets_vs_fd(cfg: &AcceptanceConfig) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for name in BUILTIN_CURVES {
        let curve = NullCurve::builtin(name)?;
        let (da, db) = curve.domain();
        let (a, b) = (da + FD_CLEARANCE, db - FD_CLEARANCE);
        let ts: Vec<f64> = (0..20).map(|_| rng.gen_range(a..b)).collect();
        for k in 0..5 {
            let comp = curve.component(k);
            for order in 1..=4 {
                for &t in &ts {
                    let room = (t - da).min(db - t);
                    let h = fd_step(order, t, room);
                    let f: &dyn JetFunction = &comp;
                    worst = worst.max(fd_crosscheck(f, t, order, h)?);
                    checks += 1;
                }
            }
        }
    }
    Ok(Outcome::new(
        worst < 1e-5,
        worst,
        format!("{checks} derivatives, max relative discrepancy {worst:.1e}"),
    ))
}

fn null_h11_instance() -> Result<Outcome> {
    let mut null: f64 = 0.0;
    let mut std: f64 = 0.0;
    for name in BUILTIN_CURVES {
        let (ts, rect) = builtin_surface(name)?;
        for (s, t) in rect.grid(5, 5) {
            null = null.max(frame_checks(&ts, s, t)?.h11_null);
        }
        let rep = classification_report(&ts, rect, (10, 10), 1e-8, Expectations::default())?;
        std = std.max(rep.k_std).max(rep.k_normal_std);
    }
    Ok(Outcome::new(
        null < 1e-10 && std < 1e-8,
        null.max(std),
        format!(
            "h_E(f1,f1) null to {null:.1e}, std of K and K^D {std:.1e}; flat => K^D = 0 has no instance and is not tested"
        ),
    ))
}
