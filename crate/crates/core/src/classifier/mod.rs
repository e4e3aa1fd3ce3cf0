//! Building surfaces from null curves, the canonical frame, and the tests that
//! decide minimality, constant curvatures and congruence to the Veronese
//! surface.

mod theorem;

pub use theorem::{CanonicalFrame, TheoremSurface, CONNECTION_FORM_CURVE_ORDER, DEFAULT_S_RANGE};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::surface::{
    lin, max_abs, CurvatureReport, LocalGeometry, Rect, SurfacePatch, VeronesePatch,
    DEFAULT_SURFACE_ORDER, V5,
};

pub const MIN_GRID: usize = 5;
/// Fewer successfully evaluated points than this makes a verdict inconclusive.
pub const MIN_EVALUATED: usize = 25;
/// Failure fraction above which a congruence verdict is inconclusive.
pub const MAX_FAILURE_FRACTION: f64 = 0.10;

pub const VERONESE_K: f64 = 1.0 / 3.0;
pub const VERONESE_KD: f64 = -2.0 / 3.0;

pub fn veronese_patch() -> VeronesePatch {
    VeronesePatch
}

/// `e1 = x_u`, `e2 = sech(u/√3) x_v`, `e3 = √3 ĥ(e1,e1)`, `e4 = √3 ĥ(e1,e2)`.
pub fn veronese_reference_frame(geom: &LocalGeometry) -> [V5; 4] {
    let w = 1.0 / (geom.s / 3f64.sqrt()).cosh();
    let e1 = geom.xs;
    let e2 = lin(&[(w, &geom.xt)]);
    let r3 = 3f64.sqrt();
    let h11 = geom.hhat_on([1.0, 0.0], [1.0, 0.0]);
    let h12 = geom.hhat_on([1.0, 0.0], [0.0, w]);
    [e1, e2, lin(&[(r3, &h11)]), lin(&[(r3, &h12)])]
}

fn check_grid(ns: usize, nt: usize) -> Result<()> {
    if ns < MIN_GRID || nt < MIN_GRID {
        return Err(Error::InvalidArgument(format!(
            "grid must be at least {MIN_GRID}x{MIN_GRID}, got {ns}x{nt}"
        )));
    }
    Ok(())
}

/// Evaluates `f` on the grid in parallel, keeping grid order.
pub(crate) fn on_grid<T: Send>(
    rect: &Rect,
    ns: usize,
    nt: usize,
    f: impl Fn(f64, f64) -> Result<T> + Sync,
) -> Vec<((f64, f64), Result<T>)> {
    rect.grid(ns, nt)
        .into_par_iter()
        .map(|(s, t)| ((s, t), f(s, t)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    VeroneseCongruent,
    NotCongruent,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::VeroneseCongruent => "veronese-congruent",
            Verdict::NotCongruent => "not-congruent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFailure {
    pub s: f64,
    pub t: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceCertificate {
    pub max_abs_c: f64,
    pub worst_point: Option<(f64, f64)>,
    /// Largest `|c4 + 2/3|`.
    pub c4_residual: f64,
    pub verdict: Verdict,
    pub grid: (usize, usize),
    pub rect: Rect,
    pub tolerance: f64,
    pub evaluated: usize,
    pub failures: Vec<GridFailure>,
}

/// Evaluates the congruence coefficient on an `ns x nt` grid over `rect`.
pub fn veronese_congruence_test(
    ts: &TheoremSurface,
    rect: Rect,
    (ns, nt): (usize, usize),
    tol: f64,
) -> Result<CongruenceCertificate> {
    check_grid(ns, nt)?;
    let values = on_grid(&rect, ns, nt, |s, t| ts.congruence_coefficients(s, t));
    let mut max_abs_c: f64 = 0.0;
    let mut worst_point = None;
    let mut c4_residual: f64 = 0.0;
    let mut evaluated = 0;
    let mut failures = Vec::new();
    for ((s, t), r) in values {
        match r {
            Ok((c, c4)) if c.is_finite() && c4.is_finite() => {
                evaluated += 1;
                if worst_point.is_none() || c.abs() > max_abs_c {
                    max_abs_c = c.abs();
                    worst_point = Some((s, t));
                }
                c4_residual = c4_residual.max((c4 + 2.0 / 3.0).abs());
            }
            Ok(_) => failures.push(GridFailure {
                s,
                t,
                message: Error::NonFinite { s, t }.to_string(),
            }),
            Err(e) => failures.push(GridFailure {
                s,
                t,
                message: e.to_string(),
            }),
        }
    }
    let total = ns * nt;
    let verdict = if failures.len() as f64 > MAX_FAILURE_FRACTION * total as f64
        || evaluated < MIN_EVALUATED
    {
        Verdict::Inconclusive
    } else if max_abs_c < tol {
        Verdict::VeroneseCongruent
    } else {
        Verdict::NotCongruent
    };
    Ok(CongruenceCertificate {
        max_abs_c,
        worst_point,
        c4_residual,
        verdict,
        grid: (ns, nt),
        rect,
        tolerance: tol,
        evaluated,
        failures,
    })
}

/// Expected constants for a classification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectations {
    pub k: f64,
    pub k_normal_abs: f64,
    /// Expected signed `K^D` in the constructed frame, if the orientation is
    /// meaningful.
    pub k_normal: Option<f64>,
}

impl Default for Expectations {
    fn default() -> Self {
        Expectations {
            k: VERONESE_K,
            k_normal_abs: -VERONESE_KD,
            k_normal: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub s: f64,
    pub t: f64,
    pub check: &'static str,
    pub value: f64,
}

/// Largest deviation of a quantity and where it happens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub max: f64,
    pub at: Option<(f64, f64)>,
}

impl Extremum {
    fn new() -> Self {
        Extremum { max: 0.0, at: None }
    }

    fn push(&mut self, v: f64, s: f64, t: f64) {
        if self.at.is_none() || v > self.max || v.is_nan() {
            self.max = v;
            self.at = Some((s, t));
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationSummary {
    pub label: String,
    pub grid: (usize, usize),
    pub rect: Rect,
    pub tolerance: f64,
    pub expectations: Expectations,
    pub points: Vec<CurvatureReport>,
    pub singular: Vec<GridFailure>,
    pub mean_curvature: Extremum,
    pub k_deviation: Extremum,
    pub k_normal_deviation: Extremum,
    pub sphere: Extremum,
    pub metric_form: Option<Extremum>,
    pub gauss: Extremum,
    pub codazzi: Extremum,
    pub ricci: Extremum,
    pub k_std: f64,
    pub k_normal_std: f64,
    pub violations: Vec<Violation>,
}

impl ClassificationSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && !self.points.is_empty()
    }

    pub fn minimal(&self) -> bool {
        self.mean_curvature.max < self.tolerance
    }
}

fn std_dev(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = xs.clone().count();
    if n < 2 {
        return 0.0;
    }
    let mean = xs.clone().sum::<f64>() / n as f64;
    (xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
}

/// Per-point curvature reports on a grid and the summary of minimality,
/// `K`, `|K^D|` and the fundamental equations against `tol`.
pub fn classification_report(
    patch: &dyn SurfacePatch,
    rect: Rect,
    (ns, nt): (usize, usize),
    tol: f64,
    expect: Expectations,
) -> Result<ClassificationSummary> {
    check_grid(ns, nt)?;
    let results = on_grid(&rect, ns, nt, |s, t| {
        let geom = LocalGeometry::new(patch, s, t, DEFAULT_SURFACE_ORDER)?;
        let mut rep = geom.report();
        rep.metric_form = patch.metric_form_residual(s, t, &geom.metric());
        Ok(rep)
    });
    let mut points = Vec::new();
    let mut singular = Vec::new();
    for ((s, t), r) in results {
        match r {
            Ok(rep) => points.push(rep),
            Err(e) => singular.push(GridFailure {
                s,
                t,
                message: e.to_string(),
            }),
        }
    }

    let mut mean_curvature = Extremum::new();
    let mut k_dev = Extremum::new();
    let mut kd_dev = Extremum::new();
    let mut sphere = Extremum::new();
    let mut metric_form: Option<Extremum> = None;
    let mut gauss = Extremum::new();
    let mut codazzi = Extremum::new();
    let mut ricci = Extremum::new();
    let mut violations = Vec::new();
    for p in &points {
        let (s, t) = (p.s, p.t);
        let kd = match expect.k_normal {
            Some(v) => (p.k_normal - v).abs(),
            None => (p.k_normal_abs - expect.k_normal_abs).abs(),
        };
        let checks: [(&'static str, f64, &mut Extremum); 7] = [
            ("mean-curvature", p.mean_curvature_max, &mut mean_curvature),
            ("gaussian-curvature", (p.k - expect.k).abs(), &mut k_dev),
            ("normal-curvature", kd, &mut kd_dev),
            ("sphere", p.sphere, &mut sphere),
            ("gauss", p.residuals.gauss, &mut gauss),
            ("codazzi", p.residuals.codazzi, &mut codazzi),
            ("ricci", p.residuals.ricci, &mut ricci),
        ];
        for (name, v, ext) in checks {
            ext.push(v, s, t);
            if !(v < tol) {
                violations.push(Violation {
                    s,
                    t,
                    check: name,
                    value: v,
                });
            }
        }
        if let Some(m) = p.metric_form {
            metric_form.get_or_insert_with(Extremum::new).push(m, s, t);
            if !(m < tol) {
                violations.push(Violation {
                    s,
                    t,
                    check: "metric-form",
                    value: m,
                });
            }
        }
    }
    let k_std = std_dev(points.iter().map(|p| p.k));
    let k_normal_std = std_dev(points.iter().map(|p| p.k_normal));
    Ok(ClassificationSummary {
        label: patch.label().to_string(),
        grid: (ns, nt),
        rect,
        tolerance: tol,
        expectations: expect,
        points,
        singular,
        mean_curvature,
        k_deviation: k_dev,
        k_normal_deviation: kd_dev,
        sphere,
        metric_form,
        gauss,
        codazzi,
        ricci,
        k_std,
        k_normal_std,
        violations,
    })
}

/// Identities of the canonical frame and its connection at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameChecks {
    pub s: f64,
    pub t: f64,
    /// Scaled Gram residual, see [`CanonicalFrame::gram_residual`].
    pub gram: f64,
    pub gram_abs: f64,
    pub position: f64,
    /// `|ĥ(f̃1,f̃1) - f3|`.
    pub h11_is_f3: f64,
    /// `|h_E(f̃1,f̃2) - x|`.
    pub h12_is_x: f64,
    /// `|<h_E(f̃1,f̃1), h_E(f̃1,f̃1)>|`.
    pub h11_null: f64,
    /// Largest of `|ω_3^3(f̃2) + 2s/3|`, `|ω_1^1(f̃2) + s/3|`, `|ω_1^4|`,
    /// `|ω_2^4(f̃2) + 2/3|`.
    pub connection: f64,
    /// Normal connection `D f3`, `D f4` against the diagonal pattern. The
    /// `ω_4^3` entries equal `½ X<f4,f4>` and are divided by `max(1, |f4|²)`.
    pub normal_connection: f64,
    /// Tangential connection `∇_{f̃2} f̃1 = -s/3 f̃1` and `∇_{f̃1} f̃1 = 0`.
    pub levi_civita: f64,
    /// Symmetry and reconstruction residuals of the connection forms.
    pub consistency: f64,
}

pub fn frame_checks(ts: &TheoremSurface, s: f64, t: f64) -> Result<FrameChecks> {
    let geom = LocalGeometry::new(ts, s, t, DEFAULT_SURFACE_ORDER)?;
    let frame = ts.canonical_frame(s, t)?;
    let a1 = geom.tangent_coefficients(&frame.f1t);
    let a2 = geom.tangent_coefficients(&frame.f2t);
    let h11 = geom.hhat_on(a1, a1);
    let h11_is_f3 = max_abs(&crate::surface::diff(&h11, &frame.f3));
    let g12 = crate::surface::ip(&frame.f1t, &frame.f2t);
    let h12_e = lin(&[(1.0, &geom.hhat_on(a1, a2)), (-g12, &geom.x)]);
    let h12_is_x = max_abs(&crate::surface::diff(&h12_e, &geom.x));
    let g11 = crate::surface::ip(&frame.f1t, &frame.f1t);
    let h11_e = lin(&[(1.0, &h11), (-g11, &geom.x)]);
    let h11_null = crate::surface::ip(&h11_e, &h11_e).abs();

    let w = ts.connection_forms(s, t)?;
    let connection = [
        (w.get(3, 3, 2) + 2.0 * s / 3.0).abs(),
        (w.get(1, 1, 2) + s / 3.0).abs(),
        w.get(1, 4, 1).abs(),
        w.get(1, 4, 2).abs(),
        (w.get(2, 4, 2) + 2.0 / 3.0).abs(),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    // D_{f̃1} f3 = D_{f̃1} f4 = 0, D_{f̃2} f3 = -2s/3 f3, D_{f̃2} f4 = 2s/3 f4.
    let f4_scale = frame.f4.iter().map(|c| c * c).sum::<f64>().max(1.0);
    let normal_connection = [
        w.get(3, 3, 1).abs(),
        w.get(3, 4, 1).abs(),
        w.get(4, 3, 1).abs() / f4_scale,
        w.get(4, 4, 1).abs(),
        (w.get(3, 3, 2) + 2.0 * s / 3.0).abs(),
        w.get(3, 4, 2).abs(),
        w.get(4, 3, 2).abs() / f4_scale,
        (w.get(4, 4, 2) - 2.0 * s / 3.0).abs(),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    let levi_civita = [
        w.get(1, 1, 1).abs(),
        w.get(1, 2, 1).abs(),
        (w.get(1, 1, 2) + s / 3.0).abs(),
        w.get(1, 2, 2).abs(),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    Ok(FrameChecks {
        s,
        t,
        gram: frame.gram_residual,
        gram_abs: frame.gram_residual_abs,
        position: frame.position_residual,
        h11_is_f3,
        h12_is_x,
        h11_null,
        connection,
        normal_connection,
        levi_civita,
        consistency: w.symmetry_residual.max(w.reconstruction_residual),
    })
}

#[cfg(test)]
mod tests;
