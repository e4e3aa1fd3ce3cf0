use crate::algebra::{Signature, NULL_FRAME_GRAM};
use crate::curve::{validate_theorem_curve, NullCurve, DEFAULT_CURVE_TOL};
use crate::error::{Error, Result};
use crate::jet::{Jet1, Jet2};
use crate::scalar::Scalar;
use crate::surface::{
    connection_forms, ConnectionForms, FirstFundamentalForm, LocalGeometry, Rect, SurfacePatch, V5,
};

pub const DEFAULT_S_RANGE: (f64, f64) = (-3.0, 3.0);

/// Curve jet order needed to differentiate the canonical frame once.
pub const CONNECTION_FORM_CURVE_ORDER: usize = 6;

/// `x(s,t) = (s²/2 + 27/40 η) α + 3/2 s α' + 3/2 α''` with `η = <α''',α'''>`,
/// for a null curve `α` in the light cone with `<α'',α''> = 4/9`.
#[derive(Debug, Clone)]
pub struct TheoremSurface {
    curve: NullCurve,
    s_range: (f64, f64),
    label: String,
}

/// The pseudo-orthonormal frame `f̃1 = x_s`, `f̃2 = m̃ x_s + x_t`, `f3 = α`,
/// `f4` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalFrame {
    pub f1t: V5,
    pub f2t: V5,
    pub f3: V5,
    pub f4: V5,
    /// Largest deviation of the Gram matrix from the null-frame Gram, each
    /// entry `<f_A, f_B>` divided by `max(1, |f_A| |f_B|)` (Euclidean norms).
    pub gram_residual: f64,
    /// The same without scaling. Near the ends of a curve domain `|f4|` can
    /// be in the hundreds and this is dominated by rounding.
    pub gram_residual_abs: f64,
    /// Largest `|<f_A, x>| / max(1, |f_A| |x|)`.
    pub position_residual: f64,
}

impl CanonicalFrame {
    pub fn vectors(&self) -> [V5; 4] {
        [self.f1t, self.f2t, self.f3, self.f4]
    }
}

/// Derivatives `α^(k)` for `k = 0..=kmax` as bi-jets in `t`, each of total
/// order `order`.
fn alpha_jets(curve: &NullCurve, t: f64, order: usize, kmax: usize) -> Result<Vec<[Jet2; 5]>> {
    let base = curve.jet(t, order + kmax)?;
    let mut out = Vec::with_capacity(kmax + 1);
    let mut cur: [Jet1; 5] = base;
    for k in 0..=kmax {
        out.push(std::array::from_fn(|c| Jet2::lift_t(&cur[c], order)));
        if k < kmax {
            cur = cur.map(|j| j.differentiate().expect("order covers kmax"));
        }
    }
    Ok(out)
}

fn combo(terms: &[(&Jet2, &[Jet2; 5])]) -> [Jet2; 5] {
    std::array::from_fn(|c| {
        let mut it = terms.iter();
        let (a, v) = it.next().expect("non-empty");
        let mut acc = (*a).clone() * v[c].clone();
        for (a, v) in it {
            acc = acc + (*a).clone() * v[c].clone();
        }
        acc
    })
}

impl TheoremSurface {
    /// Validates the curve (default tolerance, 1% margins) and builds the
    /// surface.
    pub fn build(curve: NullCurve, s_range: (f64, f64)) -> Result<Self> {
        TheoremSurface::build_with_tol(curve, s_range, DEFAULT_CURVE_TOL)
    }

    pub fn build_with_tol(curve: NullCurve, s_range: (f64, f64), tol: f64) -> Result<Self> {
        let report = validate_theorem_curve(&curve, 101, tol)?;
        if !report.passed {
            let worst: Vec<String> = report
                .failing()
                .iter()
                .map(|r| format!("{} residual {:e} at t = {}", r.name, r.max, r.worst_t))
                .collect();
            return Err(Error::InvalidCurve(worst.join("; ")));
        }
        TheoremSurface::unchecked(curve, s_range)
    }

    /// Builds the surface without validating the curve.
    pub fn unchecked(curve: NullCurve, s_range: (f64, f64)) -> Result<Self> {
        if !(s_range.0 < s_range.1) {
            return Err(Error::InvalidArgument(format!(
                "empty s-range ({}, {})",
                s_range.0, s_range.1
            )));
        }
        let label = format!("theorem-surface({})", curve.label());
        Ok(TheoremSurface {
            curve,
            s_range,
            label,
        })
    }

    pub fn curve(&self) -> &NullCurve {
        &self.curve
    }

    pub fn s_range(&self) -> (f64, f64) {
        self.s_range
    }

    /// `m̃ = s²/6 + 27/40 η`.
    pub fn m_tilde(&self, s: f64, t: f64) -> Result<f64> {
        let d = self.curve.derivatives(t, 3)?;
        let eta = Signature::E52.inner(&d[3], &d[3]);
        Ok(s * s / 6.0 + 27.0 / 40.0 * eta)
    }

    /// Canonical frame field as bi-jets of total order `order` at `(s, t)`.
    pub fn canonical_frame_field(&self, s: f64, t: f64, order: usize) -> Result<[[Jet2; 5]; 4]> {
        let a = alpha_jets(&self.curve, t, order + 1, 4)?;
        let sig = Signature::E52;
        let sj = Jet2::var_s(s, order + 1);
        let s2 = sj.clone() * sj.clone();
        let eta = sig.inner(&a[3], &a[3]);
        let eta_p = sig.inner(&a[4], &a[3]) * 2.0;
        let xi = sig.inner(&a[4], &a[4]);

        let x = self.position_jets(&a, &sj, &eta);
        let xs = x.clone().map(|c| c.d_s().expect("order >= 1"));
        let xt = x.map(|c| c.d_t().expect("order >= 1"));
        let m = s2.clone() * (1.0 / 6.0) + eta.clone() * (27.0 / 40.0);
        let m = m.truncate(order);
        let f1t = xs.clone();
        let f2t: [Jet2; 5] = std::array::from_fn(|c| m.clone() * xs[c].clone() + xt[c].clone());

        let s3 = s2.clone() * sj.clone();
        let s4 = s2.clone() * s2.clone();
        let c0 = (s4 * -100.0
            - (s2.clone() * eta.clone() * 5.0
                + sj.clone() * eta_p.clone() * 10.0
                + eta.clone() * eta.clone() * 81.0)
                * 162.0
            + xi * 6075.0)
            * (1.0 / 2400.0);
        let c1 = (s3 * -40.0 - sj.clone() * eta.clone() * 270.0 - eta_p * 567.0) * (1.0 / 160.0);
        let c2 = (s2 * 5.0 + eta * 27.0) * (-3.0 / 20.0);
        let c3 = sj * -1.5;
        let c4 = Jet2::constant(-2.25, order + 1);
        let f4 = combo(&[
            (&c0, &a[0]),
            (&c1, &a[1]),
            (&c2, &a[2]),
            (&c3, &a[3]),
            (&c4, &a[4]),
        ]);
        let trunc = |v: [Jet2; 5]| v.map(|c| c.truncate(order));
        Ok([trunc(f1t), trunc(f2t), trunc(a[0].clone()), trunc(f4)])
    }

    fn position_jets(&self, a: &[[Jet2; 5]], sj: &Jet2, eta: &Jet2) -> [Jet2; 5] {
        let c0 = sj.clone() * sj.clone() * 0.5 + eta.clone() * (27.0 / 40.0);
        let c1 = sj.clone() * 1.5;
        let c2 = Jet2::constant(1.5, sj.order());
        combo(&[(&c0, &a[0]), (&c1, &a[1]), (&c2, &a[2])])
    }

    pub fn canonical_frame(&self, s: f64, t: f64) -> Result<CanonicalFrame> {
        let field = self.canonical_frame_field(s, t, 0)?;
        let f: [V5; 4] = std::array::from_fn(|a| std::array::from_fn(|c| field[a][c].value()));
        let x = self.position(s, t)?;
        let sig = Signature::E52;
        let norm = |v: &V5| v.iter().map(|c| c * c).sum::<f64>().sqrt();
        let scale = |u: &V5, v: &V5| (norm(u) * norm(v)).max(1.0);
        let mut gram_residual: f64 = 0.0;
        let mut gram_residual_abs: f64 = 0.0;
        let mut position_residual: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let d = (sig.inner(&f[a], &f[b]) - NULL_FRAME_GRAM[a][b]).abs();
                gram_residual = gram_residual.max(d / scale(&f[a], &f[b]));
                gram_residual_abs = gram_residual_abs.max(d);
            }
            position_residual =
                position_residual.max(sig.inner(&f[a], &x).abs() / scale(&f[a], &x));
        }
        Ok(CanonicalFrame {
            f1t: f[0],
            f2t: f[1],
            f3: f[2],
            f4: f[3],
            gram_residual,
            gram_residual_abs,
            position_residual,
        })
    }

    /// Connection forms of the canonical frame at `(s, t)`.
    pub fn connection_forms(&self, s: f64, t: f64) -> Result<ConnectionForms> {
        let geom = LocalGeometry::new(self, s, t, crate::surface::MIN_SURFACE_ORDER)?;
        let field = self.canonical_frame_field(s, t, 1)?;
        connection_forms(&geom, &field)
    }

    /// `c = -<ĥ(f̃2, f̃2), f4>` and `c4 = -<ĥ(f̃2, f̃2), f3>`, so that
    /// `ĥ(f̃2, f̃2) = c f3 + c4 f4`.
    pub fn congruence_coefficients(&self, s: f64, t: f64) -> Result<(f64, f64)> {
        let geom = LocalGeometry::new(self, s, t, crate::surface::MIN_SURFACE_ORDER)?;
        self.congruence_from(&geom)
    }

    pub(crate) fn congruence_from(&self, geom: &LocalGeometry) -> Result<(f64, f64)> {
        let frame = self.canonical_frame(geom.s, geom.t)?;
        let dir = geom.tangent_coefficients(&frame.f2t);
        let h22 = geom.hhat_on(dir, dir);
        let sig = Signature::E52;
        Ok((-sig.inner(&h22, &frame.f4), -sig.inner(&h22, &frame.f3)))
    }

    pub fn congruence_coefficient(&self, s: f64, t: f64) -> Result<f64> {
        Ok(self.congruence_coefficients(s, t)?.0)
    }

    /// The default grid rectangle: the s-range times the curve domain minus
    /// `margin` of its length at each end.
    pub fn rect_with_margin(&self, margin: f64) -> Rect {
        let (a, b) = self.curve.domain();
        let w = b - a;
        Rect::new(self.s_range, (a + margin * w, b - margin * w))
    }
}

impl SurfacePatch for TheoremSurface {
    fn label(&self) -> &str {
        &self.label
    }

    fn domain(&self) -> Rect {
        self.rect_with_margin(crate::curve::DEFAULT_MARGIN)
    }

    fn eval(&self, s: f64, t: f64, order: usize) -> Result<[Jet2; 5]> {
        let a = alpha_jets(&self.curve, t, order, 3)?;
        let sj = Jet2::var_s(s, order);
        let eta = Signature::E52.inner(&a[3], &a[3]);
        Ok(self.position_jets(&a, &sj, &eta))
    }

    fn metric_form_residual(&self, s: f64, t: f64, g: &FirstFundamentalForm) -> Option<f64> {
        let m = self.m_tilde(s, t).ok()?;
        Some(
            g.g_ss
                .abs()
                .max((g.g_st + 1.0).abs())
                .max((g.g_tt - 2.0 * m).abs()),
        )
    }
}
