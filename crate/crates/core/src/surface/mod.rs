//! Lorentzian surface patches in S^4_2(1) and their pointwise geometry.

mod connection;
mod geometry;
mod patches;

pub use connection::{connection_forms, ConnectionForms};
pub use geometry::{
    CurvatureReport, FirstFundamentalForm, FundamentalResiduals, LocalGeometry,
    SecondFundamentalForm, FRAME_TOLERANCE,
};
pub use patches::{ProductPatch, VeronesePatch};

use crate::error::Result;
use crate::jet::Jet2;

/// Total order of the bi-jets used for curvature computations.
pub const DEFAULT_SURFACE_ORDER: usize = 4;
/// Smallest bi-jet order that still supports curvature and Codazzi/Ricci.
pub const MIN_SURFACE_ORDER: usize = 3;

pub type V5 = [f64; 5];

/// Closed parameter rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub s: (f64, f64),
    pub t: (f64, f64),
}

impl Rect {
    pub fn new(s: (f64, f64), t: (f64, f64)) -> Self {
        Rect { s, t }
    }

    /// `ns x nt` grid including the corners, ordered by `s` then `t`.
    pub fn grid(&self, ns: usize, nt: usize) -> Vec<(f64, f64)> {
        let axis = |(a, b): (f64, f64), n: usize| -> Vec<f64> {
            if n == 1 {
                return vec![0.5 * (a + b)];
            }
            (0..n)
                .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                .collect()
        };
        let ss = axis(self.s, ns);
        let ts = axis(self.t, nt);
        ss.iter()
            .flat_map(|&s| ts.iter().map(move |&t| (s, t)))
            .collect()
    }
}

/// An immersion `(s, t) -> E^5_2` that can be expanded to any order.
pub trait SurfacePatch: Send + Sync {
    fn label(&self) -> &str;

    /// Default sampling rectangle.
    fn domain(&self) -> Rect;

    /// Bi-jets of the five coordinates at `(s, t)`.
    fn eval(&self, s: f64, t: f64, order: usize) -> Result<[Jet2; 5]>;

    /// Deviation of the metric at `(s, t)` from the form the patch is known to
    /// have, if any.
    fn metric_form_residual(&self, _s: f64, _t: f64, _g: &FirstFundamentalForm) -> Option<f64> {
        None
    }

    fn position(&self, s: f64, t: f64) -> Result<V5> {
        let x = self.eval(s, t, 0)?;
        Ok(std::array::from_fn(|i| x[i].coeff(0, 0)))
    }
}

pub(crate) fn ip(u: &V5, v: &V5) -> f64 {
    crate::algebra::Signature::E52.inner(u, v)
}

pub(crate) fn lin(terms: &[(f64, &V5)]) -> V5 {
    let mut out = [0.0; 5];
    for (a, v) in terms {
        for i in 0..5 {
            out[i] += a * v[i];
        }
    }
    out
}

pub(crate) fn max_abs(v: &V5) -> f64 {
    v.iter().fold(0.0, |m, c| m.max(c.abs()))
}

pub(crate) fn diff(u: &V5, v: &V5) -> V5 {
    std::array::from_fn(|i| u[i] - v[i])
}

/// Solves `a x = b` for a small square system by Gauss–Jordan elimination
/// with partial pivoting. Returns `None` if singular.
pub(crate) fn solve<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Option<[f64; N]> {
    for k in 0..N {
        let p = (k..N).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k].abs() < 1e-300 {
            return None;
        }
        a.swap(p, k);
        b.swap(p, k);
        for i in 0..N {
            if i != k {
                let f = a[i][k] / a[k][k];
                for j in k..N {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
    }
    Some(std::array::from_fn(|i| b[i] / a[i][i]))
}
