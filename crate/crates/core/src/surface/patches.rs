use super::{Rect, SurfacePatch};
use crate::error::{Error, Result};
use crate::jet::{Elementary::*, Jet2};

/// The Lorentzian Veronese surface, with its coordinates reordered so the two
/// timelike coordinates come first: `(u4, u5, u1, u2, u3)` of the classical
/// parametrization
///
/// ```text
/// u1 = 3/2 cosh²(u/√3) - 1
/// u2 = √3/2 cosh²(u/√3) cos(2v/√3),   u3 = √3/2 cosh²(u/√3) sin(2v/√3)
/// u4 = √3/2 sinh(2u/√3) cos(v/√3),    u5 = √3/2 sinh(2u/√3) sin(v/√3)
/// ```
#[derive(Debug, Clone, Default)]
pub struct VeronesePatch;

impl SurfacePatch for VeronesePatch {
    fn label(&self) -> &str {
        "veronese-surface"
    }

    fn domain(&self) -> Rect {
        Rect::new((-2.0, 2.0), (-2.0, 2.0))
    }

    fn eval(&self, u: f64, v: f64, order: usize) -> Result<[Jet2; 5]> {
        let r3 = 3f64.sqrt();
        let w = Jet2::var_s(u, order) * (1.0 / r3);
        let v = Jet2::var_t(v, order) * (1.0 / r3);
        let ch = w.apply(Cosh)?;
        let ch2 = ch.clone() * ch;
        let sh2 = (w * 2.0).apply(Sinh)?;
        let half = 0.5 * r3;
        Ok([
            sh2.clone() * v.apply(Cos)? * half,
            sh2 * v.apply(Sin)? * half,
            ch2.clone() * 1.5 + (-1.0),
            ch2.clone() * (v.clone() * 2.0).apply(Cos)? * half,
            ch2 * (v * 2.0).apply(Sin)? * half,
        ])
    }
}

/// `(r1 sinh s, 0, r1 cosh s, r2 cos t, r2 sin t)` with `r1² + r2² = 1`: a
/// flat Lorentzian product surface in S^4_2(1), minimal only for `r1 = r2`,
/// with the constant normal `(0, 1, 0, 0, 0)`.
#[derive(Debug, Clone)]
pub struct ProductPatch {
    r1: f64,
    r2: f64,
    label: String,
}

impl ProductPatch {
    pub fn new(r1: f64) -> Result<Self> {
        if !(r1 > 0.0 && r1 < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "radius must lie in (0, 1), got {r1}"
            )));
        }
        Ok(ProductPatch {
            r1,
            r2: (1.0 - r1 * r1).sqrt(),
            label: format!("product-{r1}"),
        })
    }

    pub fn radii(&self) -> (f64, f64) {
        (self.r1, self.r2)
    }
}

impl SurfacePatch for ProductPatch {
    fn label(&self) -> &str {
        &self.label
    }

    fn domain(&self) -> Rect {
        Rect::new((-1.0, 1.0), (-3.0, 3.0))
    }

    fn eval(&self, s: f64, t: f64, order: usize) -> Result<[Jet2; 5]> {
        let s = Jet2::var_s(s, order);
        let t = Jet2::var_t(t, order);
        Ok([
            s.apply(Sinh)? * self.r1,
            Jet2::constant(0.0, order),
            s.apply(Cosh)? * self.r1,
            t.apply(Cos)? * self.r2,
            t.apply(Sin)? * self.r2,
        ])
    }
}
