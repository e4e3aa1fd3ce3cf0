//! Linear algebra over pseudo-Euclidean spaces `E^n_t`.
//!
//! The metric is `diag(-1, ..., -1, +1, ..., +1)` with the `index` timelike
//! coordinates first. Every inner product in the crate goes through
//! [`Signature::inner`] or [`inner`].

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default tolerance for [`causal_character`] on computed values.
pub const CAUSAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    dim: usize,
    index: usize,
}

impl Signature {
    /// The ambient space of the pseudo-sphere `S^4_2(1)`.
    pub const E52: Signature = Signature { dim: 5, index: 2 };

    pub fn new(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 || index > dim {
            return Err(Error::InvalidArgument(format!(
                "signature requires 0 < dim and index <= dim, got ({dim}, {index})"
            )));
        }
        Ok(Signature { dim, index })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Diagonal metric entry for coordinate `i`.
    pub fn epsilon(&self, i: usize) -> f64 {
        if i < self.index {
            -1.0
        } else {
            1.0
        }
    }

    pub fn inner<S: Scalar>(&self, u: &[S], v: &[S]) -> S {
        debug_assert_eq!(u.len(), self.dim);
        debug_assert_eq!(v.len(), self.dim);
        let mut acc = u[0].clone() * v[0].clone() * self.epsilon(0);
        for i in 1..self.dim {
            acc = acc + u[i].clone() * v[i].clone() * self.epsilon(i);
        }
        acc
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E^{}_{}", self.dim, self.index)
    }
}

/// A point or vector of `E^n_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoVector {
    components: Vec<f64>,
    signature: Signature,
}

impl PseudoVector {
    pub fn new(signature: Signature, components: Vec<f64>) -> Result<Self> {
        if components.len() != signature.dim() {
            return Err(Error::DimensionMismatch {
                expected: signature.dim(),
                got: components.len(),
            });
        }
        Ok(PseudoVector {
            components,
            signature,
        })
    }

    /// A vector of `E^5_2`.
    pub fn e52(components: [f64; 5]) -> Self {
        PseudoVector {
            components: components.to_vec(),
            signature: Signature::E52,
        }
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn scaled(&self, a: f64) -> Self {
        PseudoVector {
            components: self.components.iter().map(|c| a * c).collect(),
            signature: self.signature,
        }
    }

    /// `self + a * other`, panicking on mismatched signatures.
    pub fn axpy(&self, a: f64, other: &PseudoVector) -> Self {
        assert_eq!(self.signature, other.signature);
        PseudoVector {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(x, y)| x + a * y)
                .collect(),
            signature: self.signature,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// The indefinite inner product `-sum_{i<t} u_i v_i + sum_{i>=t} u_i v_i`.
pub fn inner(u: &PseudoVector, v: &PseudoVector) -> Result<f64> {
    if u.signature != v.signature {
        return Err(Error::SignatureMismatch {
            left: u.signature.to_string(),
            right: v.signature.to_string(),
        });
    }
    Ok(u.signature.inner(&u.components, &v.components))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Causality {
    Spacelike,
    Timelike,
    Null,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausalCharacter {
    pub kind: Causality,
    pub tolerance: f64,
}

pub fn causal_character(v: &PseudoVector, tol: f64) -> CausalCharacter {
    let q = v.signature.inner(&v.components, &v.components);
    let kind = if q > tol {
        Causality::Spacelike
    } else if q < -tol {
        Causality::Timelike
    } else {
        Causality::Null
    };
    CausalCharacter {
        kind,
        tolerance: tol,
    }
}

/// Residual `|<v,v> - 1/r2|` of membership in `S^{n-1}_t(r2)`.
pub fn sphere_membership(v: &PseudoVector, r2: f64) -> f64 {
    let q = v.signature.inner(&v.components, &v.components);
    (q - 1.0 / r2).abs()
}

/// Gram matrix of a pseudo-orthonormal null frame:
/// `<f1,f2> = <f3,f4> = -1`, all other pairs zero.
pub const NULL_FRAME_GRAM: [[f64; 4]; 4] = [
    [0.0, -1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, -1.0, 0.0],
];

/// Gram matrix of the orthonormal frame `(e1, e2, e3, e4)` with `e1`, `e4`
/// timelike.
pub const ORTHONORMAL_FRAME_GRAM: [[f64; 4]; 4] = [
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
];

pub fn gram(frame: &[PseudoVector; 4]) -> Result<[[f64; 4]; 4]> {
    let mut g = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            g[a][b] = inner(&frame[a], &frame[b])?;
        }
    }
    Ok(g)
}

/// `max_{A,B} |<f_A, f_B> - expected[A][B]|`.
pub fn gram_residual(frame: &[PseudoVector; 4], expected: &[[f64; 4]; 4]) -> Result<f64> {
    let g = gram(frame)?;
    let mut r: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            r = r.max((g[a][b] - expected[a][b]).abs());
        }
    }
    Ok(r)
}

/// Orthonormal frame `(e1, e2, e3, e4)` at a surface point: `e1` timelike and
/// `e2` spacelike tangent, `e3` spacelike and `e4` timelike normal to the
/// surface inside the sphere.
///
/// Thin point-value wrapper over [`crate::frame::orthonormal_frame`].
pub fn orthonormal_tangent_normal_frame(
    x: &PseudoVector,
    xs: &PseudoVector,
    xt: &PseudoVector,
) -> Result<[PseudoVector; 4]> {
    for v in [x, xs, xt] {
        if v.signature != Signature::E52 {
            return Err(Error::SignatureMismatch {
                left: v.signature.to_string(),
                right: Signature::E52.to_string(),
            });
        }
    }
    let arr = |v: &PseudoVector| -> [f64; 5] { v.components.clone().try_into().unwrap() };
    let frame = crate::frame::orthonormal_frame(&arr(x), &arr(xs), &arr(xt))
        .map_err(|e| e.at_point(f64::NAN, f64::NAN))?;
    Ok(frame.map(PseudoVector::e52))
}

/// Converts an orthonormal frame into the null frame
/// `f1 = (e1+e2)/√2, f2 = (e1-e2)/√2, f3 = (e3+e4)/√2, f4 = (e4-e3)/√2`.
pub fn to_null_frame(e: &[PseudoVector; 4]) -> [PseudoVector; 4] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [
        e[0].axpy(1.0, &e[1]).scaled(r),
        e[0].axpy(-1.0, &e[1]).scaled(r),
        e[2].axpy(1.0, &e[3]).scaled(r),
        e[3].axpy(-1.0, &e[2]).scaled(r),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(c: [f64; 5]) -> PseudoVector {
        PseudoVector::e52(c)
    }

    #[test]
    fn inner_examples() {
        assert_eq!(
            inner(&v([1., 0., 0., 0., 0.]), &v([1., 0., 0., 0., 0.])).unwrap(),
            -1.0
        );
        assert_eq!(
            inner(&v([0., 0., 1., 0., 0.]), &v([0., 0., 1., 0., 0.])).unwrap(),
            1.0
        );
        let k = 1.0 / (3.0 * 3f64.sqrt());
        let a0 = v([2.0 * k, 0.0, k, 0.0, 3f64.sqrt() * k]);
        assert!(inner(&a0, &a0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn inner_rejects_mismatched_signatures() {
        let a = PseudoVector::new(Signature::new(5, 1).unwrap(), vec![0.0; 5]).unwrap();
        let b = v([0.0; 5]);
        assert!(matches!(
            inner(&a, &b),
            Err(Error::SignatureMismatch { .. })
        ));
        assert!(PseudoVector::new(Signature::E52, vec![1.0; 4]).is_err());
    }

    #[test]
    fn causal_examples() {
        let tol = 1e-12;
        assert_eq!(
            causal_character(&v([1., 0., 0., 0., 0.]), tol).kind,
            Causality::Timelike
        );
        assert_eq!(
            causal_character(&v([1., 0., 1., 0., 0.]), tol).kind,
            Causality::Null
        );
        assert_eq!(
            causal_character(&v([0., 0., 0., 1., 1.]), tol).kind,
            Causality::Spacelike
        );
    }

    #[test]
    fn sphere_examples() {
        assert_eq!(sphere_membership(&v([0., 0., 1., 0., 0.]), 1.0), 0.0);
        assert_eq!(sphere_membership(&v([0., 0., 2., 0., 0.]), 1.0), 3.0);
        let p = v([0.0, 0.0, 0.5, 3f64.sqrt() / 2.0, 0.0]);
        assert!(sphere_membership(&p, 1.0) < 1e-15);
    }

    #[test]
    fn gram_residual_examples() {
        let basis: [PseudoVector; 4] = [
            v([1., 0., 0., 0., 0.]),
            v([0., 0., 1., 0., 0.]),
            v([0., 0., 0., 1., 0.]),
            v([0., 1., 0., 0., 0.]),
        ];
        assert_eq!(gram_residual(&basis, &ORTHONORMAL_FRAME_GRAM).unwrap(), 0.0);

        let null = to_null_frame(&basis);
        assert!(gram_residual(&null, &NULL_FRAME_GRAM).unwrap() < 1e-15);

        let mut scaled = null.clone();
        scaled[0] = scaled[0].scaled(2.0);
        assert!((gram_residual(&scaled, &NULL_FRAME_GRAM).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn signature_counts_timelike_basis_vectors() {
        for (n, t) in [(5, 2), (4, 1), (3, 0), (3, 3)] {
            let sig = Signature::new(n, t).unwrap();
            let timelike = (0..n)
                .filter(|&i| {
                    let mut c = vec![0.0; n];
                    c[i] = 1.0;
                    let e = PseudoVector::new(sig, c).unwrap();
                    causal_character(&e, CAUSAL_TOLERANCE).kind == Causality::Timelike
                })
                .count();
            assert_eq!(timelike, t);
        }
    }

    #[test]
    fn degenerate_tangent_is_rejected() {
        let x = v([0.0, 0.0, 0.5, 3f64.sqrt() / 2.0, 0.0]);
        let xs = v([1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(orthonormal_tangent_normal_frame(&x, &xs, &xs).is_err());
    }

    fn arb5() -> impl Strategy<Value = [f64; 5]> {
        prop::array::uniform5(-10.0f64..10.0)
    }

    proptest! {
        #[test]
        fn inner_is_bilinear_and_symmetric(u in arb5(), w in arb5(), z in arb5(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let (u, w, z) = (v(u), v(w), v(z));
            let lhs = inner(&u.scaled(a).axpy(b, &w), &z).unwrap();
            let rhs = a * inner(&u, &z).unwrap() + b * inner(&w, &z).unwrap();
            let scale = 1.0 + (a.abs() * u.max_abs() + b.abs() * w.max_abs()) * z.max_abs() * 5.0;
            prop_assert!((lhs - rhs).abs() <= 1e-14 * scale);
            prop_assert_eq!(inner(&u, &z).unwrap(), inner(&z, &u).unwrap());
        }
    }
}
