//! Orthonormal tangent/normal frames of a Lorentzian surface in S^4_2(1),
//! written once over [`Scalar`] so the same code yields point frames and
//! frame fields.
//!
//! All branching (candidate choice, pivots, signs) is decided on constant
//! terms, so a jet frame is the Taylor expansion of a smooth local frame
//! field that agrees with the point frame at the expansion point.

use crate::algebra::Signature;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const PIVOT_THRESHOLD: f64 = 1e-11;
pub const SIGN_THRESHOLD: f64 = 1e-12;
pub const DEGENERATE_DET: f64 = 1e-12;
/// Largest Gram residual `orthonormal_frame` accepts in its own output.
pub const FRAME_GRAM_TOL: f64 = 1e-9;

type V5<S> = [S; 5];

fn ip<S: Scalar>(u: &V5<S>, v: &V5<S>) -> S {
    Signature::E52.inner(u, v)
}

fn add<S: Scalar>(u: &V5<S>, v: &V5<S>) -> V5<S> {
    std::array::from_fn(|i| u[i].clone() + v[i].clone())
}

fn sub<S: Scalar>(u: &V5<S>, v: &V5<S>) -> V5<S> {
    std::array::from_fn(|i| u[i].clone() - v[i].clone())
}

fn scale<S: Scalar>(u: &V5<S>, a: &S) -> V5<S> {
    std::array::from_fn(|i| u[i].clone() * a.clone())
}

fn euclid2(u: &[f64]) -> f64 {
    u.iter().map(|c| c * c).sum()
}

fn values<S: Scalar>(u: &V5<S>) -> [f64; 5] {
    std::array::from_fn(|i| u[i].value())
}

fn degenerate(reason: impl Into<String>) -> Error {
    Error::DegenerateTangent {
        s: f64::NAN,
        t: f64::NAN,
        reason: reason.into(),
    }
}

/// Signature-aware Gram–Schmidt of a nondegenerate Lorentzian 2-plane.
/// Returns `(timelike, spacelike)` unit vectors.
fn lorentz_pair<S: Scalar>(a: &V5<S>, b: &V5<S>) -> Result<(V5<S>, V5<S>)> {
    let candidates = [
        (a.clone(), b.clone()),
        (b.clone(), a.clone()),
        (add(a, b), sub(a, b)),
        (sub(a, b), add(a, b)),
    ];
    let quality = |v: &V5<S>| {
        let vv = values(v);
        let n = euclid2(&vv);
        if n == 0.0 {
            0.0
        } else {
            Signature::E52.inner(&vv, &vv).abs() / n
        }
    };
    let (first, other) = candidates
        .into_iter()
        .max_by(|p, q| quality(&p.0).total_cmp(&quality(&q.0)))
        .expect("four candidates");
    if quality(&first) < PIVOT_THRESHOLD {
        return Err(degenerate("plane contains no non-null direction"));
    }
    let n1 = ip(&first, &first);
    let eps1 = n1.value().signum();
    let u = scale(&first, &(n1 * eps1).sqrt()?.recip()?);
    let w = sub(&other, &scale(&u, &(ip(&other, &u) * eps1)));
    let n2 = ip(&w, &w);
    let eps2 = n2.value().signum();
    if eps2 == eps1 || n2.value().abs() < PIVOT_THRESHOLD * euclid2(&values(&w)).max(1.0) {
        return Err(degenerate("plane is not Lorentzian"));
    }
    let v = scale(&w, &(n2 * eps2).sqrt()?.recip()?);
    Ok(if eps1 < 0.0 { (u, v) } else { (v, u) })
}

/// Basis of `{n : <n,r_i> = 0}` for three vectors `r_i`, via complete-pivoting
/// elimination of the metric-weighted rows.
fn orthogonal_complement<S: Scalar>(rows: [&V5<S>; 3]) -> Result<[V5<S>; 2]> {
    let sig = Signature::E52;
    let mut m: Vec<Vec<S>> = rows
        .iter()
        .map(|r| (0..5).map(|j| r[j].clone() * sig.epsilon(j)).collect())
        .collect();
    let mut cols: [usize; 5] = [0, 1, 2, 3, 4];
    for k in 0..3 {
        let mut best = (k, k, 0.0);
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, c) in row.iter().enumerate().skip(k) {
                if c.value().abs() > best.2 {
                    best = (i, j, c.value().abs());
                }
            }
        }
        if best.2 < PIVOT_THRESHOLD {
            return Err(degenerate(
                "position and tangent vectors are linearly dependent",
            ));
        }
        m.swap(k, best.0);
        for row in m.iter_mut() {
            row.swap(k, best.1);
        }
        cols.swap(k, best.1);
        let inv = m[k][k].recip()?;
        let pivot_row: Vec<S> = m[k].iter().map(|c| c.clone() * inv.clone()).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let f = row[k].clone();
            for j in 0..5 {
                row[j] = row[j].clone() - f.clone() * pivot_row[j].clone();
            }
        }
        m[k] = pivot_row;
    }
    let zero = m[0][0].constant_like(0.0);
    let basis = [3usize, 4].map(|free| {
        let mut n: V5<S> = std::array::from_fn(|_| zero.clone());
        n[cols[free]] = zero.constant_like(1.0);
        for k in 0..3 {
            n[cols[k]] = -m[k][free].clone();
        }
        n
    });
    Ok(basis)
}

fn fix_sign<S: Scalar>(v: V5<S>) -> V5<S> {
    match v.iter().find(|c| c.value().abs() > SIGN_THRESHOLD) {
        Some(c) if c.value() < 0.0 => v.map(|c| -c),
        _ => v,
    }
}

/// Determinant of a 5x5 matrix given by rows.
pub(crate) fn det5(rows: [[f64; 5]; 5]) -> f64 {
    let mut a = rows;
    let mut det = 1.0;
    for k in 0..5 {
        let p = (k..5)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in (k + 1)..5 {
            let f = a[i][k] / a[k][k];
            for j in k..5 {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    det
}

/// Orthonormal frame `(e1, e2, e3, e4)` with `<e1,e1> = <e4,e4> = -1`,
/// `<e2,e2> = <e3,e3> = 1`, `e1, e2` tangent and `e3, e4` normal to the
/// surface inside the sphere.
///
/// Signs: the first component of `e1, e2, e3` exceeding 1e-12 in magnitude is
/// positive; `e4` is oriented so that `det(e1, e2, e3, e4, x) > 0`.
pub fn orthonormal_frame<S: Scalar>(x: &V5<S>, xs: &V5<S>, xt: &V5<S>) -> Result<[V5<S>; 4]> {
    for v in [x, xs, xt] {
        if v.iter().any(|c| !c.value().is_finite()) {
            return Err(Error::NonFinite {
                s: f64::NAN,
                t: f64::NAN,
            });
        }
    }
    let (gss, gst, gtt) = (ip(xs, xs).value(), ip(xs, xt).value(), ip(xt, xt).value());
    let det = gss * gtt - gst * gst;
    if det.abs() < DEGENERATE_DET {
        return Err(degenerate(format!(
            "induced metric is singular (det {det:e})"
        )));
    }
    if det > 0.0 {
        return Err(degenerate(format!(
            "induced metric is not Lorentzian (det {det:e})"
        )));
    }
    let (e1, e2) = lorentz_pair(xs, xt)?;
    let [n1, n2] = orthogonal_complement([x, &e1, &e2])?;
    let (e4, e3) = lorentz_pair(&n1, &n2)?;
    let e1 = fix_sign(e1);
    let e2 = fix_sign(e2);
    let e3 = fix_sign(e3);
    let orient = det5([
        values(&e1),
        values(&e2),
        values(&e3),
        values(&e4),
        values(x),
    ]);
    let e4 = if orient < 0.0 { e4.map(|c| -c) } else { e4 };
    let frame = [e1, e2, e3, e4];
    let signs = [-1.0, 1.0, 1.0, -1.0];
    let mut residual: f64 = 0.0;
    for a in 0..4 {
        for b in a..4 {
            let want = if a == b { signs[a] } else { 0.0 };
            residual = residual.max((ip(&frame[a], &frame[b]).value() - want).abs());
        }
    }
    if !(residual < FRAME_GRAM_TOL) {
        return Err(Error::NotPseudoOrthonormal { residual });
    }
    Ok(frame)
}
