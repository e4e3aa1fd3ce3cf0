use std::ops::{Add, Mul, Neg, Sub};

use super::jet1::factorial;
use super::{Elementary, Jet1};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Truncated bivariate Taylor expansion `sum_{i+j<=N} a_ij σ^i τ^j` in the
/// surface coordinates `(s, t)`.
///
/// Coefficients are stored by total degree: degree `d` occupies
/// `d(d+1)/2 .. (d+1)(d+2)/2`, ordered by increasing power of `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    order: usize,
    coeffs: Vec<f64>,
}

#[inline]
fn idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

fn len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

impl Jet2 {
    pub fn zero(order: usize) -> Self {
        Jet2 {
            order,
            coeffs: vec![0.0; len(order)],
        }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        let mut j = Jet2::zero(order);
        j.coeffs[0] = c;
        j
    }

    /// The coordinate `s0 + σ`.
    pub fn var_s(s0: f64, order: usize) -> Self {
        let mut j = Jet2::constant(s0, order);
        if order >= 1 {
            j.coeffs[idx(1, 0)] = 1.0;
        }
        j
    }

    /// The coordinate `t0 + τ`.
    pub fn var_t(t0: f64, order: usize) -> Self {
        let mut j = Jet2::constant(t0, order);
        if order >= 1 {
            j.coeffs[idx(0, 1)] = 1.0;
        }
        j
    }

    /// Builds a jet from a closure over `(i, j)` with `i + j <= order`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut j2 = Jet2::zero(order);
        for d in 0..=order {
            for j in 0..=d {
                j2.coeffs[idx(d - j, j)] = f(d - j, j);
            }
        }
        j2
    }

    /// Embeds a jet in `t` alone.
    pub fn lift_t(j1: &Jet1, order: usize) -> Self {
        let n = order.min(j1.order());
        let c = j1.coeffs();
        Jet2::from_fn(n, |i, j| if i == 0 { c[j] } else { 0.0 })
    }

    /// Embeds a jet in `s` alone.
    pub fn lift_s(j1: &Jet1, order: usize) -> Self {
        let n = order.min(j1.order());
        let c = j1.coeffs();
        Jet2::from_fn(n, |i, j| if j == 0 { c[i] } else { 0.0 })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Raw Taylor coefficient `a_ij`.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > self.order {
            0.0
        } else {
            self.coeffs[idx(i, j)]
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, v: f64) {
        assert!(i + j <= self.order);
        self.coeffs[idx(i, j)] = v;
    }

    /// `∂^{i+j} / ∂s^i ∂t^j` at the expansion point.
    pub fn partial(&self, i: usize, j: usize) -> Result<f64> {
        if i + j > self.order {
            return Err(Error::OrderTooLow {
                requested: i + j,
                order: self.order,
            });
        }
        Ok(factorial(i) * factorial(j) * self.coeffs[idx(i, j)])
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order);
        Jet2 {
            order: n,
            coeffs: self.coeffs[..len(n)].to_vec(),
        }
    }

    /// Jet of `∂f/∂s`, one order lower.
    pub fn d_s(&self) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::OrderTooLow {
                requested: 1,
                order: 0,
            });
        }
        Ok(Jet2::from_fn(self.order - 1, |i, j| {
            (i + 1) as f64 * self.coeffs[idx(i + 1, j)]
        }))
    }

    /// Jet of `∂f/∂t`, one order lower.
    pub fn d_t(&self) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::OrderTooLow {
                requested: 1,
                order: 0,
            });
        }
        Ok(Jet2::from_fn(self.order - 1, |i, j| {
            (j + 1) as f64 * self.coeffs[idx(i, j + 1)]
        }))
    }

    /// Derivative along coordinate `k` (0 = s, 1 = t).
    pub fn d(&self, k: usize) -> Result<Self> {
        match k {
            0 => self.d_s(),
            1 => self.d_t(),
            _ => Err(Error::InvalidArgument(format!("no coordinate {k}"))),
        }
    }

    pub fn checked_div(&self, other: &Jet2) -> Result<Self> {
        Ok(self.clone() * other.recip()?)
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut acc = Jet2::constant(1.0, self.order);
        for _ in 0..n.unsigned_abs() {
            acc = acc * base.clone();
        }
        Ok(acc)
    }

    pub fn powf(&self, p: f64) -> Result<Self> {
        let outer = Jet1::variable(self.value(), self.order).powf(p)?;
        Ok(self.compose(&outer))
    }

    /// `f(self)` via the univariate expansion of `f` at the constant term.
    pub fn apply(&self, f: Elementary) -> Result<Self> {
        let outer = Jet1::variable(self.value(), self.order).apply(f)?;
        Ok(self.compose(&outer))
    }

    /// Composition `g(self)` where `outer` is the Taylor expansion of `g` at
    /// `self.value()`: Horner evaluation in the nilpotent part.
    fn compose(&self, outer: &Jet1) -> Self {
        let mut delta = self.clone();
        delta.coeffs[0] = 0.0;
        let c = outer.coeffs();
        let n = self.order.min(outer.order());
        let mut acc = Jet2::constant(c[n], self.order);
        for k in (0..n).rev() {
            acc = acc * delta.clone() + c[k];
        }
        acc
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        let n = self.order.min(rhs.order);
        let l = len(n);
        Jet2 {
            order: n,
            coeffs: (0..l).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        let n = self.order.min(rhs.order);
        let l = len(n);
        Jet2 {
            order: n,
            coeffs: (0..l).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect(),
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        let n = self.order.min(rhs.order);
        let mut out = Jet2::zero(n);
        for d1 in 0..=n {
            for j1 in 0..=d1 {
                let a = self.coeffs[idx(d1 - j1, j1)];
                if a == 0.0 {
                    continue;
                }
                for d2 in 0..=(n - d1) {
                    for j2 in 0..=d2 {
                        let i = d1 - j1 + d2 - j2;
                        out.coeffs[idx(i, j1 + j2)] += a * rhs.coeffs[idx(d2 - j2, j2)];
                    }
                }
            }
        }
        out
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(mut self) -> Jet2 {
        self.coeffs.iter_mut().for_each(|c| *c = -*c);
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(mut self, rhs: f64) -> Jet2 {
        self.coeffs.iter_mut().for_each(|c| *c *= rhs);
        self
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, rhs: f64) -> Jet2 {
        self.coeffs[0] += rhs;
        self
    }
}

impl Scalar for Jet2 {
    fn value(&self) -> f64 {
        self.coeffs[0]
    }

    fn constant_like(&self, c: f64) -> Self {
        Jet2::constant(c, self.order)
    }

    fn recip(&self) -> Result<Self> {
        if self.coeffs[0] == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let outer = Jet1::constant(1.0, self.order)
            .checked_div(&Jet1::variable(self.value(), self.order))?;
        Ok(self.compose(&outer))
    }

    fn sqrt(&self) -> Result<Self> {
        self.apply(Elementary::Sqrt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mixed_partial_of_polynomial() {
        // (s^2/2) t^3 at (s0, t0): ∂^3/∂s∂t^2 = 6 s t
        let (s0, t0) = (0.7, -1.3);
        let s = Jet2::var_s(s0, 4);
        let t = Jet2::var_t(t0, 4);
        let f = s.clone() * s * 0.5 * t.powi(3).unwrap();
        assert_abs_diff_eq!(f.partial(1, 2).unwrap(), 6.0 * s0 * t0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            f.partial(0, 0).unwrap(),
            0.5 * s0 * s0 * t0.powi(3),
            epsilon = 1e-14
        );
        assert!(f.partial(3, 2).is_err());
    }

    #[test]
    fn composition_matches_closed_form_derivatives() {
        // f = sin(s t): f_st = cos(st) - st sin(st)
        let (s0, t0) = (0.4, 0.9);
        let st = Jet2::var_s(s0, 3) * Jet2::var_t(t0, 3);
        let f = st.apply(Elementary::Sin).unwrap();
        let p = s0 * t0;
        assert_abs_diff_eq!(
            f.partial(1, 1).unwrap(),
            p.cos() - p * p.sin(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            f.partial(0, 2).unwrap(),
            -s0 * s0 * p.sin(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn derivative_jets_and_division() {
        let s = Jet2::var_s(1.5, 3);
        let t = Jet2::var_t(0.5, 3);
        let q = (s.clone() * t.clone())
            .checked_div(&(t.clone() + 1.0))
            .unwrap();
        // ∂/∂t [s t/(t+1)] = s/(t+1)^2
        assert_abs_diff_eq!(q.d_t().unwrap().value(), 1.5 / 2.25, epsilon = 1e-14);
        assert_eq!(q.d_t().unwrap().order(), 2);
        assert!(Jet2::var_s(0.0, 2).recip().is_err());
    }

    #[test]
    fn lifted_jets_keep_univariate_coefficients() {
        let j = Jet1::variable(0.3, 4).apply(Elementary::Exp).unwrap();
        let l = Jet2::lift_t(&j, 3);
        assert_eq!(l.order(), 3);
        assert_eq!(l.coeff(0, 2), j.coeffs()[2]);
        assert_eq!(l.coeff(1, 1), 0.0);
    }
}
