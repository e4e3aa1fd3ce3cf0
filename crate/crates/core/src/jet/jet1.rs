use std::ops::{Add, Mul, Neg, Sub};

use super::Elementary;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Truncated Taylor expansion `a_0 + a_1 τ + ... + a_N τ^N` of a function of
/// one variable about a fixed expansion point.
///
/// The k-th derivative at the expansion point is `k! * a_k`. Binary
/// operations between jets of different orders truncate to the lower order.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet1 {
    coeffs: Vec<f64>,
}

impl Jet1 {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet has at least a constant term");
        Jet1 { coeffs }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = c;
        Jet1 { coeffs }
    }

    /// The independent variable `t0 + τ` expanded at `t0`.
    pub fn variable(t0: f64, order: usize) -> Self {
        let mut j = Jet1::constant(t0, order);
        if order >= 1 {
            j.coeffs[1] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        Jet1 {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    /// `k! * a_k`.
    pub fn derivative(&self, k: usize) -> Result<f64> {
        if k > self.order() {
            return Err(Error::OrderTooLow {
                requested: k,
                order: self.order(),
            });
        }
        Ok(self.coeffs[k] * factorial(k))
    }

    /// The jet of the derivative function, one order lower.
    pub fn differentiate(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::OrderTooLow {
                requested: 1,
                order: 0,
            });
        }
        let coeffs = (1..self.coeffs.len())
            .map(|k| k as f64 * self.coeffs[k])
            .collect();
        Ok(Jet1 { coeffs })
    }

    pub fn scale(&self, a: f64) -> Self {
        self.clone() * a
    }

    pub fn checked_div(&self, other: &Jet1) -> Result<Self> {
        let b0 = other.coeffs[0];
        if b0 == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.order().min(other.order());
        let mut q = vec![0.0; n + 1];
        for k in 0..=n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= other.coeffs[j] * q[k - j];
            }
            q[k] = acc / b0;
        }
        Ok(Jet1 { coeffs: q })
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        let base = if n < 0 {
            Jet1::constant(1.0, self.order()).checked_div(self)?
        } else {
            self.clone()
        };
        let mut acc = Jet1::constant(1.0, self.order());
        let mut p = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * p.clone();
            }
            e >>= 1;
            if e > 0 {
                p = p.clone() * p;
            }
        }
        Ok(acc)
    }

    /// Real power `a^p`, requiring a positive constant term.
    pub fn powf(&self, p: f64) -> Result<Self> {
        let a0 = self.coeffs[0];
        if !(a0 > 0.0) {
            return Err(Error::Domain {
                function: "pow",
                value: a0,
            });
        }
        let n = self.order();
        let mut b = vec![0.0; n + 1];
        b[0] = a0.powf(p);
        for k in 1..=n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (p * j as f64 - (k - j) as f64) * self.coeffs[j] * b[k - j];
            }
            b[k] = acc / (k as f64 * a0);
        }
        Ok(Jet1 { coeffs: b })
    }

    pub fn apply(&self, f: Elementary) -> Result<Self> {
        let a = &self.coeffs;
        let a0 = a[0];
        let n = self.order();
        match f {
            Elementary::Sin => Ok(self.sin_cos().0),
            Elementary::Cos => Ok(self.sin_cos().1),
            Elementary::Sinh => Ok(self.sinh_cosh().0),
            Elementary::Cosh => Ok(self.sinh_cosh().1),
            Elementary::Tan | Elementary::Sec => {
                let (s, c) = self.sin_cos();
                check_pole(f, a0, c.coeffs[0])?;
                if f == Elementary::Tan {
                    s.checked_div(&c)
                } else {
                    Jet1::constant(1.0, n).checked_div(&c)
                }
            }
            Elementary::Csc | Elementary::Cot => {
                let (s, c) = self.sin_cos();
                check_pole(f, a0, s.coeffs[0])?;
                if f == Elementary::Cot {
                    c.checked_div(&s)
                } else {
                    Jet1::constant(1.0, n).checked_div(&s)
                }
            }
            Elementary::Exp => {
                let mut e = vec![0.0; n + 1];
                e[0] = a0.exp();
                for k in 1..=n {
                    let acc: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
                    e[k] = acc / k as f64;
                }
                Ok(Jet1 { coeffs: e })
            }
            Elementary::Ln => {
                if !(a0 > 0.0) {
                    return Err(Error::Domain {
                        function: "ln",
                        value: a0,
                    });
                }
                let mut l = vec![0.0; n + 1];
                l[0] = a0.ln();
                for k in 1..=n {
                    let acc: f64 = (1..k).map(|j| j as f64 * l[j] * a[k - j]).sum();
                    l[k] = (a[k] - acc / k as f64) / a0;
                }
                Ok(Jet1 { coeffs: l })
            }
            Elementary::Sqrt => {
                if a0 < 0.0 || (a0 == 0.0 && n > 0) {
                    return Err(Error::Domain {
                        function: "sqrt",
                        value: a0,
                    });
                }
                let mut r = vec![0.0; n + 1];
                r[0] = a0.sqrt();
                for k in 1..=n {
                    let acc: f64 = (1..k).map(|j| r[j] * r[k - j]).sum();
                    r[k] = (a[k] - acc) / (2.0 * r[0]);
                }
                Ok(Jet1 { coeffs: r })
            }
        }
    }

    fn sin_cos(&self) -> (Jet1, Jet1) {
        self.trig_pair(-1.0)
    }

    fn sinh_cosh(&self) -> (Jet1, Jet1) {
        self.trig_pair(1.0)
    }

    /// Coupled recurrence `s' = a' c`, `c' = sign * a' s`.
    fn trig_pair(&self, sign: f64) -> (Jet1, Jet1) {
        let a = &self.coeffs;
        let n = self.order();
        let mut s = vec![0.0; n + 1];
        let mut c = vec![0.0; n + 1];
        if sign < 0.0 {
            s[0] = a[0].sin();
            c[0] = a[0].cos();
        } else {
            s[0] = a[0].sinh();
            c[0] = a[0].cosh();
        }
        for k in 1..=n {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                ds += j as f64 * a[j] * c[k - j];
                dc += j as f64 * a[j] * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = sign * dc / k as f64;
        }
        (Jet1 { coeffs: s }, Jet1 { coeffs: c })
    }
}

fn check_pole(f: Elementary, arg: f64, denom: f64) -> Result<()> {
    if denom.abs() < super::POLE_THRESHOLD {
        return Err(Error::Domain {
            function: f.name(),
            value: arg,
        });
    }
    Ok(())
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

impl Add for Jet1 {
    type Output = Jet1;
    fn add(self, rhs: Jet1) -> Jet1 {
        let n = self.order().min(rhs.order());
        Jet1 {
            coeffs: (0..=n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, rhs: Jet1) -> Jet1 {
        let n = self.order().min(rhs.order());
        Jet1 {
            coeffs: (0..=n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect(),
        }
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, rhs: Jet1) -> Jet1 {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| (0..=k).map(|i| self.coeffs[i] * rhs.coeffs[k - i]).sum())
            .collect();
        Jet1 { coeffs }
    }
}

impl Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        Jet1 {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<f64> for Jet1 {
    type Output = Jet1;
    fn mul(self, rhs: f64) -> Jet1 {
        Jet1 {
            coeffs: self.coeffs.into_iter().map(|c| c * rhs).collect(),
        }
    }
}

impl Add<f64> for Jet1 {
    type Output = Jet1;
    fn add(mut self, rhs: f64) -> Jet1 {
        self.coeffs[0] += rhs;
        self
    }
}

impl Scalar for Jet1 {
    fn value(&self) -> f64 {
        self.coeffs[0]
    }

    fn constant_like(&self, c: f64) -> Self {
        Jet1::constant(c, self.order())
    }

    fn recip(&self) -> Result<Self> {
        Jet1::constant(1.0, self.order()).checked_div(self)
    }

    fn sqrt(&self) -> Result<Self> {
        self.apply(Elementary::Sqrt)
    }

    fn div(&self, other: &Self) -> Result<Self> {
        self.checked_div(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn assert_coeffs(j: &Jet1, expected: &[f64]) {
        assert_eq!(j.order() + 1, expected.len());
        for (a, b) in j.coeffs().iter().zip(expected) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-15);
        }
    }

    #[test]
    fn arithmetic_examples() {
        let t = Jet1::variable(0.0, 3);
        let one = Jet1::constant(1.0, 3);
        assert_coeffs(
            &((one.clone() + t.clone()) * (one.clone() - t.clone())),
            &[1., 0., -1., 0.],
        );
        assert_coeffs(
            &one.checked_div(&(one.clone() - t.clone())).unwrap(),
            &[1., 1., 1., 1.],
        );
        let sin = t.apply(Elementary::Sin).unwrap();
        assert_coeffs(&sin.scale(2.0), &[0., 2., 0., -1.0 / 3.0]);
    }

    #[test]
    fn division_by_zero_constant_fails() {
        let t = Jet1::variable(0.0, 3);
        assert_eq!(
            Jet1::constant(1.0, 3).checked_div(&t),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn elementary_examples() {
        let t = Jet1::variable(0.0, 3);
        assert_coeffs(
            &t.apply(Elementary::Sin).unwrap(),
            &[0., 1., 0., -1.0 / 6.0],
        );

        let q = std::f64::consts::FRAC_PI_4;
        let tq = Jet1::variable(q, 1);
        let g = (tq.apply(Elementary::Tan).unwrap() + tq.apply(Elementary::Sec).unwrap())
            .apply(Elementary::Ln)
            .unwrap();
        assert_abs_diff_eq!(g.coeffs()[0], (1.0 + 2f64.sqrt()).ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(g.coeffs()[1], 2f64.sqrt(), epsilon = 1e-14);

        let minus_one = Jet1::constant(-1.0, 2);
        assert!(matches!(
            minus_one.apply(Elementary::Sqrt),
            Err(Error::Domain {
                function: "sqrt",
                ..
            })
        ));
        assert!(Jet1::constant(0.0, 2).apply(Elementary::Cot).is_err());
        assert!(Jet1::constant(-2.0, 2).apply(Elementary::Ln).is_err());
    }

    #[test]
    fn derivative_examples() {
        let cos = Jet1::variable(0.0, 4).apply(Elementary::Cos).unwrap();
        assert_abs_diff_eq!(cos.derivative(4).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(cos.derivative(1).unwrap(), 0.0);
        assert!(matches!(cos.derivative(5), Err(Error::OrderTooLow { .. })));
    }

    #[test]
    fn powers() {
        let t = Jet1::variable(2.0, 4);
        let cube = t.powi(3).unwrap();
        assert_coeffs(&cube, &[8., 12., 6., 1., 0.]);
        let inv = t.powi(-1).unwrap();
        let direct = Jet1::constant(1.0, 4).checked_div(&t).unwrap();
        assert_eq!(inv, direct);
        let half = t.powf(0.5).unwrap();
        let sqrt = t.apply(Elementary::Sqrt).unwrap();
        for (a, b) in half.coeffs().iter().zip(sqrt.coeffs()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-15);
        }
    }

    fn poly(order: usize) -> impl Strategy<Value = Jet1> {
        prop::collection::vec(-5.0f64..5.0, order + 1).prop_map(Jet1::from_coeffs)
    }

    fn binom(n: usize, k: usize) -> f64 {
        factorial(n) / (factorial(k) * factorial(n - k))
    }

    proptest! {
        #[test]
        fn leibniz_rule(a in poly(6), b in poly(6), k in 0usize..=6) {
            let lhs = (a.clone() * b.clone()).derivative(k).unwrap();
            let rhs: f64 = (0..=k)
                .map(|i| binom(k, i) * a.derivative(i).unwrap() * b.derivative(k - i).unwrap())
                .sum();
            prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + rhs.abs().max(lhs.abs())) * 10.0);
        }

        #[test]
        fn truncation_consistency(t0 in 0.1f64..1.4, m in 0usize..5) {
            let f = |order: usize| {
                let t = Jet1::variable(t0, order);
                (t.apply(Elementary::Tan).unwrap() + t.apply(Elementary::Sec).unwrap())
                    .apply(Elementary::Ln)
                    .unwrap()
                    * t.apply(Elementary::Cosh).unwrap()
            };
            let high = f(7).truncate(m);
            let low = f(m);
            prop_assert_eq!(high, low);
        }
    }
}
