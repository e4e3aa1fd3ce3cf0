//! Arithmetic shared by plain reals and truncated jets.
//!
//! Frame construction and metric algebra are written once against [`Scalar`]
//! so the same code produces point values (`f64`) and smooth local fields
//! (`Jet2`) whose derivatives feed connection forms and curvature.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Add<f64, Output = Self>
{
    /// Value at the expansion point.
    fn value(&self) -> f64;

    /// A constant with the same truncation order as `self`.
    fn constant_like(&self, c: f64) -> Self;

    fn recip(&self) -> Result<Self>;

    fn sqrt(&self) -> Result<Self>;

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.recip()?)
    }
}

impl Scalar for f64 {
    fn value(&self) -> f64 {
        *self
    }

    fn constant_like(&self, c: f64) -> Self {
        c
    }

    fn recip(&self) -> Result<Self> {
        if *self == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(1.0 / self)
    }

    fn sqrt(&self) -> Result<Self> {
        if *self < 0.0 {
            return Err(Error::Domain {
                function: "sqrt",
                value: *self,
            });
        }
        Ok(f64::sqrt(*self))
    }
}
