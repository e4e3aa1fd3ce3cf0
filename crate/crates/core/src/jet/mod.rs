//! Truncated Taylor arithmetic in one and two variables.

mod fd;
mod jet1;
mod jet2;

pub use fd::{fd_crosscheck, fd_derivative, fd_step, JetFunction};
pub use jet1::Jet1;
pub use jet2::Jet2;

/// `|cos|` or `|sin|` below this at the expansion point counts as a pole of
/// tan/sec or csc/cot.
pub const POLE_THRESHOLD: f64 = 1e-14;

/// Default jet order for curve evaluation.
pub const DEFAULT_CURVE_ORDER: usize = 6;

/// Five jets, one per ambient coordinate of E^5_2.
pub type JetVector<J> = [J; 5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elementary {
    Sin,
    Cos,
    Tan,
    Sec,
    Csc,
    Cot,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
}

impl Elementary {
    pub const ALL: [Elementary; 11] = [
        Elementary::Sin,
        Elementary::Cos,
        Elementary::Tan,
        Elementary::Sec,
        Elementary::Csc,
        Elementary::Cot,
        Elementary::Sinh,
        Elementary::Cosh,
        Elementary::Exp,
        Elementary::Ln,
        Elementary::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Tan => "tan",
            Elementary::Sec => "sec",
            Elementary::Csc => "csc",
            Elementary::Cot => "cot",
            Elementary::Sinh => "sinh",
            Elementary::Cosh => "cosh",
            Elementary::Exp => "exp",
            Elementary::Ln => "ln",
            Elementary::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Elementary::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Plain floating-point evaluation with the same domain rules as the jet
    /// recurrences.
    pub fn eval(self, x: f64) -> crate::error::Result<f64> {
        let domain = || crate::error::Error::Domain {
            function: self.name(),
            value: x,
        };
        let v = match self {
            Elementary::Sin => x.sin(),
            Elementary::Cos => x.cos(),
            Elementary::Tan => {
                if x.cos().abs() < POLE_THRESHOLD {
                    return Err(domain());
                }
                x.tan()
            }
            Elementary::Sec => {
                if x.cos().abs() < POLE_THRESHOLD {
                    return Err(domain());
                }
                1.0 / x.cos()
            }
            Elementary::Csc => {
                if x.sin().abs() < POLE_THRESHOLD {
                    return Err(domain());
                }
                1.0 / x.sin()
            }
            Elementary::Cot => {
                if x.sin().abs() < POLE_THRESHOLD {
                    return Err(domain());
                }
                x.cos() / x.sin()
            }
            Elementary::Sinh => x.sinh(),
            Elementary::Cosh => x.cosh(),
            Elementary::Exp => x.exp(),
            Elementary::Ln => {
                if !(x > 0.0) {
                    return Err(domain());
                }
                x.ln()
            }
            Elementary::Sqrt => {
                if x < 0.0 {
                    return Err(domain());
                }
                x.sqrt()
            }
        };
        Ok(v)
    }
}

impl std::fmt::Display for Elementary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
