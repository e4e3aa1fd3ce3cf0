use std::fmt;

use crate::error::{Error, Result};
use crate::jet::{Elementary, Jet1};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    Sqrt3,
}

impl Constant {
    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::Sqrt3 => "sqrt3",
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::Sqrt3 => 3f64.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

/// Expression tree of a curve component in the variable `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var,
    Num(f64),
    Const(Constant),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Integer power.
    Pow(Box<Expr>, i32),
    Call(Elementary, Box<Expr>),
    /// `pow(base, p)` with a literal real exponent; needs a positive base.
    PowReal(Box<Expr>, f64),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        super::parse::parse_expr(text)
    }

    pub fn depends_on_t(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Num(_) | Expr::Const(_) => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) | Expr::PowReal(a, _) => {
                a.depends_on_t()
            }
            Expr::Binary(_, a, b) => a.depends_on_t() || b.depends_on_t(),
        }
    }

    /// Plain floating-point evaluation.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = match self {
            Expr::Var => t,
            Expr::Num(x) => *x,
            Expr::Const(c) => c.value(),
            Expr::Neg(a) => -a.eval(t)?,
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval(t)?, b.eval(t)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(Error::DivisionByZero);
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(a, n) => {
                let a = a.eval(t)?;
                if *n < 0 && a == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                a.powi(*n)
            }
            Expr::Call(f, a) => f.eval(a.eval(t)?)?,
            Expr::PowReal(a, p) => {
                let a = a.eval(t)?;
                if !(a > 0.0) {
                    return Err(Error::Domain {
                        function: "pow",
                        value: a,
                    });
                }
                a.powf(*p)
            }
        };
        Ok(v)
    }

    /// Taylor expansion of order `order` at `t0`.
    pub fn jet(&self, t0: f64, order: usize) -> Result<Jet1> {
        let j = match self {
            Expr::Var => Jet1::variable(t0, order),
            Expr::Num(x) => Jet1::constant(*x, order),
            Expr::Const(c) => Jet1::constant(c.value(), order),
            Expr::Neg(a) => -a.jet(t0, order)?,
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.jet(t0, order)?, b.jet(t0, order)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a.checked_div(&b)?,
                }
            }
            Expr::Pow(a, n) => a.jet(t0, order)?.powi(*n)?,
            Expr::Call(f, a) => a.jet(t0, order)?.apply(*f)?,
            Expr::PowReal(a, p) => a.jet(t0, order)?.powf(*p)?,
        };
        Ok(j)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Pow(..) => 3,
            _ => 4,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Var => f.write_str("t")?,
            Expr::Num(x) => write!(f, "{x}")?,
            Expr::Const(c) => f.write_str(c.name())?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write(f, 4)?;
            }
            Expr::Binary(op, a, b) => {
                let p = op.precedence();
                a.write(f, p)?;
                write!(f, " {} ", op.symbol())?;
                b.write(f, p + 1)?;
            }
            Expr::Pow(a, n) => {
                a.write(f, 4)?;
                write!(f, "^{n}")?;
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write(f, 0)?;
                f.write_str(")")?;
            }
            Expr::PowReal(a, p) => {
                f.write_str("pow(")?;
                a.write(f, 0)?;
                write!(f, ", {p})")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}
