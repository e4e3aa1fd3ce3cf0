//! Recursive-descent parser for curve component expressions.
//!
//! ```text
//! expression := term (('+' | '-') term)*
//! term       := factor (('*' | '/') factor)*
//! factor     := base ('^' integer)?
//! base       := number | 't' | constant | fn '(' expression ')'
//!             | 'pow' '(' expression ',' number ')' | '(' expression ')' | '-' base
//! ```
//!
//! Positions in errors are 1-based character offsets.

use super::expr::{BinOp, Constant, Expr};
use crate::error::{Error, Result};
use crate::jet::Elementary;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(x) => format!("number {x}"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::End => "end of input".into(),
    }
}

fn err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' | '\u{00d7}' => Some(Tok::Star),
            '/' | '\u{00f7}' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, pos));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lit: String = chars[start..i].iter().collect();
            let x: f64 = lit
                .parse()
                .map_err(|_| err(pos, format!("malformed number `{lit}`")))?;
            out.push((Tok::Num(x), pos));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else {
            return Err(err(pos, format!("unexpected character `{c}`")));
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(err(
                self.pos(),
                format!(
                    "expected {}, found {}",
                    describe(&want),
                    describe(self.peek())
                ),
            ))
        }
    }

    fn expression(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Tok::Num(x) if x.fract() == 0.0 && x <= i32::MAX as f64 => {
                let n = x as i32;
                Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }))
            }
            other => Err(err(
                pos,
                format!(
                    "exponent must be an integer literal, found {}",
                    describe(&other)
                ),
            )),
        }
    }

    fn base(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(x) => Ok(Expr::Num(x)),
            Tok::Minus => Ok(Expr::Neg(Box::new(self.base()?))),
            Tok::LParen => {
                let e = self.expression()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(&name, pos),
            other => Err(err(
                pos,
                format!("expected an operand, found {}", describe(&other)),
            )),
        }
    }

    fn identifier(&mut self, name: &str, pos: usize) -> Result<Expr> {
        match name {
            "t" => return Ok(Expr::Var),
            "pi" => return Ok(Expr::Const(Constant::Pi)),
            "sqrt3" => return Ok(Expr::Const(Constant::Sqrt3)),
            _ => {}
        }
        if name == "pow" {
            self.expect(Tok::LParen)?;
            let base = self.expression()?;
            if *self.peek() != Tok::Comma {
                return Err(err(self.pos(), "pow takes two arguments"));
            }
            self.bump();
            let epos = self.pos();
            let negative = if *self.peek() == Tok::Minus {
                self.bump();
                true
            } else {
                false
            };
            let p = match self.bump() {
                Tok::Num(x) => {
                    if negative {
                        -x
                    } else {
                        x
                    }
                }
                other => {
                    return Err(err(
                        epos,
                        format!("pow exponent must be a number, found {}", describe(&other)),
                    ))
                }
            };
            self.expect(Tok::RParen)?;
            return Ok(Expr::PowReal(Box::new(base), p));
        }
        let f = Elementary::from_name(name)
            .ok_or_else(|| err(pos, format!("unknown identifier `{name}`")))?;
        self.expect(Tok::LParen)?;
        let arg = self.expression()?;
        if *self.peek() == Tok::Comma {
            return Err(err(self.pos(), format!("{name} takes one argument")));
        }
        self.expect(Tok::RParen)?;
        Ok(Expr::Call(f, Box::new(arg)))
    }
}

pub(crate) fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
    };
    let e = p.expression()?;
    match p.peek() {
        Tok::End => Ok(e),
        Tok::RParen => Err(err(p.pos(), "unbalanced `)`")),
        other => Err(err(p.pos(), format!("unexpected {}", describe(other)))),
    }
}
