//! Right-hand-side expressions `f(t, u)`.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := term (("+" | "-") term)* ;
//! term   := unary (("*" | "/") unary)* ;
//! unary  := "-" unary | factor ;
//! factor := base ("^" number)? ;
//! base   := number | "t" | "u" | "(" expr ")" | ident "(" expr ")" ;
//! ident  := "exp" | "ln" | "sqrt" ;
//! ```
//!
//! The exponent literal may carry a leading minus sign (`u^-1`).

mod lower;

use std::fmt;

pub use lower::{evaluate_jet, DomainWarning, LoweringConfig, LoweringContext};

use crate::elementary::OuterFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        match name {
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }

    pub fn outer(self) -> OuterFunction {
        match self {
            Func::Exp => OuterFunction::Exp(1.0),
            Func::Ln => OuterFunction::Ln,
            Func::Sqrt => OuterFunction::sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    VarT,
    VarU,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Apply(Func, Box<Expr>),
}

impl Expr {
    /// Plain pointwise evaluation.
    pub fn eval(&self, t: f64, u: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::VarT => t,
            Expr::VarU => u,
            Expr::Neg(a) => -a.eval(t, u),
            Expr::Add(a, b) => a.eval(t, u) + b.eval(t, u),
            Expr::Sub(a, b) => a.eval(t, u) - b.eval(t, u),
            Expr::Mul(a, b) => a.eval(t, u) * b.eval(t, u),
            Expr::Div(a, b) => a.eval(t, u) / b.eval(t, u),
            Expr::Pow(a, e) => a.eval(t, u).powf(*e),
            Expr::Apply(f, a) => {
                let x = a.eval(t, u);
                match f {
                    Func::Exp => x.exp(),
                    Func::Ln => x.ln(),
                    Func::Sqrt => x.sqrt(),
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if c.is_sign_negative() => 0,
            _ => 5,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Const(c) => write!(f, "{c}")?,
            Expr::VarT => f.write_str("t")?,
            Expr::VarU => f.write_str("u")?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_prec(f, 3)?;
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_prec(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) {
                    " + "
                } else {
                    " - "
                })?;
                b.write_prec(f, 2)?;
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_prec(f, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) {
                    " * "
                } else {
                    " / "
                })?;
                b.write_prec(f, 3)?;
            }
            Expr::Pow(a, e) => {
                a.write_prec(f, 5)?;
                write!(f, "^{e}")?;
            }
            Expr::Apply(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_prec(f, 0)?;
                f.write_str(")")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Prints with the fewest parentheses that parse back to the same tree.
/// Negative constants are printed as `(-c)`, which reparses as a negation.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

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
    Invalid,
    Eof,
}

const OPERAND: &[&str] = &["number", "`t`", "`u`", "`(`", "function name", "`-`"];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    tok: Tok,
    tok_at: usize,
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        src: text,
        pos: 0,
        tok: Tok::Eof,
        tok_at: 0,
    };
    p.advance();
    let e = p.expr()?;
    if p.tok != Tok::Eof {
        return Err(p.expected(&["operator", "end of input"]));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn advance(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_at = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            self.tok = Tok::Eof;
            return;
        };
        self.tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let end = self.number_end();
                let v = self.src[self.pos..end].parse().unwrap_or(f64::NAN);
                self.pos = end;
                Tok::Num(v)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let end = self.pos
                    + bytes[self.pos..]
                        .iter()
                        .take_while(|b| b.is_ascii_alphanumeric() || **b == b'_')
                        .count();
                let name = self.src[self.pos..end].to_string();
                self.pos = end;
                Tok::Ident(name)
            }
            _ => Tok::Invalid,
        };
        if !matches!(self.tok, Tok::Num(_) | Tok::Ident(_) | Tok::Invalid) {
            self.pos += 1;
        }
    }

    /// End of `digits ("." digits*)? ([eE] [+-]? digits)?` starting at `pos`.
    fn number_end(&self) -> usize {
        let b = self.src.as_bytes();
        let digits = |mut i: usize| {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            i
        };
        let mut i = digits(self.pos);
        if i < b.len() && b[i] == b'.' {
            i = digits(i + 1);
        }
        if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
            let mut j = i + 1;
            if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                j += 1;
            }
            let k = digits(j);
            if k > j {
                i = k;
            }
        }
        i
    }

    fn expected(&self, what: &[&str]) -> Error {
        Error::Syntax {
            offset: self.tok_at,
            expected: what.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => Expr::Add,
                Tok::Minus => Expr::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            lhs = op(Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Star => Expr::Mul,
                Tok::Slash => Expr::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.unary()?;
            lhs = op(Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.tok == Tok::Minus {
            self.advance();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.tok != Tok::Caret {
            return Ok(base);
        }
        self.advance();
        let negative = self.tok == Tok::Minus;
        if negative {
            self.advance();
        }
        match self.tok {
            Tok::Num(v) => {
                self.advance();
                Ok(Expr::Pow(Box::new(base), if negative { -v } else { v }))
            }
            Tok::Ident(_) | Tok::LParen | Tok::Minus => Err(Error::NonLiteralExponent {
                offset: self.tok_at,
            }),
            _ => Err(self.expected(&["number"])),
        }
    }

    fn base(&mut self) -> Result<Expr> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.advance();
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.close_paren()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.tok_at;
                match name.as_str() {
                    "t" => {
                        self.advance();
                        Ok(Expr::VarT)
                    }
                    "u" => {
                        self.advance();
                        Ok(Expr::VarU)
                    }
                    _ => {
                        let func = Func::from_name(&name)
                            .ok_or(Error::UnknownFunction { name, offset: at })?;
                        self.advance();
                        if self.tok != Tok::LParen {
                            return Err(self.expected(&["`(`"]));
                        }
                        self.advance();
                        let arg = self.expr()?;
                        self.close_paren()?;
                        Ok(Expr::Apply(func, Box::new(arg)))
                    }
                }
            }
            _ => Err(self.expected(OPERAND)),
        }
    }

    fn close_paren(&mut self) -> Result<()> {
        if self.tok != Tok::RParen {
            return Err(self.expected(&["operator", "`)`"]));
        }
        self.advance();
        Ok(())
    }
}
