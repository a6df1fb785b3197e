//! Arithmetic expressions over named parameters: the coefficient language
//! of catalog files.
//!
//! Literals are integers; fractions are written as quotients, so parsing a
//! printed expression always reproduces the same tree.  `sqrt` is the only
//! function.  Evaluation happens in an environment binding every parameter
//! to a rational, and lands in the scalar tower.

use crate::scalar::{Rat, Scalar, ScalarError};
use num::bigint::BigInt;
use num::traits::ToPrimitive;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at offset {offset}: {message}")]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError {
        offset,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Param(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Sqrt(Box<Expr>),
}

/// Environment binding parameter names to rational values.
pub type ParamEnv = BTreeMap<String, Rat>;

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Int(BigInt::from(n))
    }

    pub fn param(name: &str) -> Expr {
        Expr::Param(name.to_string())
    }

    pub fn eval(&self, env: &ParamEnv) -> Result<Scalar, EvalError> {
        match self {
            Expr::Int(n) => Ok(Scalar::Rational(Rat::from_integer(n.clone()))),
            Expr::Param(p) => env
                .get(p)
                .map(|r| Scalar::Rational(r.clone()))
                .ok_or_else(|| EvalError::UnboundParameter(p.clone())),
            Expr::Neg(e) => Ok(-e.eval(env)?),
            Expr::Add(a, b) => Ok(a.eval(env)?.try_add(&b.eval(env)?)?),
            Expr::Sub(a, b) => Ok(a.eval(env)?.try_sub(&b.eval(env)?)?),
            Expr::Mul(a, b) => Ok(a.eval(env)?.try_mul(&b.eval(env)?)?),
            Expr::Div(a, b) => Ok(a.eval(env)?.try_div(&b.eval(env)?)?),
            Expr::Pow(b, k) => Ok(b.eval(env)?.try_pow(*k)?),
            Expr::Sqrt(e) => Ok(e.eval(env)?.sqrt()?),
        }
    }

    /// Names of all parameters appearing in the expression.
    pub fn params(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_params(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Param(p) => out.push(p.clone()),
            Expr::Neg(e) | Expr::Sqrt(e) | Expr::Pow(e, _) => e.collect_params(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Int(_) | Expr::Param(_) | Expr::Sqrt(..) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Param(p) => write!(f, "{p}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_prec(f, 3)
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, "+")?;
                b.fmt_prec(f, 2)
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, "-")?;
                b.fmt_prec(f, 2)
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "/")?;
                b.fmt_prec(f, 3)
            }
            Expr::Pow(b, k) => {
                b.fmt_prec(f, 5)?;
                write!(f, "^{k}")
            }
            Expr::Sqrt(e) => {
                write!(f, "sqrt(")?;
                e.fmt_prec(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Comparison operators usable in constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        };
        write!(f, "{s}")
    }
}

/// A comparison between two expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: Expr,
}

impl Constraint {
    pub fn holds(&self, env: &ParamEnv) -> Result<bool, EvalError> {
        let l = self.lhs.eval(env)?;
        let r = self.rhs.eval(env)?;
        let ord = l.cmp_real(&r).map_err(EvalError::Scalar)?;
        Ok(match self.op {
            CmpOp::Eq => ord == std::cmp::Ordering::Equal,
            CmpOp::Ne => ord != std::cmp::Ordering::Equal,
            CmpOp::Lt => ord == std::cmp::Ordering::Less,
            CmpOp::Le => ord != std::cmp::Ordering::Greater,
            CmpOp::Gt => ord == std::cmp::Ordering::Greater,
            CmpOp::Ge => ord != std::cmp::Ordering::Less,
        })
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

/// Tokenises a string, keeping the byte offset of each token.
pub fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = input[start..i].parse().unwrap();
                out.push((Tok::Num(n), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(input[start..i].to_string()), start));
            }
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            '=' => {
                out.push((Tok::Eq, i));
                i += 1;
            }
            '!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push((Tok::Ne, i));
                    i += 2;
                } else {
                    return err(i, "expected `=` after `!`");
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push((Tok::Le, i));
                    i += 2;
                } else {
                    out.push((Tok::Lt, i));
                    i += 1;
                }
            }
            '>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push((Tok::Ge, i));
                    i += 2;
                } else {
                    out.push((Tok::Gt, i));
                    i += 1;
                }
            }
            other => return err(i, format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ExprError> {
        if self.peek() == Some(t) {
            self.pos += 1;
            Ok(())
        } else {
            err(self.offset(), format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = Expr::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let neg = if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            let off = self.offset();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let k = n
                        .to_i64()
                        .filter(|k| *k <= 64)
                        .ok_or_else(|| ExprError {
                            offset: off,
                            message: "exponent out of range".into(),
                        })?;
                    Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }))
                }
                _ => err(off, "expected integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Expr::Int(n)),
            Some(Tok::Ident(name)) => {
                if self.peek() == Some(&Tok::LParen) {
                    if name != "sqrt" {
                        return err(off, format!("unknown function `{name}`"));
                    }
                    self.pos += 1;
                    let inner = self.expr()?;
                    self.expect(&Tok::RParen, "closing `)`")?;
                    Ok(Expr::Sqrt(Box::new(inner)))
                } else {
                    Ok(Expr::Param(name))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "closing `)`")?;
                Ok(inner)
            }
            _ => err(off, "expected a number, name, or parenthesised expression"),
        }
    }
}

/// Parses a complete expression; trailing tokens are an error.
pub fn parse_expr(input: &str) -> Result<Expr, ExprError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: input.len(),
    };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return err(p.offset(), "unexpected trailing input");
    }
    Ok(e)
}

/// Parses `expr cmp expr`.
pub fn parse_constraint(input: &str) -> Result<Constraint, ExprError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: input.len(),
    };
    let lhs = p.expr()?;
    let off = p.offset();
    let op = match p.bump() {
        Some(Tok::Eq) => CmpOp::Eq,
        Some(Tok::Ne) => CmpOp::Ne,
        Some(Tok::Lt) => CmpOp::Lt,
        Some(Tok::Le) => CmpOp::Le,
        Some(Tok::Gt) => CmpOp::Gt,
        Some(Tok::Ge) => CmpOp::Ge,
        _ => return err(off, "expected a comparison operator"),
    };
    let rhs = p.expr()?;
    if p.pos != toks.len() {
        return err(p.offset(), "unexpected trailing input");
    }
    Ok(Constraint { lhs, op, rhs })
}

/// Splits a token list into comma-separated expressions, for span lists.
pub fn parse_expr_list(input: &str) -> Result<Vec<Expr>, ExprError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: input.len(),
    };
    let mut out = vec![p.expr()?];
    while p.peek() == Some(&Tok::Comma) {
        p.pos += 1;
        out.push(p.expr()?);
    }
    if p.pos != toks.len() {
        return err(p.offset(), "unexpected trailing input");
    }
    Ok(out)
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Slash => write!(f, "/"),
            Tok::Caret => write!(f, "^"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Comma => write!(f, ","),
            Tok::Eq => write!(f, "="),
            Tok::Ne => write!(f, "!="),
            Tok::Lt => write!(f, "<"),
            Tok::Le => write!(f, "<="),
            Tok::Gt => write!(f, ">"),
            Tok::Ge => write!(f, ">="),
        }
    }
}
