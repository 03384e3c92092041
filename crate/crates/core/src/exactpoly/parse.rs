//! Text grammar for polynomials and series: `3/2*Y^2*Z0 - 1`, `2Y`, `(1+X)^3`.
//!
//! Identifiers match `[A-Za-z][A-Za-z0-9_]*`. Juxtaposition multiplies, so
//! `*` may be omitted between a coefficient and a symbol.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::polynomial::Polynomial;
use super::scalar::Field;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Tok::Int(digits.parse().expect("digits")));
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?} in {s:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    src: String,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} in {:?}", self.src)))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.peek() == Some(&Tok::Plus) {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Int(e)) => {
                    let e: u32 = e.try_into().or_else(|_| self.err("exponent too large"))?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return self.err("expected a non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Tok::Int(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Int(d)) if d != BigInt::from(0) => Ok(Expr::Num(BigRational::new(n, d))),
                        _ => self.err("expected a nonzero integer denominator"),
                    }
                } else {
                    Ok(Expr::Num(BigRational::from_integer(n)))
                }
            }
            Some(Tok::Ident(s)) => Ok(Expr::Var(s)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => self.err("expected ')'"),
                }
            }
            _ => self.err("expected a number, symbol or '('"),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        src: s.to_string(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// A ring in which parsed expressions can be evaluated.
pub trait ExprTarget {
    type Value: Clone;
    fn constant(&self, q: &BigRational) -> Result<Self::Value>;
    fn variable(&self, name: &str) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: &Self::Value) -> Result<Self::Value>;

    fn pow(&self, a: &Self::Value, e: u32) -> Result<Self::Value> {
        let mut acc = self.constant(&BigRational::from_integer(BigInt::from(1)))?;
        for _ in 0..e {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }
}

impl Expr {
    /// Every identifier occurring in the expression.
    pub fn variables(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        let mut stack = vec![self];
        while let Some(e) = stack.pop() {
            match e {
                Expr::Num(_) => {}
                Expr::Var(v) => {
                    out.insert(v.clone());
                }
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                Expr::Neg(a) | Expr::Pow(a, _) => stack.push(a),
            }
        }
        out
    }

    pub fn eval<T: ExprTarget>(&self, t: &T) -> Result<T::Value> {
        match self {
            Expr::Num(q) => t.constant(q),
            Expr::Var(v) => t.variable(v),
            Expr::Add(a, b) => t.add(&a.eval(t)?, &b.eval(t)?),
            Expr::Sub(a, b) => t.sub(&a.eval(t)?, &b.eval(t)?),
            Expr::Mul(a, b) => t.mul(&a.eval(t)?, &b.eval(t)?),
            Expr::Neg(a) => t.neg(&a.eval(t)?),
            Expr::Pow(a, e) => t.pow(&a.eval(t)?, *e),
        }
    }
}

struct PolyTarget<'a> {
    field: Field,
    names: &'a [String],
}

impl ExprTarget for PolyTarget<'_> {
    type Value = Polynomial;

    fn constant(&self, q: &BigRational) -> Result<Polynomial> {
        let c = self
            .field
            .from_rational(q)
            .ok_or_else(|| Error::Parse(format!("{q} is undefined in {}", self.field)))?;
        Ok(Polynomial::constant(self.field, self.names.len(), c))
    }

    fn variable(&self, name: &str) -> Result<Polynomial> {
        let i = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
        Ok(Polynomial::var(self.field, self.names.len(), i))
    }

    fn add(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        Ok(a.add(b))
    }

    fn sub(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        Ok(a.sub(b))
    }

    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        Ok(a.mul(b))
    }

    fn neg(&self, a: &Polynomial) -> Result<Polynomial> {
        Ok(a.neg())
    }

    fn pow(&self, a: &Polynomial, e: u32) -> Result<Polynomial> {
        Ok(a.pow(e))
    }
}

/// Parse a polynomial over `field` in the named variables.
pub fn parse_polynomial(s: &str, field: Field, names: &[String]) -> Result<Polynomial> {
    parse_expr(s)?.eval(&PolyTarget { field, names })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_rational_coefficients_and_powers() {
        let n = names(&["Y", "Z0"]);
        let p = parse_polynomial("3/2*Y^2*Z0 - 1", Field::Rational, &n).unwrap();
        assert_eq!(p.render(&n), "3/2*Y^2*Z0 - 1");
        let q = parse_polynomial("2Y^2 Z0", Field::Rational, &n).unwrap();
        assert_eq!(q.render(&n), "2*Y^2*Z0");
    }

    #[test]
    fn parentheses_and_unary_minus() {
        let n = names(&["X"]);
        let p = parse_polynomial("-(1 + X)^2", Field::Rational, &n).unwrap();
        assert_eq!(p.render(&n), "-X^2 - 2*X - 1");
    }

    #[test]
    fn modular_constants() {
        let n = names(&["t"]);
        let f = Field::prime(5).unwrap();
        let p = parse_polynomial("1/2*t + 7", f, &n).unwrap();
        assert_eq!(p.render(&n), "3*t + 2");
        assert!(parse_polynomial("1/5", f, &n).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let n = names(&["X"]);
        assert!(parse_polynomial("X +", Field::Rational, &n).is_err());
        assert!(parse_polynomial("Q", Field::Rational, &n).is_err());
        assert!(parse_polynomial("X^-1", Field::Rational, &n).is_err());
        assert!(parse_polynomial("", Field::Rational, &n).is_err());
        assert!(parse_polynomial("X $", Field::Rational, &n).is_err());
    }
}
