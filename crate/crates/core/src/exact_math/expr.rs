//! Shared expression grammar for polynomials and differential operators.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ['^' integer]
//! atom   := integer ['/' integer] | identifier | '(' expr ')'
//! ```
//!
//! Products keep their left-to-right order so the same tree can be
//! evaluated in a noncommutative algebra.

use super::Rational;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    /// 1-based character column in the parsed string.
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var(String),
    Neg(Box<Expr>),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, u32),
}

/// Target algebra for evaluating an [`Expr`].
pub trait ExprAlgebra: Sized {
    type Error: From<ParseError>;

    fn from_rational(&self, c: &Rational) -> Self;
    fn from_symbol(&self, name: &str) -> Result<Self, Self::Error>;
    fn add(a: Self, b: Self) -> Self;
    fn neg(a: Self) -> Self;
    /// `a * b` with `a` on the left.
    fn mul(a: Self, b: Self) -> Self;

    fn pow(a: &Self, k: u32, one: Self) -> Self
    where
        Self: Clone,
    {
        let mut acc = one;
        for _ in 0..k {
            acc = Self::mul(acc, a.clone());
        }
        acc
    }
}

impl Expr {
    /// Evaluates the tree; `proto` supplies the ambient context (variable
    /// lists) for constants and symbols.
    pub fn eval<A: ExprAlgebra + Clone>(&self, proto: &A) -> Result<A, A::Error> {
        Ok(match self {
            Expr::Num(c) => proto.from_rational(c),
            Expr::Var(name) => proto.from_symbol(name)?,
            Expr::Neg(e) => A::neg(e.eval(proto)?),
            Expr::Sum(parts) => {
                let mut acc = proto.from_rational(&Rational::zero());
                for p in parts {
                    acc = A::add(acc, p.eval(proto)?);
                }
                acc
            }
            Expr::Product(parts) => {
                let mut acc = proto.from_rational(&Rational::from_integer(1.into()));
                for p in parts {
                    acc = A::mul(acc, p.eval(proto)?);
                }
                acc
            }
            Expr::Pow(base, k) => {
                let b = base.eval(proto)?;
                A::pow(&b, *k, proto.from_rational(&Rational::from_integer(1.into())))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((Tok::Int(text.parse().expect("digits")), col));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError {
                    message: format!("unexpected character '{other}'"),
                    column: col,
                })
            }
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            message: message.into(),
            column: self.col(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut parts = Vec::new();
        let first = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Expr::Neg(Box::new(self.term()?))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        parts.push(first);
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    parts.push(self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    parts.push(Expr::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Expr::Sum(parts)
        })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut parts = vec![self.unary()?];
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Expr::Product(parts)
        })
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(k)) => {
                    let k = match k.to_u32() {
                        Some(k) => k,
                        None => return self.err("exponent too large"),
                    };
                    self.pos += 1;
                    return Ok(Expr::Pow(Box::new(base), k));
                }
                _ => return self.err("expected a non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            self.pos += 1;
                            Ok(Expr::Num(Rational::new(n, d)))
                        }
                        Some(Tok::Int(_)) => self.err("zero denominator"),
                        _ => self.err("expected an integer denominator after '/'"),
                    }
                } else {
                    Ok(Expr::Num(Rational::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Var(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression into its tree.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: src.chars().count() + 1,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_literals_and_precedence() {
        let e = parse_expr("-1/2*x^2 + 3").unwrap();
        match e {
            Expr::Sum(parts) => assert_eq!(parts.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reports_column_of_error() {
        let err = parse_expr("x + * y").unwrap_err();
        assert_eq!(err.column, 5);
        let err = parse_expr("x $ y").unwrap_err();
        assert_eq!(err.column, 3);
        assert!(parse_expr("3/0").is_err());
        assert!(parse_expr("(x+1").is_err());
    }
}
