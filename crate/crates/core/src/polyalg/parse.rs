//! Text and JSON forms of [`Polynomial`].
//!
//! The parser accepts ordinary arithmetic (`+ - * / ^`, parentheses,
//! juxtaposition as multiplication, decimal literals read exactly). Division
//! is only allowed by constants. The canonical printed form parses back to
//! the same polynomial.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::{Polynomial, Rational};
use super::PolyError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let ch = b[i] as char;
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit()) {
                i += 1;
            }
            let int_part = &s[start..i];
            let mut frac = "";
            if i < b.len() && b[i] == b'.' {
                i += 1;
                let fs = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                frac = &s[fs..i];
            }
            if int_part.is_empty() && frac.is_empty() {
                return Err(PolyError::Parse {
                    column: start + 1,
                    message: "lone decimal point".into(),
                });
            }
            let digits = format!("{int_part}{frac}");
            let n: BigInt = digits.parse().map_err(|_| PolyError::Parse {
                column: start + 1,
                message: "bad number".into(),
            })?;
            let d = num_traits::pow(BigInt::from(10), frac.len());
            out.push((start, Tok::Num(Rational::new(n, d))));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(ch) {
            out.push((i, Tok::Op(ch)));
            i += 1;
        } else {
            return Err(PolyError::Parse {
                column: i + 1,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| c + 1).unwrap_or(self.len + 1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Op('+')) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Op('-')) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    match d.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        Some(_) => return self.err("division by zero"),
                        None => return self.err("division by a non-constant"),
                    }
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n.is_integer() => {
                    self.pos += 1;
                    let e: u32 = n.to_integer().try_into().map_err(|_| PolyError::Parse {
                        column: self.column(),
                        message: "exponent too large".into(),
                    })?;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(n))
            }
            Some(Tok::Ident(v)) => {
                self.pos += 1;
                Ok(Polynomial::var(&v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

impl FromStr for Polynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks = lex(s)?;
        let mut p = Parser {
            toks,
            pos: 0,
            len: s.len(),
        };
        if p.peek().is_none() {
            return p.err("empty expression");
        }
        let e = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(e)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    exps: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    variables: Vec<String>,
    terms: Vec<JsonTerm>,
}

impl Polynomial {
    /// JSON value `{variables, terms: [{exps, num, den}]}`, terms descending.
    pub fn to_json_value(&self) -> serde_json::Value {
        let jp = JsonPoly {
            variables: self.vars().to_vec(),
            terms: self
                .terms()
                .map(|(m, c)| JsonTerm {
                    exps: m.exps().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        };
        serde_json::to_value(jp).expect("serialisable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serialisable")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self, PolyError> {
        let jp: JsonPoly =
            serde_json::from_value(v.clone()).map_err(|e| PolyError::Json(e.to_string()))?;
        let mut terms = Vec::with_capacity(jp.terms.len());
        for t in jp.terms {
            let n: BigInt = t.num.parse().map_err(|_| PolyError::Json(format!("bad numerator `{}`", t.num)))?;
            let d: BigInt = t.den.parse().map_err(|_| PolyError::Json(format!("bad denominator `{}`", t.den)))?;
            if d.is_zero() {
                return Err(PolyError::Json("zero denominator".into()));
            }
            terms.push((t.exps, Rational::new(n, d)));
        }
        Polynomial::from_terms(jp.variables, terms)
    }

    pub fn from_json(s: &str) -> Result<Self, PolyError> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| PolyError::Json(e.to_string()))?;
        Self::from_json_value(&v)
    }
}

/// Parses a rational literal such as `3`, `-2/5` or `0.125`.
pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let p: Polynomial = s.parse()?;
    p.constant_value().ok_or_else(|| PolyError::Parse {
        column: 1,
        message: format!("`{s}` is not a constant"),
    })
}
