//! Text grammar for forms on a chart.
//!
//! ```text
//! sum     := ['-'] product (('+' | '-') product)*
//! product := power (('*' | '^' | '∧' | '/') power)*
//! power   := atom ['^' ['-'] integer]
//! atom    := integer | name | 'd' name | '(' sum ')'
//! ```
//!
//! `^` followed by an integer is a power, otherwise it is a wedge. `*` is
//! also a wedge (the product of a function with a form). Division is only by
//! a single nonzero monomial function. A name is `[A-Za-z_][A-Za-z0-9_]*`
//! followed by any number of primes; `dX` is a differential when `X` is a
//! chart variable and `dX` itself is not.

use std::sync::Arc;

use super::form::{Chart, SymbolicForm};
use super::laurent::LaurentPoly;
use crate::exactalg::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(num_bigint::BigInt),
    Name(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|p| p.1).collect();
            out.push((pos, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i].1 == '\'' {
                i += 1;
            }
            out.push((pos, Tok::Name(chars[start..i].iter().map(|p| p.1).collect())));
        } else if "+-*/^()∧".contains(c) {
            out.push((pos, Tok::Op(if c == '∧' { '^' } else { c })));
            i += 1;
        } else {
            return Err(ParseError { pos, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    chart: &'a Arc<Chart>,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn combine(&self, a: SymbolicForm, b: SymbolicForm, negate: bool) -> Result<SymbolicForm, ParseError> {
        if !a.is_zero() && !b.is_zero() && a.degree() != b.degree() {
            return self.err(format!("cannot add forms of degree {} and {}", a.degree(), b.degree()));
        }
        Ok(if negate { a.sub(&b) } else { a.add(&b) })
    }

    fn sum(&mut self) -> Result<SymbolicForm, ParseError> {
        let negate_first = self.eat('-');
        let mut acc = self.product()?;
        if negate_first {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                let rhs = self.product()?;
                acc = self.combine(acc, rhs, false)?;
            } else if self.eat('-') {
                let rhs = self.product()?;
                acc = self.combine(acc, rhs, true)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<SymbolicForm, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') || self.eat('^') {
                let rhs = self.power()?;
                acc = acc.wedge(&rhs);
            } else if self.eat('/') {
                let rhs = self.power()?;
                let inv = rhs
                    .as_function()
                    .and_then(|f| f.inverse())
                    .map_or_else(|| self.err("division only by a nonzero monomial function"), Ok)?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<SymbolicForm, ParseError> {
        let base = self.atom()?;
        // `^` binds as a power only when an integer follows
        let is_power = matches!(self.toks.get(self.at), Some((_, Tok::Op('^'))))
            && match self.toks.get(self.at + 1) {
                Some((_, Tok::Int(_))) => true,
                Some((_, Tok::Op('-'))) => matches!(self.toks.get(self.at + 2), Some((_, Tok::Int(_)))),
                _ => false,
            };
        if !is_power {
            return Ok(base);
        }
        self.at += 1;
        let negative = self.eat('-');
        let Some(Tok::Int(n)) = self.peek().cloned() else { unreachable!() };
        self.at += 1;
        let n: i32 = match i32::try_from(&n) {
            Ok(n) if n <= 64 => n,
            _ => return self.err("exponent too large"),
        };
        let n = if negative { -n } else { n };
        let Some(f) = base.as_function() else {
            return self.err("only functions can be raised to a power");
        };
        match f.pow(n) {
            Some(p) => Ok(SymbolicForm::function(self.chart, p)),
            None => self.err("negative power of a non-monomial"),
        }
    }

    fn atom(&mut self) -> Result<SymbolicForm, ParseError> {
        let n = self.chart.dim();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.at += 1;
                Ok(SymbolicForm::function(self.chart, LaurentPoly::constant(n, Rat::from_integer(v))))
            }
            Some(Tok::Name(name)) => {
                if let Some(i) = self.chart.index_of(&name) {
                    self.at += 1;
                    return Ok(SymbolicForm::function(self.chart, LaurentPoly::var(n, i)));
                }
                if let Some(i) = name.strip_prefix('d').and_then(|rest| self.chart.index_of(rest)) {
                    self.at += 1;
                    return Ok(SymbolicForm::dvar(self.chart, i));
                }
                self.err(format!("unknown variable {name:?}"))
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a form on `chart`.
pub fn parse_form(src: &str, chart: &Arc<Chart>) -> Result<SymbolicForm, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, chart, end: src.len() };
    let out = p.sum()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a function (0-form) on `chart`.
pub fn parse_poly(src: &str, chart: &Arc<Chart>) -> Result<LaurentPoly, ParseError> {
    let f = parse_form(src, chart)?;
    f.as_function().ok_or(ParseError { pos: 0, msg: format!("expected a function, found a {}-form", f.degree()) })
}
