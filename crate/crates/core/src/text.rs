//! Shared text grammar for series and polynomials.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := 'O' '(' 'x' ['^' nat] ')' | product
//! product := atom (('*' atom) | ('/' int))*
//! atom    := int | var ['^' nat]
//! var     := 'x' | 'Y' nat | 'T' nat
//! ```
//!
//! Whitespace is ignored. Powers of `x` fold into the coefficient; `Y`/`T`
//! indices are 1-based and validated by the caller.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ring::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    fn new(pos: usize, message: impl Into<String>) -> Self {
        Self {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Y,
    T,
}

/// One parsed product: `num/den * x^x_exp * prod vars`.
#[derive(Debug, Clone)]
pub struct RawTerm {
    pub pos: usize,
    pub num: BigInt,
    pub den: BigInt,
    pub x_exp: u32,
    /// `(kind, 1-based index, exponent)`, possibly repeated.
    pub vars: Vec<(VarKind, usize, u32)>,
}

#[derive(Debug, Clone, Default)]
pub struct RawExpr {
    pub terms: Vec<RawTerm>,
    /// Exponent and position of a trailing `O(x^k)`.
    pub big_o: Option<(u32, usize)>,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected '{}'", c as char)))
        }
    }

    fn unexpected(&mut self, what: &str) -> ParseError {
        let pos = {
            self.skip_ws();
            self.pos
        };
        match self.src.get(pos) {
            Some(c) => ParseError::new(pos, format!("{what}, found '{}'", *c as char)),
            None => ParseError::new(pos, format!("{what}, found end of input")),
        }
    }

    fn digits(&mut self) -> Result<(&'a str, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected("expected a number"));
        }
        // ASCII digits only, so always valid UTF-8.
        Ok((
            std::str::from_utf8(&self.src[start..self.pos]).unwrap(),
            start,
        ))
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        let (s, start) = self.digits()?;
        s.parse::<u32>()
            .map_err(|_| ParseError::new(start, "exponent out of range"))
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        let (s, _) = self.digits()?;
        Ok(s.parse::<BigInt>().expect("digit string"))
    }
}

pub fn parse_expr(text: &str) -> Result<RawExpr, ParseError> {
    let mut lx = Lexer {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut out = RawExpr::default();
    if lx.peek().is_none() {
        return Err(ParseError::new(0, "empty expression"));
    }
    let mut negate = if lx.eat(b'-') {
        true
    } else {
        lx.eat(b'+');
        false
    };
    loop {
        if let Some((_, p)) = out.big_o {
            return Err(ParseError::new(p, "O(x^k) must be the last term"));
        }
        lx.skip_ws();
        let start = lx.pos;
        if lx.peek() == Some(b'O') {
            lx.pos += 1;
            lx.expect(b'(')?;
            lx.expect(b'x')?;
            let k = if lx.eat(b'^') { lx.nat()? } else { 1 };
            lx.expect(b')')?;
            if negate {
                return Err(ParseError::new(start, "O(x^k) cannot be negated"));
            }
            out.big_o = Some((k, start));
        } else {
            let mut term = parse_product(&mut lx)?;
            if negate {
                term.num = -term.num;
            }
            out.terms.push(term);
        }
        match lx.peek() {
            None => break,
            Some(b'+') => {
                lx.pos += 1;
                negate = false;
            }
            Some(b'-') => {
                lx.pos += 1;
                negate = true;
            }
            Some(_) => return Err(lx.unexpected("expected '+', '-', '*' or end of input")),
        }
    }
    Ok(out)
}

fn parse_product(lx: &mut Lexer<'_>) -> Result<RawTerm, ParseError> {
    lx.skip_ws();
    let mut term = RawTerm {
        pos: lx.pos,
        num: BigInt::one(),
        den: BigInt::one(),
        x_exp: 0,
        vars: Vec::new(),
    };
    parse_atom(lx, &mut term)?;
    loop {
        if lx.eat(b'*') {
            parse_atom(lx, &mut term)?;
        } else if lx.eat(b'/') {
            lx.skip_ws();
            let p = lx.pos;
            let d = lx.int()?;
            if d.is_zero() {
                return Err(ParseError::new(p, "division by zero"));
            }
            term.den *= d;
        } else {
            return Ok(term);
        }
    }
}

fn parse_atom(lx: &mut Lexer<'_>, term: &mut RawTerm) -> Result<(), ParseError> {
    match lx.peek() {
        Some(c) if c.is_ascii_digit() => {
            term.num *= lx.int()?;
            Ok(())
        }
        Some(b'x') => {
            lx.pos += 1;
            let e = power(lx)?;
            term.x_exp = term
                .x_exp
                .checked_add(e)
                .ok_or_else(|| ParseError::new(lx.pos, "exponent out of range"))?;
            Ok(())
        }
        Some(c @ (b'Y' | b'T')) => {
            lx.pos += 1;
            let at = lx.pos;
            if !lx.src.get(at).is_some_and(|b| b.is_ascii_digit()) {
                return Err(ParseError::new(
                    at,
                    format!("expected variable index after '{}'", c as char),
                ));
            }
            let idx = lx.nat()? as usize;
            let e = power(lx)?;
            let kind = if c == b'Y' { VarKind::Y } else { VarKind::T };
            term.vars.push((kind, idx, e));
            Ok(())
        }
        Some(c) if c.is_ascii_alphabetic() => {
            let start = lx.pos;
            while lx.pos < lx.src.len() && lx.src[lx.pos].is_ascii_alphanumeric() {
                lx.pos += 1;
            }
            let name = String::from_utf8_lossy(&lx.src[start..lx.pos]);
            Err(ParseError::new(start, format!("unknown variable '{name}'")))
        }
        _ => Err(lx.unexpected("expected a number or variable")),
    }
}

fn power(lx: &mut Lexer<'_>) -> Result<u32, ParseError> {
    if lx.eat(b'^') {
        lx.nat()
    } else {
        Ok(1)
    }
}

/// Joins `(coefficient, monomial)` pairs into `a*m1 + b*m2 - ...`; an empty
/// monomial string denotes the constant monomial.
pub fn format_terms<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (&'a Scalar, String)>,
{
    let mut out = String::new();
    for (c, mono) in terms {
        let neg = c.is_negative();
        let abs = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match (abs.is_one(), mono.is_empty()) {
            (_, true) => write!(out, "{abs}").unwrap(),
            (true, false) => out.push_str(&mono),
            (false, false) => write!(out, "{abs}*{mono}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn format_power(name: &str, e: u32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_products_and_signs() {
        let e = parse_expr("-3/4*x^12*Y1^2 + x/2 - T2").unwrap();
        assert_eq!(e.terms.len(), 3);
        assert_eq!(e.terms[0].num, BigInt::from(-3));
        assert_eq!(e.terms[0].den, BigInt::from(4));
        assert_eq!(e.terms[0].x_exp, 12);
        assert_eq!(e.terms[0].vars, vec![(VarKind::Y, 1, 2)]);
        assert_eq!(e.terms[1].den, BigInt::from(2));
        assert_eq!(e.terms[2].vars, vec![(VarKind::T, 2, 1)]);
    }

    #[test]
    fn big_o_is_trailing_only() {
        let e = parse_expr("x^3 + 6*x^18 + O(x^38)").unwrap();
        assert_eq!(e.big_o.map(|(k, _)| k), Some(38));
        assert!(parse_expr("O(x^3) + x").is_err());
        assert!(parse_expr("x - O(x^3)").is_err());
    }

    #[test]
    fn reports_error_positions() {
        let err = parse_expr("Y1^^2").unwrap_err();
        assert_eq!(err.pos, 3);
        let err = parse_expr("Y1 + Z3").unwrap_err();
        assert_eq!(err.pos, 5);
        assert!(err.message.contains("unknown variable"));
        assert!(parse_expr("").is_err());
        assert!(parse_expr("x +").is_err());
        assert!(parse_expr("x/0").is_err());
        assert!(parse_expr("Y").is_err());
    }
}
