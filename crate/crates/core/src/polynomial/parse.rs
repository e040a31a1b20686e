use num_bigint::BigInt;
use num_traits::Zero;

use super::{ExponentVector, Polynomial, MAX_EXPONENT};
use crate::error::{Error, Result};
use crate::Rational;

/// Accepted polynomial text grammar.
pub const GRAMMAR: &str = "\
expr   := term (('+' | '-') term)*
term   := unary ('*' unary)*
unary  := ('+' | '-') unary | power
power  := atom ('^' INT)?
atom   := INT | INT '/' INT | 'x' INT | '(' expr ')'
Variables are x1..xN; implicit multiplication is not allowed.";

/// Parses and fully expands `text` into canonical sparse form.
pub fn parse_polynomial(text: &str, num_vars: usize) -> Result<Polynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        n: num_vars,
    };
    let f = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = acc.try_mul(&rhs)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        if self.peek() == Some(b'-') {
            return Err(Error::NegativeExponent { pos: self.pos });
        }
        let k = self.integer()?;
        if k > BigInt::from(MAX_EXPONENT) {
            return Err(Error::ExponentOverflow);
        }
        let k: u32 = k.try_into().map_err(|_| Error::ExponentOverflow)?;
        if self.peek() == Some(b'^') {
            return Err(self.err("chained exponent; use parentheses"));
        }
        base.pow(k)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return Err(self.err("expected variable index after 'x'"));
                }
                let idx = self.integer()?;
                let idx: usize = idx.try_into().unwrap_or(usize::MAX);
                if idx == 0 || idx > self.n {
                    return Err(Error::VariableOutOfRange {
                        index: idx,
                        num_vars: self.n,
                    });
                }
                Ok(Polynomial::var(self.n, idx - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let save = self.pos;
                let mut value = Rational::from_integer(num);
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                        self.pos = save;
                        return Err(self.err("expected denominator after '/'"));
                    }
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    value /= Rational::from_integer(den);
                }
                Ok(Polynomial::monomial(ExponentVector::zeros(self.n), value))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }
}
