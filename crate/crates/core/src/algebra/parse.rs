//! A small infix syntax for elements, used by tests and the command line:
//! `1 - q:c*p:b + 1/2*hbar*q:e^2 - 3*e^[1,0]*(q:a + t:t1)`.
//!
//! Juxtaposed factors are multiplied left to right with the product of the
//! flavor, so `p:a*q:a` is reordered with the Weyl relation in full SFT.

use std::iter::Peekable;
use std::str::Chars;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{mul, pow, Element, Flavor, GroupElement, Monomial};
use crate::error::{Error, Result};
use crate::index::AlgebraSignature;
use crate::Rational;

impl Element {
    pub fn parse(flavor: Flavor, sig: &AlgebraSignature, text: &str) -> Result<Element> {
        let mut p = Parser { chars: text.chars().peekable(), sig, flavor, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if let Some(c) = p.peek() {
            return Err(p.error(format!("unexpected `{c}`")));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    chars: Peekable<Chars<'a>>,
    sig: &'a AlgebraSignature,
    flavor: Flavor,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: String) -> Error {
        Error::Parse(format!("column {}: {msg}", self.pos + 1))
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.bump() {
            Some(c) if c == want => Ok(()),
            other => Err(self.error(format!("expected `{want}`, found {other:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Element> {
        self.skip_ws();
        let mut negative = false;
        if let Some(c @ ('+' | '-')) = self.peek() {
            self.bump();
            negative = c == '-';
        }
        let mut acc = self.term()?;
        if negative {
            acc = -acc;
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Element> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.bump();
                    let rhs = self.power()?;
                    acc = mul(self.sig, &acc, &rhs)?;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == '(' => {
                    let rhs = self.power()?;
                    acc = mul(self.sig, &acc, &rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Element> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let k = self.integer()?;
            let k = u32::try_from(k).map_err(|_| self.error("bad exponent".into()))?;
            return pow(self.sig, &base, k);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Element> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut value = Rational::from_integer(num);
                if self.peek() == Some('/') {
                    self.bump();
                    let den = self.integer()?;
                    if den == BigInt::from(0) {
                        return Err(self.error("zero denominator".into()));
                    }
                    value /= Rational::from_integer(den);
                }
                Ok(Element::constant(self.flavor, self.sig, value))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let word = self.word();
                if word == "e" && self.peek() == Some('^') {
                    self.bump();
                    return self.group();
                }
                let var = self.sig.parse_var(&word).map_err(|e| self.error(e.to_string()))?;
                Element::var(self.flavor, self.sig, var)
            }
            other => Err(self.error(format!("unexpected {other:?}"))),
        }
    }

    fn group(&mut self) -> Result<Element> {
        self.expect('[')?;
        let mut coords = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() == Some(']') {
                self.bump();
                break;
            }
            let negative = self.peek() == Some('-');
            if negative {
                self.bump();
            }
            let v = i64::try_from(self.integer()?).map_err(|_| self.error("overflow".into()))?;
            coords.push(if negative { -v } else { v });
            self.skip_ws();
            if self.peek() == Some(',') {
                self.bump();
            }
        }
        let g = GroupElement::new(coords);
        self.sig.check_group(&g)?;
        let m = Monomial::one(self.sig.h2rank()).with_group(g);
        Element::from_terms(self.flavor, self.sig, [(m, Rational::one())])
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == ':' || c == '.' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn integer(&mut self) -> Result<BigInt> {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        s.parse().map_err(|_| self.error("expected an integer".into()))
    }
}
