//! Recursive-descent parser for matrix entries.
//!
//! ```text
//! expr     ::= sign? term (("+" | "-") term)*
//! term     ::= atom ("*" atom)*
//! atom     ::= rational | "z" | "z" "^" sign? int | "(" expr ")"
//! rational ::= int | int "/" int
//! ```
//!
//! `z` is `ζ_N` for the declared order `N`. Whitespace is ignored between
//! tokens and U+2212 is accepted as a minus sign.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::cyclotomic::{Cyclotomic, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Zero-based character offset of the offending input.
    pub position: usize,
    pub expected: Vec<&'static str>,
    pub found: Option<char>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at column {}: expected ", self.position + 1)?;
        for (i, e) in self.expected.iter().enumerate() {
            if i > 0 {
                f.write_str(if i + 1 == self.expected.len() { " or " } else { ", " })?;
            }
            f.write_str(e)?;
        }
        match self.found {
            Some(c) => write!(f, ", found {c:?}"),
            None => f.write_str(", found end of input"),
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    order: u64,
}

fn is_minus(c: char) -> bool {
    c == '-' || c == '\u{2212}'
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn error(&mut self, expected: Vec<&'static str>) -> ParseError {
        let found = self.peek();
        ParseError {
            position: self.pos,
            expected,
            found,
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(vec!["integer"]));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn sign(&mut self) -> bool {
        match self.peek() {
            Some(c) if is_minus(c) => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        }
    }

    fn expr(&mut self) -> Result<Cyclotomic, ParseError> {
        let negative = self.sign();
        let mut acc = self.term()?;
        if negative {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(c) if is_minus(c) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Cyclotomic, ParseError> {
        let mut acc = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = &acc * &self.atom()?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Cyclotomic, ParseError> {
        match self.peek() {
            Some('z') => {
                self.pos += 1;
                if self.peek() != Some('^') {
                    return Ok(Cyclotomic::root(self.order, 1));
                }
                self.pos += 1;
                let negative = match self.peek() {
                    Some(c) if is_minus(c) => {
                        self.pos += 1;
                        true
                    }
                    _ => false,
                };
                let mag = self.int()?;
                let n = BigInt::from(self.order);
                let mut e = mag % &n;
                if negative {
                    e = -e;
                }
                let e: i64 = e.try_into().expect("reduced exponent fits");
                Ok(Cyclotomic::root(self.order, e))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error(vec!["\")\"", "operator"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.int()?;
                let den = if self.peek() == Some('/') {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.int()?;
                    if d == BigInt::from(0) {
                        self.pos = at;
                        return Err(self.error(vec!["nonzero denominator"]));
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(Cyclotomic::from_rational(self.order, Rational::new(num, den)))
            }
            _ => Err(self.error(vec!["rational", "\"z\"", "\"(\""])),
        }
    }
}

/// Parses one entry as an element of `ℚ(ζ_order)`.
pub fn parse_expr(text: &str, order: u64) -> Result<Cyclotomic, ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        order,
    };
    let value = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error(vec!["\"+\"", "\"-\"", "\"*\"", "end of input"]));
    }
    Ok(value)
}
