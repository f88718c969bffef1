//! Reader for the ASCII formula and sequent grammar.
//!
//! ```text
//! formula := atom | "!" formula | "(" formula binop formula ")"
//! binop   := "*" | "@" | "-o" | "&" | "+"
//! atom    := "bot" | "1" | "p" DIGITS
//! sequent := formulas "|-" formulas
//! ```

use crate::formula::{bang, Formula, Sequent};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader { src: text.as_bytes(), pos: 0 }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, message: message.into() })
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

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            None => self.fail("expected a formula, found end of input"),
            Some(b'!') => {
                self.pos += 1;
                Ok(bang(self.formula()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let a = Arc::new(self.formula()?);
                let node: fn(Arc<Formula>, Arc<Formula>) -> Formula = if self.eat("*") {
                    Formula::Tensor
                } else if self.eat("@") {
                    Formula::Par
                } else if self.eat("-o") {
                    Formula::Lollipop
                } else if self.eat("&") {
                    Formula::With
                } else if self.eat("+") {
                    Formula::Plus
                } else {
                    return self.fail("expected one of * @ -o & +");
                };
                let b = Arc::new(self.formula()?);
                if !self.eat(")") {
                    return self.fail("expected ')'");
                }
                Ok(node(a, b))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Formula::One)
            }
            Some(b'b') => {
                if self.eat("bot") {
                    Ok(Formula::Bottom)
                } else {
                    self.fail("unknown atom")
                }
            }
            Some(b'p') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match digits.parse::<u32>() {
                    Ok(i) if i >= 1 => Ok(Formula::Literal(i)),
                    Ok(_) => {
                        self.pos = start;
                        self.fail("literal indices start at 1")
                    }
                    Err(_) => {
                        self.pos = start;
                        self.fail("expected literal index after 'p'")
                    }
                }
            }
            Some(c) => self.fail(format!("unexpected character '{}'", c as char)),
        }
    }

    fn formulas_until(&mut self, stop: Option<&str>) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        let done = |r: &mut Self| match stop {
            Some(tok) => {
                r.skip_ws();
                r.src[r.pos..].starts_with(tok.as_bytes())
            }
            None => r.at_end(),
        };
        if done(self) {
            return Ok(out);
        }
        loop {
            out.push(self.formula()?);
            if done(self) {
                return Ok(out);
            }
            if !self.eat(",") {
                return self.fail("expected ','");
            }
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut r = Reader::new(text);
    let f = r.formula()?;
    if !r.at_end() {
        return r.fail("trailing input after formula");
    }
    Ok(f)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut r = Reader::new(text);
    let lhs = r.formulas_until(Some("|-"))?;
    if !r.eat("|-") {
        return r.fail("expected '|-'");
    }
    let rhs = r.formulas_until(None)?;
    Ok(Sequent::new(lhs, rhs))
}

/// Non-empty, non-comment lines of a sequent file, with their 1-based line numbers.
pub fn sequent_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}
