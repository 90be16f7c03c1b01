//! Reader for human-written constants such as `5/2-(1/2)i√3` or `ζ^3 - ζ^5 + ζ`.
//!
//! Grammar (juxtaposition multiplies):
//!
//! ```text
//! sum     := ['+'|'-'|'−'] product (('+'|'-'|'−') product)*
//! product := power (('*'|'/')? power)*
//! power   := atom ('^' ['-'] digits)?
//! atom    := number | '(' sum ')' | 'i' | 'I' | '√2' | '√3' | '√6' | '√i'
//!          | 'sqrt2' | 'sqrt3' | 'sqrt6' | 'sqrti' | 'ζ' | 'zeta'
//! ```

use super::cycnum::parse_rational;
use super::CycNum;
use crate::error::ParseError;

const MAX_EXPONENT: i32 = 64;

struct Reader<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Reader<'a> {
    fn col(&self) -> usize {
        self.pos + 1
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(1, self.col(), msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        let n = w.chars().count();
        if self.pos + n > self.chars.len() {
            return false;
        }
        let got: String = self.chars[self.pos..self.pos + n].iter().map(|c| c.1).collect();
        if got == w {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<CycNum, ParseError> {
        let mut acc = match self.peek() {
            Some('-' | '−') => {
                self.pos += 1;
                -self.product()?
            }
            Some('+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.product()?;
                }
                Some('-' | '−') => {
                    self.pos += 1;
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_atom(&mut self) -> bool {
        match self.peek() {
            Some(c) => c.is_ascii_digit() || matches!(c, '(' | 'i' | 'I' | '√' | 's' | 'ζ' | 'z'),
            None => false,
        }
    }

    fn product(&mut self) -> Result<CycNum, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.col();
                    let d = self.power()?;
                    acc = acc
                        .checked_div(&d)
                        .map_err(|_| ParseError::new(1, at, "division by zero"))?;
                }
                _ if self.starts_atom() => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<CycNum, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let neg = if self.peek() == Some('-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let at = self.col();
            let digits = self.digits();
            let e: i32 = digits
                .parse()
                .map_err(|_| ParseError::new(1, at, "expected integer exponent"))?;
            if e > MAX_EXPONENT {
                return Err(ParseError::new(1, at, "exponent too large"));
            }
            let e = if neg { -e } else { e };
            return base
                .powi(e)
                .map_err(|_| ParseError::new(1, at, "zero to a negative power"));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().map(|c| c.1).collect()
    }

    fn atom(&mut self) -> Result<CycNum, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let at = self.col();
                let d = self.digits();
                parse_rational(&d)
                    .map(CycNum::from_rational)
                    .map_err(|m| ParseError::new(1, at, m))
            }
            Some(_) => {
                for (w, v) in [
                    ("√2", CycNum::sqrt2()),
                    ("√3", CycNum::sqrt3()),
                    ("√6", CycNum::sqrt6()),
                    ("√i", CycNum::sqrt_i()),
                    ("sqrt2", CycNum::sqrt2()),
                    ("sqrt3", CycNum::sqrt3()),
                    ("sqrt6", CycNum::sqrt6()),
                    ("sqrti", CycNum::sqrt_i()),
                    ("zeta", CycNum::zeta()),
                    ("ζ", CycNum::zeta()),
                    ("i", CycNum::i()),
                    ("I", CycNum::i()),
                ] {
                    if self.eat_word(w) {
                        return Ok(v);
                    }
                }
                let c = self.peek().unwrap_or(' ');
                Err(self.err(format!("unexpected `{c}`")))
            }
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parse a constant of K written in the notation above.
pub fn parse_constant(s: &str) -> Result<CycNum, ParseError> {
    let mut r = Reader {
        chars: s.char_indices().collect(),
        pos: 0,
        src: s,
    };
    if r.src.trim().is_empty() {
        return Err(ParseError::new(1, 1, "empty expression"));
    }
    let v = r.sum()?;
    if r.peek().is_some() {
        return Err(r.err("trailing input"));
    }
    Ok(v)
}
