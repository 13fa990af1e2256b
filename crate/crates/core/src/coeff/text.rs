//! Reader for the canonical rational-function encoding, e.g.
//! `(-1 + q)/(1 - t)` or `1/2*q^-1*u`. Any well-formed arithmetic in
//! integers and variables is accepted; printing the result gives the
//! canonical string back.

use num_bigint::BigInt;

use super::{BigRat, RatFunc};
use crate::error::{Error, Result};

struct Reader<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            input: self.src.to_string(),
            message: format!("{} at byte {}", msg.into(), self.pos),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.factor()?;
            } else if self.eat(b'/') {
                let d = self.factor()?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                acc = &acc / &d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let n = self.integer()?;
            let e: i32 = match n.try_into() {
                Ok(e) => e,
                Err(_) => return self.err("exponent too large"),
            };
            return base.pow(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(RatFunc::from_rational(BigRat::from_integer(
                self.integer()?,
            ))),
            Some(c) if c.is_ascii_lowercase() => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric()
                        || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                RatFunc::named(&self.src[start..self.pos])
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub(crate) fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    let mut r = Reader {
        src: s,
        bytes: s.as_bytes(),
        pos: 0,
    };
    let v = r.expr()?;
    if r.peek().is_some() {
        return r.err("trailing input");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings_round_trip() {
        for s in [
            "0",
            "1",
            "-1/2",
            "-1 + q",
            "(-1 + q)/(1 - t)",
            "(1/2 - 1/2*q)/(1 - t)",
            "q^-1",
            "(-q^-1)/(1 - t)",
            "1 + t + q + t^2 + q*t + q^2",
        ] {
            let r = parse_ratfunc(s).unwrap();
            assert_eq!(r.to_string(), s, "round trip of {s}");
        }
    }

    #[test]
    fn malformed_input() {
        assert!(parse_ratfunc("q +").is_err());
        assert!(parse_ratfunc("(q").is_err());
        assert!(parse_ratfunc("q $").is_err());
        assert_eq!(parse_ratfunc("1/(q - q)"), Err(Error::DivisionByZero));
    }
}
