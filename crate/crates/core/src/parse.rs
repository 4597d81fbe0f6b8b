//! Recursive-descent parser for monomial expressions: identifiers X1..Xn and
//! Q1..Qn, operators `+ - * ^` (nonnegative integer exponents), parentheses,
//! whitespace insensitive.

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational};
use crate::vars::{VarId, VarUniverse};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    universe: VarUniverse,
}

pub fn parse_expression(u: VarUniverse, text: &str) -> Result<Polynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, universe: u };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = if self.eat(b'-') {
            -&self.term()?
        } else {
            self.term()?
        };
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

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.integer()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c == b'X' || c == b'Q' => {
                self.pos += 1;
                let i = self.integer()?;
                if i == 0 || i > u32::from(self.universe.n()) {
                    return Err(self.err(&format!(
                        "variable index {i} out of range for n = {}",
                        self.universe.n()
                    )));
                }
                let v = if c == b'X' { VarId::X(i as u8) } else { VarId::Q(i as u8) };
                Polynomial::var(self.universe, v)
            }
            Some(c) if c.is_ascii_digit() => {
                let k = self.integer()?;
                Ok(Polynomial::constant(
                    self.universe,
                    Rational::from_integer(i64::from(k).into()),
                ))
            }
            _ => Err(self.err("expected variable, number, or '('")),
        }
    }

    fn integer(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a nonnegative integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| self.err("integer too large"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(n: u8) -> VarUniverse {
        VarUniverse::new(n).unwrap()
    }

    #[test]
    fn parses_products_and_sums() {
        let p = parse_expression(u(3), "X1*X2*X3").unwrap();
        assert_eq!(p.to_string(), "X1*X2*X3");
        let p = parse_expression(u(3), " X1 * X2 + Q1 - 2 ").unwrap();
        assert_eq!(p.to_string(), "X1*X2 + Q1 - 2");
    }

    #[test]
    fn parses_powers_and_parens() {
        let p = parse_expression(u(2), "(X1 + X2)^2").unwrap();
        assert_eq!(p.to_string(), "X1^2 + 2*X1*X2 + X2^2");
        let p = parse_expression(u(2), "-X1^2").unwrap();
        assert_eq!(p.to_string(), "-X1^2");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_expression(u(2), "X3").is_err());
        assert!(parse_expression(u(2), "X1 +").is_err());
        assert!(parse_expression(u(2), "(X1").is_err());
        assert!(parse_expression(u(2), "X1 $ X2").is_err());
        assert!(parse_expression(u(2), "Y1").is_err());
    }
}
