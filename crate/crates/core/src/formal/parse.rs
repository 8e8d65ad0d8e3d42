//! Reader for polynomial expressions such as `2*(P2+E2)^3 + 1/2*P4^2*rho^4`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Generator, GradedPoly};
use crate::error::{Result, SewingError};

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    param: &'a str,
}

fn err(msg: impl Into<String>) -> SewingError {
    SewingError::InvalidArgument(msg.into())
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<GradedPoly> {
        let mut acc = if self.eat('-') { -self.term()? } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<GradedPoly> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<GradedPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            let n = self.integer()?;
            let mut out = GradedPoly::integer(1);
            for _ in 0..n.to_string().parse::<u32>().map_err(|_| err("exponent too large"))? {
                out = &out * &base;
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(format!("expected a number at offset {start}")));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<GradedPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(err(format!("expected ')' at offset {}", self.pos)));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let value = if self.eat('/') {
                    BigRational::new(num, self.integer()?)
                } else {
                    BigRational::from_integer(num)
                };
                Ok(GradedPoly::constant(value))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let ident: String = self.chars[start..self.pos].iter().collect();
                self.symbol(&ident)
            }
            other => Err(err(format!("unexpected {other:?} at offset {}", self.pos))),
        }
    }

    fn symbol(&self, ident: &str) -> Result<GradedPoly> {
        if ident == self.param {
            return Ok(GradedPoly::param_half_power(2));
        }
        let g = match ident {
            "tau1" | "tau" => Generator::TwoPiITau1,
            "tau2" => Generator::TwoPiITau2,
            "w" => Generator::W,
            "log" => Generator::LogHead,
            _ => {
                let (head, digits) = ident.split_at(1);
                let k: u32 = digits.parse().map_err(|_| err(format!("unknown symbol {ident}")))?;
                match head {
                    "E" => Generator::E(k),
                    "F" => Generator::F(k),
                    "P" => Generator::P(k),
                    _ => return Err(err(format!("unknown symbol {ident}"))),
                }
            }
        };
        Ok(GradedPoly::generator(g))
    }
}

/// Parses an expression in the generators, the heads `tau1`, `tau2`, `w`,
/// `log`, and the parameter named `param`. Products need an explicit `*`.
pub fn parse_poly(text: &str, param: &str) -> Result<GradedPoly> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        param,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(err(format!("trailing input at offset {}", p.pos)));
    }
    Ok(out)
}
