//! Small recursive-descent reader for polynomial expressions such as
//! `3/2*x0^2*y0 - (y0 - 1)^3 + 0.25`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::mpoly::MPoly;
use super::rat::Rat;
use super::PolyError;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: Vec<String>,
    fixed: bool,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse(format!("{msg} at byte {}", self.pos))
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

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = d
                        .as_constant()
                        .filter(|c| !c.is_zero())
                        .ok_or_else(|| self.err("division by a non-constant or zero"))?;
                    acc = acc.scale(&c.recip());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MPoly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let k: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("expected an exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly, PolyError> {
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
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.variable(),
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.atom()?)
            }
            _ => Err(self.err("unexpected input")),
        }
    }

    fn number(&mut self) -> Result<MPoly, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let (int, frac) = text.split_once('.').unwrap_or((text, ""));
        if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
            return Err(self.err("malformed number"));
        }
        let digits = format!("{int}{frac}");
        let num: BigInt = digits.parse().map_err(|_| self.err("malformed number"))?;
        let den = BigInt::from(10).pow(frac.len() as u32);
        Ok(MPoly::constant(&self.vars, Rat::new(num, den)))
    }

    fn variable(&mut self) -> Result<MPoly, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string();
        if !self.vars.contains(&name) {
            if self.fixed {
                return Err(PolyError::UnknownVariable(name));
            }
            self.vars.push(name.clone());
        }
        MPoly::var(&self.vars, &name)
    }
}

fn parse(src: &str, vars: Vec<String>, fixed: bool) -> Result<MPoly, PolyError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        vars,
        fixed,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    let vars = p.vars.clone();
    e.with_vars(&vars)
}

impl MPoly {
    /// Parses with a fixed variable list; unknown names are an error.
    pub fn parse_with_vars<S: AsRef<str>>(src: &str, vars: &[S]) -> Result<MPoly, PolyError> {
        parse(
            src,
            vars.iter().map(|s| s.as_ref().to_string()).collect(),
            true,
        )
    }
}

impl FromStr for MPoly {
    type Err = PolyError;

    /// Variables are collected in order of first appearance.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s, Vec::new(), false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::rat;

    #[test]
    fn reads_rationals_and_decimals() {
        let p: MPoly = "3/4*x - 0.25".parse().unwrap();
        assert_eq!(p.vars(), ["x"]);
        assert_eq!(p.eval_rat(&[rat(1, 1)]), rat(1, 2));
    }

    #[test]
    fn powers_and_parentheses() {
        let p: MPoly = "(x - y)^2".parse().unwrap();
        let q: MPoly = "x^2 - 2*x*y + y^2".parse().unwrap();
        assert_eq!(p, q);
        assert!(
            <Rat as num_traits::One>::one()
                == "--1".parse::<MPoly>().unwrap().as_constant().unwrap()
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!("x +".parse::<MPoly>().is_err());
        assert!("x / y".parse::<MPoly>().is_err());
        assert!(matches!(
            MPoly::parse_with_vars("x + z", &["x"]),
            Err(PolyError::UnknownVariable(_))
        ));
    }
}
