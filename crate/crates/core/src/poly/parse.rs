//! Recursive-descent parser for the polynomial text grammar.
//!
//! Grammar: integer and `p/q` rational literals, variables from the ring,
//! `+ - * ^` and parentheses. Implicit multiplication is rejected. Byte
//! offsets are tracked so the CLI can report line/column.

use super::{FieldElem, FieldTag, MonomialOrder, Polynomial, Ring};
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{msg} at offset {pos}")]
pub struct ParseError {
    pub msg: String,
    /// Byte offset into the source string.
    pub pos: usize,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Ring,
    order: MonomialOrder,
}

pub fn parse_poly(src: &str, ring: &Ring, order: MonomialOrder) -> Result<Polynomial, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        ring,
        order,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(poly)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError {
            msg: msg.to_string(),
            pos: self.pos,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut negate = false;
        if let Some(c) = self.peek() {
            if c == b'-' {
                self.pos += 1;
                negate = true;
            } else if c == b'+' {
                self.pos += 1;
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t).map_err(|e| self.err(&e.to_string()))?;
                }
                b'-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t).map_err(|e| self.err(&e.to_string()))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f).map_err(|e| self.err(&e.to_string()))?;
        }
        // implicit multiplication forbidden: a factor may not be followed
        // directly by another factor start
        if let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'(' || c == b'_' {
                return Err(self.err("expected operator (implicit multiplication is not allowed)"));
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.base()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let e = self.uint()?;
            if e > 64 {
                return Err(self.err("exponent too large"));
            }
            return base.pow(e as u32).map_err(|e| self.err(&e.to_string()));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.literal(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                Polynomial::var(self.ring, self.order, &name)
                    .map_err(|e| self.err(&e.to_string()))
            }
            _ => Err(self.err("expected literal, variable, or `(`")),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len()
            && ((self.src[self.pos] as char).is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn uint(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn literal(&mut self) -> Result<Polynomial, ParseError> {
        let numer_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let numer: BigInt = std::str::from_utf8(&self.src[numer_start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("bad integer literal"))?;
        let coeff = if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let denom_start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if denom_start == self.pos {
                return Err(self.err("expected denominator"));
            }
            let denom: BigInt = std::str::from_utf8(&self.src[denom_start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("bad denominator"))?;
            if denom == BigInt::from(0) {
                return Err(self.err("zero denominator"));
            }
            self.rational_coeff(numer, denom)?
        } else {
            self.int_coeff(numer)
        };
        Ok(Polynomial::constant(self.ring, self.order, coeff))
    }

    fn int_coeff(&self, n: BigInt) -> FieldElem {
        match self.ring.field {
            FieldTag::Q => FieldElem::Rat(BigRational::from(n)),
            FieldTag::Fp(p) => {
                let r: BigInt = ((n % p) + p) % p;
                FieldElem::Fp {
                    v: u64::try_from(r).unwrap(),
                    p,
                }
            }
        }
    }

    fn rational_coeff(&self, n: BigInt, d: BigInt) -> Result<FieldElem, ParseError> {
        match self.ring.field {
            FieldTag::Q => Ok(FieldElem::Rat(BigRational::new(n, d))),
            FieldTag::Fp(_) => {
                let num = self.int_coeff(n);
                let den = self.int_coeff(d);
                let inv = den
                    .inv()
                    .map_err(|e| self.err(&e.to_string()))?;
                Ok(num.mul(&inv))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{FieldTag, MonomialOrder, Ring};

    fn grevlex(src: &str, vars: &[&str]) -> Polynomial {
        parse_poly(src, &Ring::new(vars, FieldTag::Q), MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn zero_and_cancellation() {
        assert!(grevlex("0", &["x"]).is_zero());
        let r = Ring::new(&["x"], FieldTag::fp(2).unwrap());
        assert!(parse_poly("x^2 - x^2", &r, MonomialOrder::Grevlex)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn cone_equation_parses() {
        let p = grevlex("u*w - v^2", &["u", "v", "w"]);
        assert_eq!(p.terms.len(), 2);
        assert_eq!(p.total_degree(), 2);
    }

    #[test]
    fn parse_print_parse_is_fixed_point() {
        let cases = [
            "u*w - v^2",
            "x^2 - 3*y + 1/2",
            "-x + 2",
            "0",
            "(x + y)^3 - x^3",
            "5/3*x*y^2 - 7",
        ];
        for src in cases {
            let r = Ring::new(&["x", "y", "u", "v", "w"], FieldTag::Q);
            let p1 = parse_poly(src, &r, MonomialOrder::Grevlex).unwrap();
            let printed = p1.to_string();
            let p2 = parse_poly(&printed, &r, MonomialOrder::Grevlex).unwrap();
            assert_eq!(p1, p2, "round trip through `{printed}`");
            assert_eq!(printed, p2.to_string());
        }
    }

    #[test]
    fn rejects_unknown_variable_and_implicit_mul() {
        let r = Ring::new(&["x"], FieldTag::Q);
        assert!(parse_poly("y + 1", &r, MonomialOrder::Grevlex).is_err());
        assert!(parse_poly("2x", &r, MonomialOrder::Grevlex).is_err());
        assert!(parse_poly("x(", &r, MonomialOrder::Grevlex).is_err());
    }

    #[test]
    fn rejects_non_invertible_denominator() {
        let r = Ring::new(&["x"], FieldTag::fp(2).unwrap());
        assert!(parse_poly("1/2*x", &r, MonomialOrder::Grevlex).is_err());
        assert!(parse_poly("1/3*x", &r, MonomialOrder::Grevlex).is_ok());
    }
}
