//! Recursive-descent parser for the polynomial grammar
//!
//! ```text
//! poly     := ['-'] term (('+'|'-') term)* ;
//! term     := factor (('*')? factor)* ;
//! factor   := integer | variable ['^' integer] ;
//! variable := 'x' | 'y' | 'n' ;
//! ```
//!
//! Whitespace is ignored everywhere. `n` is an alias for `x` and marks the
//! input as univariate.

use num_bigint::BigInt;
use num_traits::One;

use super::{Arity, Monomial, Polynomial};
use crate::error::{Error, Result};

/// Largest exponent accepted for a single variable within one term.
pub const MAX_EXPONENT: u32 = 64;

/// Parses a polynomial. The arity is 2 when `y` occurs and 1 otherwise.
pub fn parse_poly(text: &str) -> Result<Polynomial> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        saw_y: false,
        saw_n: None,
    };
    let terms = parser.poly()?;
    parser.skip_ws();
    if parser.pos < parser.bytes.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    let arity = if parser.saw_y { Arity::Two } else { Arity::One };
    Ok(Polynomial::from_terms(arity, terms))
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    saw_y: bool,
    saw_n: Option<usize>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn syntax(&self, message: &'static str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message,
        }
    }

    fn poly(&mut self) -> Result<alloc::vec::Vec<(Monomial, BigInt)>> {
        let mut terms = alloc::vec::Vec::new();
        let mut negative = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negative = true;
        }
        loop {
            let (mono, mut coeff) = self.term()?;
            if negative {
                coeff = -coeff;
            }
            terms.push((mono, coeff));
            match self.peek() {
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<(Monomial, BigInt)> {
        let mut coeff = BigInt::one();
        let mut mono = Monomial::ONE;
        self.factor(&mut coeff, &mut mono)?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.factor(&mut coeff, &mut mono)?;
                }
                Some(c) if c.is_ascii_alphanumeric() => self.factor(&mut coeff, &mut mono)?,
                _ => return Ok((mono, coeff)),
            }
        }
    }

    fn factor(&mut self, coeff: &mut BigInt, mono: &mut Monomial) -> Result<()> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                *coeff *= self.integer()?;
                Ok(())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                self.pos += 1;
                let exp_offset = self.pos;
                let exp = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let exp_at = self.peek().map(|_| self.pos).unwrap_or(exp_offset);
                    let value = self.integer()?;
                    u32::try_from(&value)
                        .ok()
                        .filter(|e| *e <= MAX_EXPONENT)
                        .ok_or(Error::ExponentOverflow {
                            offset: exp_at,
                            cap: MAX_EXPONENT,
                        })?
                } else {
                    1
                };
                let slot = match c {
                    b'x' => &mut mono.x,
                    b'n' => {
                        self.saw_n.get_or_insert(at);
                        if self.saw_y {
                            return Err(Error::UnknownVariable { offset: at, found: 'n' });
                        }
                        &mut mono.x
                    }
                    b'y' => {
                        if self.saw_n.is_some() {
                            return Err(Error::UnknownVariable { offset: at, found: 'y' });
                        }
                        self.saw_y = true;
                        &mut mono.y
                    }
                    other => {
                        return Err(Error::UnknownVariable {
                            offset: at,
                            found: other as char,
                        })
                    }
                };
                *slot += exp;
                if *slot > MAX_EXPONENT {
                    return Err(Error::ExponentOverflow {
                        offset: at,
                        cap: MAX_EXPONENT,
                    });
                }
                Ok(())
            }
            Some(_) => Err(self.syntax("expected an integer or a variable")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected an integer"));
        }
        let digits = core::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("non-empty ascii digits"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn sample_inputs() {
        let f = parse_poly("x^2+y^2+x*y+x+y+1").unwrap();
        assert_eq!(f.arity(), Arity::Two);
        assert_eq!(f.num_terms(), 6);
        for (x, y) in [(2, 0), (0, 2), (1, 1), (1, 0), (0, 1), (0, 0)] {
            assert_eq!(f.coeff(x, y), BigInt::from(1));
        }
        let g = parse_poly("n^2+7").unwrap();
        assert_eq!(g.arity(), Arity::One);
        assert_eq!(g, parse_poly("x^2+7").unwrap());
        assert!(parse_poly("0").unwrap().is_zero());
    }

    #[test]
    fn implicit_multiplication_and_whitespace() {
        let f = parse_poly(" 2x^2y - 3 x y ^ 2 ").unwrap();
        assert_eq!(f.coeff(2, 1), BigInt::from(2));
        assert_eq!(f.coeff(1, 2), BigInt::from(-3));
        assert_eq!(parse_poly("2*3*x").unwrap().coeff(1, 0), BigInt::from(6));
        assert_eq!(parse_poly("x*x*y").unwrap().coeff(2, 1), BigInt::from(1));
        assert_eq!(parse_poly("-5").unwrap().coeff(0, 0), BigInt::from(-5));
    }

    #[test]
    fn big_coefficients() {
        let f = parse_poly("123456789012345678901234567890x+1").unwrap();
        assert_eq!(
            f.coeff(1, 0),
            "123456789012345678901234567890".parse::<BigInt>().unwrap()
        );
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse_poly("x^2+z"),
            Err(Error::UnknownVariable { offset: 4, found: 'z' })
        );
        assert!(matches!(
            parse_poly("x^65"),
            Err(Error::ExponentOverflow { offset: 2, .. })
        ));
        assert!(matches!(parse_poly("x^40*x^40"), Err(Error::ExponentOverflow { .. })));
        assert!(matches!(
            parse_poly("x^99999999999999999999"),
            Err(Error::ExponentOverflow { .. })
        ));
        assert!(matches!(parse_poly("x+"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_poly(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse_poly("x)"), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(parse_poly("x^"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("--x"), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(
            parse_poly("n+y"),
            Err(Error::UnknownVariable { found: 'y', .. })
        ));
    }
}
