//! Parser for the printed polynomial grammar.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (['*'] factor)*
//! factor := atom ['^' integer]
//! atom   := integer | 'x' | 't' | '(' expr ')'
//! ```
//!
//! `t` is the generator of the extension `F_p[t]/(modulus)` and is rejected
//! over prime fields. Integers are reduced mod `p`.

use super::field::FieldSpec;
use super::poly::{add_raw, mul_raw, sub_raw, PolyFq};
use crate::error::{Error, Result};

/// Parses a polynomial over `field`, e.g. `"x^2+x+1"` or `"(t+1)*x^3+t"`.
pub fn parse_poly(field: &FieldSpec, input: &str) -> Result<PolyFq> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut parser = Parser {
        field,
        chars: &chars,
        pos: 0,
    };
    let v = parser.expr()?;
    if parser.pos != chars.len() {
        return Err(Error::Parse(format!(
            "unexpected '{}' at position {}",
            chars[parser.pos], parser.pos
        )));
    }
    PolyFq::new(field, v)
}

struct Parser<'a> {
    field: &'a FieldSpec,
    chars: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Vec<u64>> {
        let f = self.field;
        let negate = self.peek() == Some('-');
        if negate {
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if negate {
            acc = sub_raw(f, &[], &acc);
        }
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = add_raw(f, &acc, &t);
                }
                '-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = sub_raw(f, &acc, &t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Vec<u64>> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                }
                Some(c) if c == 'x' || c == 't' || c == '(' || c.is_ascii_digit() => {}
                _ => break,
            }
            let f = self.factor()?;
            acc = mul_raw(self.field, &acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Vec<u64>> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| Error::Parse("exponent too large".into()))?;
            let mut acc = vec![1u64];
            for _ in 0..e {
                acc = mul_raw(self.field, &acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Vec<u64>> {
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                Ok(vec![0, 1])
            }
            Some('t') => {
                self.pos += 1;
                if self.field.is_prime_field() {
                    return Err(Error::Parse("'t' used over a prime field".into()));
                }
                // t packs to p
                Ok(vec![self.field.p()])
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let r = n % self.field.p();
                Ok(if r == 0 { vec![] } else { vec![r] })
            }
            Some(c) => Err(Error::Parse(format!("unexpected '{c}' at position {}", self.pos))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| Error::Parse(format!("expected an integer at position {start}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_printed_forms() {
        let f2 = FieldSpec::prime(2).unwrap();
        let p = parse_poly(&f2, "x^2+x+1").unwrap();
        assert_eq!(p.coeffs(), &[1, 1, 1]);
        assert_eq!(parse_poly(&f2, "x*(x+1)").unwrap().to_string(), "x^2+x");
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(parse_poly(&f5, "3*x^2 - x + 7").unwrap().coeffs(), &[2, 4, 3]);
        assert_eq!(parse_poly(&f5, "-1").unwrap().coeffs(), &[4]);
    }

    #[test]
    fn extension_generator() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        let p = parse_poly(&f4, "x^2+(t+1)*x+t").unwrap();
        assert_eq!(p.to_string(), "x^2+(t+1)*x+t");
        // t^2 = t + 1 in F_4
        assert_eq!(parse_poly(&f4, "t^2").unwrap(), parse_poly(&f4, "t+1").unwrap());
        assert!(parse_poly(&FieldSpec::prime(2).unwrap(), "t").is_err());
    }

    #[test]
    fn malformed_input() {
        let f = FieldSpec::prime(3).unwrap();
        for bad in ["", "x^", "(x+1", "x+y", "x^2+"] {
            assert!(parse_poly(&f, bad).is_err(), "{bad:?} should fail");
        }
    }
}
