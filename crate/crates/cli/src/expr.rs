//! Complex constants written as arithmetic expressions, e.g. `i`, `2i`,
//! `(1+i*sqrt(3))/2`, `rho`, `0.25+1.5i`.
//!
//! Grammar: sums and differences of products and quotients of signed
//! factors; a factor is a decimal number, `i`, `pi`, `rho` (= e^{2πi/3}),
//! `sqrt(expr)`, `exp(expr)` or a parenthesized expression, optionally raised
//! to an integer power with `^`. Juxtaposition (`2i`, `3sqrt(2)`) multiplies.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub pos: usize,
    pub msg: String,
}

impl std::fmt::Display for ExprError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at offset {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ExprError {}

/// Removes all whitespace, the canonical spelling used in configs and keys.
pub fn canonical(src: &str) -> String {
    src.chars().filter(|c| !c.is_whitespace()).collect()
}

pub fn parse_complex(src: &str, prec: u32) -> Result<Complex, ExprError> {
    let text = canonical(src);
    if text.is_empty() {
        return Err(ExprError { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { s: text.as_bytes(), pos: 0, prec };
    let v = p.expr()?;
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    if !v.real().is_finite() || !v.imag().is_finite() {
        return Err(ExprError { pos: 0, msg: "expression is not finite".into() });
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    prec: u32,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ExprError {
        ExprError { pos: self.pos, msg: msg.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Complex, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc += self.term()?;
            } else if self.eat(b'-') {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'(' || c == b'.')
    }

    fn term(&mut self) -> Result<Complex, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc *= self.unary()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(ExprError { pos: at, msg: "division by zero".into() });
                }
                acc /= d;
            } else if self.starts_factor() {
                acc *= self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Complex, ExprError> {
        if self.eat(b'-') {
            Ok(-self.unary()?)
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Complex, ExprError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        let e: i32 = digits.parse().map_err(|_| ExprError { pos: start, msg: "expected an integer exponent".into() })?;
        if neg && base.is_zero() {
            return Err(ExprError { pos: start, msg: "zero to a negative power".into() });
        }
        Ok(base.pow(if neg { -e } else { e }))
    }

    fn atom(&mut self) -> Result<Complex, ExprError> {
        let prec = self.prec;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
                    self.pos += 1;
                }
                // an exponent part, as opposed to a following `exp(…)`
                if matches!(self.peek(), Some(b'e' | b'E'))
                    && matches!(self.s.get(self.pos + 1), Some(c) if c.is_ascii_digit() || *c == b'-' || *c == b'+')
                {
                    self.pos += 2;
                    while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                        self.pos += 1;
                    }
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                let parsed = Float::parse(text).map_err(|e| ExprError { pos: start, msg: format!("bad number {text:?}: {e}") })?;
                Ok(Complex::with_val(prec, Float::with_val(prec, parsed)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                match name {
                    "i" => Ok(Complex::with_val(prec, (0, 1))),
                    "pi" => Ok(Complex::with_val(prec, Float::with_val(prec, Constant::Pi))),
                    "rho" => {
                        let s3 = Float::with_val(prec, 3).sqrt() / 2u32;
                        Ok(Complex::with_val(prec, (Float::with_val(prec, -0.5), s3)))
                    }
                    "sqrt" | "exp" => {
                        if !self.eat(b'(') {
                            return Err(self.err("expected '(' after function name"));
                        }
                        let v = self.expr()?;
                        if !self.eat(b')') {
                            return Err(self.err("expected ')'"));
                        }
                        Ok(if name == "sqrt" { v.sqrt() } else { v.exp() })
                    }
                    _ => Err(ExprError { pos: start, msg: format!("unknown name {name:?}") }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(src: &str, re: f64, im: f64) {
        let v = parse_complex(src, 128).unwrap();
        assert!((v.real().to_f64() - re).abs() < 1e-15 && (v.imag().to_f64() - im).abs() < 1e-15, "{src}: {v}");
    }

    #[test]
    fn examples() {
        close("i", 0.0, 1.0);
        close("2i", 0.0, 2.0);
        close(" 0.25 + 1.5 i ", 0.25, 1.5);
        close("(1+i*sqrt(3))/2", 0.5, 3f64.sqrt() / 2.0);
        close("rho", -0.5, 3f64.sqrt() / 2.0);
        close("rho^2", -0.5, -(3f64.sqrt()) / 2.0);
        close("-1/3+i", -1.0 / 3.0, 1.0);
        close("1e-2+2i", 0.01, 2.0);
        close("exp(i*pi/3)", 0.5, 3f64.sqrt() / 2.0);
        close("3sqrt(4)", 6.0, 0.0);
    }

    #[test]
    fn errors() {
        for bad in ["", "1+", "(1", "foo", "1/0", "2^x", "i)", "sqrt 2"] {
            assert!(parse_complex(bad, 128).is_err(), "{bad:?}");
        }
    }
}
