use num_bigint::BigInt;

use super::poly::{var_x, VAR_C, VAR_D, VAR_Q};
use super::QCoeff;
use crate::error::{QorbitError, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(QorbitError::Parse { pos: self.pos, msg: msg.to_string() })
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

    fn expr(&mut self) -> Result<QCoeff> {
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

    fn term(&mut self) -> Result<QCoeff> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                acc = acc.div(&rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<QCoeff> {
        if self.eat(b'-') {
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<QCoeff> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let k = self.integer()?;
            let k: i32 =
                k.try_into().map_err(|_| QorbitError::Parse { pos: self.pos, msg: "exponent too large".into() })?;
            return base.pow(if neg { -k } else { k });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<i64>().or_else(|_| self.err("integer overflow"))
    }

    fn atom(&mut self) -> Result<QCoeff> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = s.parse().map_err(|_| QorbitError::Parse { pos: start, msg: "bad integer".into() })?;
                Ok(QCoeff::from_rational(n.into()))
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(QCoeff::var(VAR_Q))
            }
            Some(b'c') => {
                self.pos += 1;
                Ok(QCoeff::var(VAR_C))
            }
            Some(b'd') => {
                self.pos += 1;
                Ok(QCoeff::var(VAR_D))
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.integer()?;
                Ok(QCoeff::var(var_x(i as usize)))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_qcoeff(s: &str) -> Result<QCoeff> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_reduced_fraction() {
        let a: QCoeff = "(1-q^2)/(q)".parse().unwrap();
        assert_eq!(a.to_string(), "(1-q^2)/(q)");
    }

    #[test]
    fn parses_negative_exponent() {
        let a: QCoeff = "q^-1 - q".parse().unwrap();
        let b: QCoeff = "(1-q^2)/(q)".parse().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!("q +* 2".parse::<QCoeff>(), Err(QorbitError::Parse { .. })));
        assert!(matches!("(q".parse::<QCoeff>(), Err(QorbitError::Parse { .. })));
    }

    #[test]
    fn multivariate_print_parse() {
        let a: QCoeff = "(3/2*q*c - d^2 + x1)/(q^2 - c)".parse().unwrap();
        let back: QCoeff = a.to_string().parse().unwrap();
        assert_eq!(a, back);
    }
}
