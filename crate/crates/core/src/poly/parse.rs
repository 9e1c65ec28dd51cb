//! Text syntax: variables `x1..xm`, rational constants, `+ - * ^` and parentheses.

use super::Poly;
use crate::error::{Error, Result};
use crate::linalg::{parse_q, Q};

pub fn parse_poly(src: &str, nvars: usize) -> Result<Poly> {
    let mut p = Parser { s: src.as_bytes(), pos: 0, nvars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits();
            let k: u32 = digits.parse().map_err(|_| self.err("expected an exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<Q> {
        let mut text = self.digits();
        if self.pos < self.s.len() && self.s[self.pos] == b'.' {
            self.pos += 1;
            text.push('.');
            text.push_str(&self.digits());
        }
        let save = self.pos;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let d = self.digits();
            if d.is_empty() {
                self.pos = save;
                return Err(self.err("division is only allowed between numerals"));
            }
            text = format!("{text}/{d}");
        }
        parse_q(&text).ok_or_else(|| self.err("bad number"))
    }

    fn atom(&mut self) -> Result<Poly> {
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
            Some(b'x') => {
                self.pos += 1;
                let d = self.digits();
                let i: usize = d.parse().map_err(|_| self.err("expected a variable index"))?;
                if i == 0 || i > self.nvars {
                    return Err(self.err(&format!("variable x{i} outside x1..x{}", self.nvars)));
                }
                Ok(Poly::var(self.nvars, i))
            }
            Some(c) if c.is_ascii_digit() => Ok(Poly::constant(self.nvars, self.number()?)),
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["x1^2*x2 - 3/2*x3", "x1", "-x1 + 2", "0"] {
            assert_eq!(parse_poly(s, 3).unwrap().to_string(), s);
        }
    }

    #[test]
    fn precedence() {
        let p = parse_poly("-x1^2 + (x1 + x2)*x2", 2).unwrap();
        assert_eq!(p.to_string(), "-x1^2 + x1*x2 + x2^2");
        assert_eq!(parse_poly("0.5*x1", 1).unwrap().to_string(), "1/2*x1");
    }

    #[test]
    fn errors() {
        assert!(parse_poly("x3", 2).is_err());
        assert!(parse_poly("x1 +", 2).is_err());
        assert!(parse_poly("x1/x2", 2).is_err());
        assert!(parse_poly("y", 2).is_err());
        assert!(parse_poly("(x1", 2).is_err());
    }
}
