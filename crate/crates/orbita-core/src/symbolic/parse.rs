//! Parser for the rendered polynomial grammar.
//!
//! Grammar (whitespace is free between tokens):
//!   ratfun  := poly | '(' poly ')' '/' '(' poly ')'
//!   poly    := term (('+' | '-') term)*
//!   term    := factor ('*' factor)*
//!   factor  := rational | var ('^' uint)? | 'tau' ('^' uint)? | '(' poly ')'
//!   var     := ('x'|'y'|'t'|'a') '[' int ',' int ']'
//!   rational:= '-'? uint ('/' uint)?

use num_traits::{One, Zero};

use super::{Poly, RatFun, Rational, SymbolicError, VarId, VarRole};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src: src.as_bytes(), pos: 0 }
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

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<(), SymbolicError> {
        match self.bump() {
            Some(got) if got == c => Ok(()),
            got => Err(SymbolicError::Parse(format!(
                "expected '{}', got {:?} at byte {}",
                c as char,
                got.map(|b| b as char),
                self.pos
            ))),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<num_bigint::BigInt, SymbolicError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(SymbolicError::Parse(format!("expected digits at byte {start}")));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse()
            .map_err(|e| SymbolicError::Parse(format!("bad integer {s}: {e}")))
    }

    fn int(&mut self) -> Result<i32, SymbolicError> {
        let neg = self.eat(b'-');
        let mag: num_bigint::BigInt = self.uint()?;
        let v: i32 = mag
            .try_into()
            .map_err(|_| SymbolicError::Parse("index out of i32 range".into()))?;
        Ok(if neg { -v } else { v })
    }

    fn rational_tail(&mut self, neg: bool) -> Result<Rational, SymbolicError> {
        let num = self.uint()?;
        let den = if self.eat(b'/') {
            self.uint()?
        } else {
            num_bigint::BigInt::from(1)
        };
        if den.is_zero() {
            return Err(SymbolicError::Parse("zero denominator in rational".into()));
        }
        let r = Rational::new(num, den);
        Ok(if neg { -r } else { r })
    }

    fn exponent(&mut self) -> Result<u32, SymbolicError> {
        if self.eat(b'^') {
            let e: num_bigint::BigInt = self.uint()?;
            e.try_into()
                .map_err(|_| SymbolicError::Parse("exponent out of range".into()))
        } else {
            Ok(1)
        }
    }

    fn var(&mut self, role: VarRole) -> Result<VarId, SymbolicError> {
        self.expect(b'[')?;
        let row = self.int()?;
        self.expect(b',')?;
        let col = self.int()?;
        self.expect(b']')?;
        let ok = match role {
            VarRole::X | VarRole::T => row < col,
            VarRole::Y => row > col,
            VarRole::Aux => true,
        };
        if !ok {
            return Err(SymbolicError::Parse(format!(
                "indices [{row},{col}] violate the triangle for this variable role"
            )));
        }
        Ok(VarId { role, row, col })
    }

    fn factor(&mut self) -> Result<Poly, SymbolicError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let p = self.poly()?;
                self.expect(b')')?;
                Ok(p)
            }
            Some(b'-') => {
                self.bump();
                Ok(Poly::constant(self.rational_tail(true)?))
            }
            Some(c) if c.is_ascii_digit() => Ok(Poly::constant(self.rational_tail(false)?)),
            Some(b't') => {
                // 'tau' or 't[..]'
                if self.src[self.pos..].starts_with(b"tau") {
                    self.pos += 3;
                    let e = self.exponent()?;
                    Ok(Poly::one_tau(e))
                } else {
                    self.bump();
                    let v = self.var(VarRole::T)?;
                    let e = self.exponent()?;
                    Ok(Poly::var_pow(v, e))
                }
            }
            Some(b'x') => {
                self.bump();
                let v = self.var(VarRole::X)?;
                let e = self.exponent()?;
                Ok(Poly::var_pow(v, e))
            }
            Some(b'y') => {
                self.bump();
                let v = self.var(VarRole::Y)?;
                let e = self.exponent()?;
                Ok(Poly::var_pow(v, e))
            }
            Some(b'a') => {
                self.bump();
                let v = self.var(VarRole::Aux)?;
                let e = self.exponent()?;
                Ok(Poly::var_pow(v, e))
            }
            got => Err(SymbolicError::Parse(format!(
                "unexpected {:?} at byte {}",
                got.map(|b| b as char),
                self.pos
            ))),
        }
    }

    fn term(&mut self) -> Result<Poly, SymbolicError> {
        let mut p = self.factor()?;
        while self.eat(b'*') {
            p = &p * &self.factor()?;
        }
        Ok(p)
    }

    fn poly(&mut self) -> Result<Poly, SymbolicError> {
        let mut p = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    p = &p + &self.term()?;
                }
                Some(b'-') => {
                    self.bump();
                    p = &p - &self.term()?;
                }
                _ => return Ok(p),
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

impl Poly {
    fn one_tau(e: u32) -> Poly {
        Poly::one().mul_tau(e)
    }

    fn var_pow(v: VarId, e: u32) -> Poly {
        let base = Poly::var(v);
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * &base;
        }
        out
    }
}

/// Parse a polynomial in the canonical grammar.
pub fn parse_poly(src: &str) -> Result<Poly, SymbolicError> {
    let mut c = Cursor::new(src);
    let p = c.poly()?;
    if !c.at_end() {
        return Err(SymbolicError::Parse(format!(
            "trailing input at byte {} of {src:?}",
            c.pos
        )));
    }
    Ok(p)
}

/// Parse a rational number `-p/q`.
pub fn parse_rational(src: &str) -> Result<Rational, SymbolicError> {
    let mut c = Cursor::new(src);
    let neg = c.eat(b'-');
    let r = c.rational_tail(neg)?;
    if !c.at_end() {
        return Err(SymbolicError::Parse(format!("trailing input in rational {src:?}")));
    }
    Ok(r)
}

/// Parse a rational function: either a plain polynomial or `(num)/(den)`.
pub fn parse_ratfun(src: &str) -> Result<RatFun, SymbolicError> {
    if let Some((num, den)) = split_top_level_quotient(src) {
        let n = parse_poly(num)?;
        let d = parse_poly(den)?;
        return RatFun::new(n, d);
    }
    Ok(RatFun::from_poly(parse_poly(src)?))
}

/// Recognise `( ... ) / ( ... )` with the split at paren depth 0.
fn split_top_level_quotient(src: &str) -> Option<(&str, &str)> {
    let t = src.trim();
    if !t.starts_with('(') || !t.ends_with(')') {
        return None;
    }
    let bytes = t.as_bytes();
    let mut depth = 0usize;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    let rest = t[i + 1..].trim_start();
                    if let Some(r) = rest.strip_prefix('/') {
                        let r = r.trim();
                        if r.starts_with('(') && r.ends_with(')') {
                            return Some((&t[1..i], &r[1..r.len() - 1]));
                        }
                    }
                    return None;
                }
            }
            _ => {}
        }
    }
    None
}
