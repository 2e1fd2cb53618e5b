//! Text grammar for Laurent polynomials, rational functions and weights.
//!
//! Whitespace is insignificant. A term is `c`, `c*v`, or `v` with an optional
//! leading sign, where `c` is an integer or `num/den` and `v` is a product of
//! variable powers (`t^-2`, `t1*t3^4`). Rational functions are written
//! `(P)/(Q)`; zero is `0`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{LaurentPoly, MultiWeight, RatFn, Q};
use crate::error::ParseError;

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
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

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, msg)
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().map_or(false, |c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat(b'-');
        let d = self.digits().ok_or_else(|| self.err("expected integer"))?;
        let v: i64 = d.parse().map_err(|_| self.err("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn rational(&mut self) -> Result<Option<Q>, ParseError> {
        let Some(n) = self.digits() else { return Ok(None) };
        let n: BigInt = n.parse().unwrap();
        if self.eat(b'/') {
            let d = self.digits().ok_or_else(|| self.err("expected denominator"))?;
            let d: BigInt = d.parse().unwrap();
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(Some(Q::new(n, d)))
        } else {
            Ok(Some(Q::from_integer(n)))
        }
    }

    /// Variable name: `t` followed by an optional index.
    fn var(&mut self) -> Result<Option<(usize, i64)>, ParseError> {
        if !self.eat(b't') {
            return Ok(None);
        }
        let idx = match self.digits() {
            Some(d) => d.parse::<usize>().map_err(|_| self.err("bad variable index"))?,
            None => 0,
        };
        let e = if self.eat(b'^') { self.int()? } else { 1 };
        Ok(Some((idx, e)))
    }
}

fn strip_ws(s: &str) -> Vec<u8> {
    s.bytes().filter(|c| !c.is_ascii_whitespace()).collect()
}

/// Parses a sum of signed terms. Each term is a coefficient times a list of
/// `(variable index, exponent)` factors; bare `t` has index 0.
fn parse_terms(cur: &mut Cursor<'_>, stop: Option<u8>) -> Result<Vec<(Q, Vec<(usize, i64)>)>, ParseError> {
    let mut out = Vec::new();
    let mut first = true;
    loop {
        if cur.peek().is_none() || cur.peek() == stop {
            if first {
                return Err(cur.err("empty expression"));
            }
            break;
        }
        let mut sign = Q::one();
        if cur.eat(b'-') {
            sign = -sign;
        } else if !cur.eat(b'+') && !first {
            return Err(cur.err("expected '+' or '-'"));
        }
        first = false;
        let coef = cur.rational()?;
        let mut vars = Vec::new();
        if coef.is_some() {
            if cur.eat(b'*') {
                vars.push(cur.var()?.ok_or_else(|| cur.err("expected variable after '*'"))?);
            }
        } else {
            vars.push(cur.var()?.ok_or_else(|| cur.err("expected coefficient or variable"))?);
        }
        while cur.eat(b'*') {
            vars.push(cur.var()?.ok_or_else(|| cur.err("expected variable after '*'"))?);
        }
        out.push((sign * coef.unwrap_or_else(Q::one), vars));
    }
    Ok(out)
}

fn laurent_from_terms(cur: &Cursor<'_>, terms: Vec<(Q, Vec<(usize, i64)>)>) -> Result<LaurentPoly, ParseError> {
    let mut v = Vec::new();
    for (c, vars) in terms {
        let mut e = 0;
        for (idx, x) in vars {
            if idx != 0 {
                return Err(cur.err("indexed variable in a one-variable polynomial"));
            }
            e += x;
        }
        v.push((e, c));
    }
    Ok(LaurentPoly::from_terms(v))
}

fn parse_laurent_at(cur: &mut Cursor<'_>, stop: Option<u8>) -> Result<LaurentPoly, ParseError> {
    let terms = parse_terms(cur, stop)?;
    laurent_from_terms(cur, terms)
}

pub fn parse_laurent(s: &str) -> Result<LaurentPoly, ParseError> {
    let b = strip_ws(s);
    let mut cur = Cursor { s: &b, pos: 0 };
    let p = parse_laurent_at(&mut cur, None)?;
    if cur.peek().is_some() {
        return Err(cur.err("trailing input"));
    }
    Ok(p)
}

pub fn parse_ratfn(s: &str) -> Result<RatFn, ParseError> {
    let b = strip_ws(s);
    let mut cur = Cursor { s: &b, pos: 0 };
    if !cur.eat(b'(') {
        return parse_laurent(s).map(RatFn::from);
    }
    let num = parse_laurent_at(&mut cur, Some(b')'))?;
    if !cur.eat(b')') {
        return Err(cur.err("expected ')'"));
    }
    if !cur.eat(b'/') {
        return Err(cur.err("expected '/' after numerator"));
    }
    if !cur.eat(b'(') {
        return Err(cur.err("expected '(' before denominator"));
    }
    let den = parse_laurent_at(&mut cur, Some(b')'))?;
    if !cur.eat(b')') {
        return Err(cur.err("expected ')'"));
    }
    if cur.peek().is_some() {
        return Err(cur.err("trailing input"));
    }
    RatFn::new(num, den).map_err(|_| ParseError::new(0, "zero denominator"))
}

/// Parses a weight in `nvars` variables `t1..t{nvars}`.
pub fn parse_multiweight(s: &str, nvars: usize) -> Result<MultiWeight, ParseError> {
    let b = strip_ws(s);
    let mut cur = Cursor { s: &b, pos: 0 };
    let terms = parse_terms(&mut cur, None)?;
    if cur.peek().is_some() {
        return Err(cur.err("trailing input"));
    }
    let mut w = MultiWeight::zero(nvars);
    for (c, vars) in terms {
        let mut x = vec![0i64; nvars];
        for (idx, e) in vars {
            if idx == 0 || idx > nvars {
                return Err(ParseError::new(0, format!("variable index {} outside t1..t{}", idx, nvars)));
            }
            x[idx - 1] += e;
        }
        w.add_term(x, c);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_example() {
        let p = parse_laurent("1 - 2/3*t^-1 + t^2").unwrap();
        assert_eq!(p.coeff(-1), Q::new((-2).into(), 3.into()));
        assert_eq!(p.coeff(0), Q::one());
        assert_eq!(p.coeff(2), Q::one());
        assert_eq!(p.to_string(), "-2/3*t^-1 + 1 + t^2");
        assert_eq!(parse_laurent(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn zero_and_errors() {
        assert!(parse_laurent("0").unwrap().is_zero());
        assert!(parse_laurent("").is_err());
        assert!(parse_laurent("1 +").is_err());
        assert!(parse_laurent("t^").is_err());
        assert!(parse_laurent("2t").is_err());
    }

    #[test]
    fn ratfn_forms() {
        let r = parse_ratfn("(t^2 - 1)/(t - 1)").unwrap();
        assert_eq!(r.to_string(), "1 + t");
        let s = parse_ratfn("(1)/(-1 + t)").unwrap();
        assert_eq!(parse_ratfn(&s.to_string()).unwrap(), s);
        assert!(parse_ratfn("(1)/(0)").is_err());
    }

    #[test]
    fn weight_forms() {
        let w = parse_multiweight("2*t1 - 3*t2^-1", 3).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(parse_multiweight(&w.to_string(), 3).unwrap(), w);
        assert!(parse_multiweight("t4", 3).is_err());
    }
}
