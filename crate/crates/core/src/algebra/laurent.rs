use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{UPoly, Q};

/// An element of `Q[t, t^-1]`, stored as `t^shift * body` with `body(0) != 0`.
///
/// The zero element has an empty body and `shift == 0`, so structural equality
/// is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    shift: i64,
    body: UPoly,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { shift: 0, body: UPoly::zero() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::from_upoly(UPoly::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Q::from_integer(c.into()))
    }

    /// `c * t^e`.
    pub fn monomial(c: Q, e: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { shift: e, body: UPoly::constant(c) }
    }

    /// `t^e`.
    pub fn t_pow(e: i64) -> Self {
        Self::monomial(Q::one(), e)
    }

    pub fn from_upoly(p: UPoly) -> Self {
        Self::from_parts(0, p)
    }

    /// `t^shift * p` for an arbitrary polynomial `p`.
    pub fn from_parts(shift: i64, p: UPoly) -> Self {
        if p.is_zero() {
            return Self::zero();
        }
        let (v, body) = p.strip_t();
        LaurentPoly { shift: shift + v as i64, body }
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, Q)>>(terms: I) -> Self {
        let terms: Vec<(i64, Q)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let Some(lo) = terms.iter().map(|(e, _)| *e).min() else {
            return Self::zero();
        };
        let hi = terms.iter().map(|(e, _)| *e).max().unwrap();
        let mut v = vec![Q::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            v[(e - lo) as usize] += c;
        }
        Self::from_parts(lo, UPoly::from_coeffs(v))
    }

    /// Power of `t` times a polynomial with nonzero constant term.
    pub fn parts(&self) -> (i64, &UPoly) {
        (self.shift, &self.body)
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.body.is_one()
    }

    /// Nonzero terms in strictly increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Q)> + '_ {
        self.body
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.shift + i as i64, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms().count()
    }

    pub fn coeff(&self, e: i64) -> Q {
        if e < self.shift {
            return Q::zero();
        }
        self.body.coeff((e - self.shift) as usize)
    }

    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.shift)
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.body.degree().map(|d| self.shift + d as i64)
    }

    /// Largest absolute exponent, `0` for the zero element.
    pub fn abs_degree(&self) -> i64 {
        match (self.min_exp(), self.max_exp()) {
            (Some(a), Some(b)) => a.abs().max(b.abs()),
            _ => 0,
        }
    }

    /// `Some((c, e))` when the element is `c * t^e` with `c != 0`.
    pub fn as_monomial(&self) -> Option<(Q, i64)> {
        self.body.is_constant().then(|| (self.body.lead(), self.shift)).filter(|(c, _)| !c.is_zero())
    }

    /// The unit `±t^e` if this element is one.
    pub fn is_unit(&self) -> bool {
        self.as_monomial().is_some()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.shift.min(o.shift);
        let a = self.body.shift((self.shift - lo) as usize);
        let b = o.body.shift((o.shift - lo) as usize);
        Self::from_parts(lo, a.add(&b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { shift: self.shift, body: self.body.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        LaurentPoly { shift: self.shift + o.shift, body: self.body.mul(&o.body) }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { shift: self.shift, body: self.body.scale(c) }
    }

    pub fn mul_t_pow(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { shift: self.shift + e, body: self.body.clone() }
    }

    /// Substitutes `t -> t^-1`.
    pub fn bar(&self) -> Self {
        match self.body.degree() {
            None => Self::zero(),
            Some(d) => LaurentPoly { shift: -self.shift - d as i64, body: self.body.reciprocal() },
        }
    }

    /// Substitutes `t -> 1`.
    pub fn eval_one(&self) -> Q {
        self.body.coeffs().iter().fold(Q::zero(), |a, c| a + c)
    }

    /// The body as a polynomial after multiplying by `t^-min_exp`.
    pub fn to_upoly_shifted(&self) -> (i64, UPoly) {
        (self.shift, self.body.clone())
    }

    /// The element as a genuine polynomial, if it has no negative powers.
    pub fn to_upoly(&self) -> Option<UPoly> {
        if self.is_zero() {
            return Some(UPoly::zero());
        }
        (self.shift >= 0).then(|| self.body.shift(self.shift as usize))
    }
}

impl Ord for LaurentPoly {
    fn cmp(&self, o: &Self) -> Ordering {
        self.shift.cmp(&o.shift).then_with(|| self.body.cmp(&o.body))
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub(crate) fn fmt_coeff_term(f: &mut fmt::Formatter<'_>, first: bool, c: &Q, var: &str) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if var.is_empty() {
        write!(f, "{}", a)
    } else if a.is_one() {
        write!(f, "{}", var)
    } else {
        write!(f, "{}*{}", a, var)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let var = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{}", e),
            };
            fmt_coeff_term(f, i == 0, c, &var)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
