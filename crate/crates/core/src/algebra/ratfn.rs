use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use super::{AlgebraError, LaurentPoly, UPoly, Q};

/// An element of `Q(t)` in canonical form `num / den`.
///
/// `den` is a primitive integer polynomial with nonzero constant term and
/// positive leading coefficient, coprime to `num`. Every element has exactly
/// one such representation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: LaurentPoly,
    den: UPoly,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn { num: LaurentPoly::zero(), den: UPoly::one() }
    }

    pub fn one() -> Self {
        RatFn { num: LaurentPoly::one(), den: UPoly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        LaurentPoly::from_int(c).into()
    }

    pub fn constant(c: Q) -> Self {
        LaurentPoly::constant(c).into()
    }

    pub fn t_pow(e: i64) -> Self {
        LaurentPoly::t_pow(e).into()
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let (s, d) = den.parts();
        let (ns, nb) = num.parts();
        Ok(Self::reduce(ns - s, nb.clone(), d.clone()))
    }

    /// `t^shift * n / d` with `d(0) != 0`.
    fn reduce(shift: i64, n: UPoly, d: UPoly) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        if d.is_one() {
            return RatFn { num: LaurentPoly::from_parts(shift, n), den: d };
        }
        if n.degree() == Some(0) {
            let (c, d) = d.primitive_part();
            return RatFn { num: LaurentPoly::from_parts(shift, n.scale(&c.recip())), den: d };
        }
        let g = n.gcd(&d);
        let (n, d) = if g.is_one() { (n, d) } else { (n.div_rem(&g).0, d.div_rem(&g).0) };
        let (c, d) = d.primitive_part();
        let n = n.scale(&c.recip());
        RatFn { num: LaurentPoly::from_parts(shift, n), den: d }
    }

    /// `num / den` for a normalized `den` (primitive, positive leading
    /// coefficient, nonzero constant term) already coprime to `num`.
    pub(crate) fn over_normalized(num: LaurentPoly, den: UPoly) -> Self {
        debug_assert!(den.coeff(0) != Q::zero() && den.primitive_part().0 == Q::from_integer(1.into()));
        RatFn { num, den }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    /// `Some((c, e))` when the element is `c * t^e`.
    pub fn as_monomial(&self) -> Option<(Q, i64)> {
        self.as_laurent().and_then(|l| l.as_monomial())
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let n = self.num.add(&o.num);
            let (s, b) = n.parts();
            return Self::reduce(s, b.clone(), self.den.clone());
        }
        let a = self.num.mul(&LaurentPoly::from_upoly(o.den.clone()));
        let b = o.num.mul(&LaurentPoly::from_upoly(self.den.clone()));
        let n = a.add(&b);
        let (s, nb) = n.parts();
        Self::reduce(s, nb.clone(), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFn { num: self.num.mul(&o.num), den: UPoly::one() };
        }
        let n = self.num.mul(&o.num);
        let (s, nb) = n.parts();
        Self::reduce(s, nb.clone(), self.den.mul(&o.den))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_t_pow(&self, e: i64) -> Self {
        RatFn { num: self.num.mul_t_pow(e), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        Self::new(LaurentPoly::from_upoly(self.den.clone()), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Substitutes `t -> t^-1`.
    pub fn bar(&self) -> Self {
        let d = LaurentPoly::from_upoly(self.den.clone()).bar();
        Self::new(self.num.bar(), d).expect("nonzero denominator")
    }

    /// Combined degree size used for pivot selection.
    pub fn complexity(&self) -> usize {
        let n = self.num.parts().1.degree().unwrap_or(0);
        let d = self.den.degree().unwrap_or(0);
        n + d
    }
}

impl Ord for RatFn {
    fn cmp(&self, o: &Self) -> Ordering {
        self.den.cmp(&o.den).then_with(|| self.num.cmp(&o.num))
    }
}

impl PartialOrd for RatFn {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Default for RatFn {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<LaurentPoly> for RatFn {
    fn from(num: LaurentPoly) -> Self {
        RatFn { num, den: UPoly::one() }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, LaurentPoly::from_upoly(self.den.clone()))
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(c: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(c.iter().map(|&(e, v)| (e, Q::from_integer(v.into()))))
    }

    #[test]
    fn common_factor_cancels() {
        let r = RatFn::new(lp(&[(2, 1), (0, -1)]), lp(&[(1, 1), (0, -1)])).unwrap();
        assert_eq!(r, RatFn::from(lp(&[(1, 1), (0, 1)])));
        assert_eq!(r.to_string(), "1 + t");
    }

    #[test]
    fn denominator_normalization() {
        // 2 / (2t^3 - 4t^2) = t^-2 / (t - 2)
        let r = RatFn::new(lp(&[(0, 2)]), lp(&[(3, 2), (2, -4)])).unwrap();
        assert_eq!(r.den(), &UPoly::from_ints(&[-2, 1]));
        assert_eq!(r.num(), &LaurentPoly::t_pow(-2));
        // negative leading coefficient moves into the numerator
        let s = RatFn::new(LaurentPoly::one(), lp(&[(0, 1), (1, -1)])).unwrap();
        assert_eq!(s.den(), &UPoly::from_ints(&[-1, 1]));
        assert_eq!(s.num(), &LaurentPoly::from_int(-1));
    }

    #[test]
    fn division_by_zero_errors() {
        assert!(RatFn::one().div(&RatFn::zero()).is_err());
        assert!(RatFn::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
    }

    #[test]
    fn bar_of_fraction() {
        // bar(1/(t-1)) = 1/(t^-1 - 1) = -t/(t-1)
        let r = RatFn::new(LaurentPoly::one(), lp(&[(1, 1), (0, -1)])).unwrap();
        let expect = RatFn::new(lp(&[(1, -1)]), lp(&[(1, 1), (0, -1)])).unwrap();
        assert_eq!(r.bar(), expect);
        assert_eq!(r.bar().bar(), r);
    }
}
