use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::laurent::fmt_coeff_term;
use super::{LaurentPoly, Q};

/// An element of `Q[t_1^±1, ..., t_n^±1]`.
///
/// Terms are kept in a `BTreeMap`, so iteration (and serialization) follows
/// the lexicographic order of exponent vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiWeight {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Q>,
}

impl MultiWeight {
    pub fn zero(nvars: usize) -> Self {
        MultiWeight { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(Q::one(), vec![0; nvars])
    }

    pub fn monomial(c: Q, exps: Vec<i64>) -> Self {
        let mut w = Self::zero(exps.len());
        if !c.is_zero() {
            w.terms.insert(exps, c);
        }
        w
    }

    /// Embeds a one-variable Laurent polynomial as a polynomial in `t_{var+1}`.
    pub fn from_laurent(nvars: usize, var: usize, p: &LaurentPoly) -> Self {
        assert!(var < nvars);
        let mut w = Self::zero(nvars);
        for (e, c) in p.terms() {
            let mut x = vec![0; nvars];
            x[var] = e;
            w.terms.insert(x, c.clone());
        }
        w
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i64>, Q)>>(nvars: usize, it: I) -> Self {
        let mut w = Self::zero(nvars);
        for (x, c) in it {
            assert_eq!(x.len(), nvars, "exponent vector length");
            w.add_term(x, c);
        }
        w
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Q)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Vec<i64>, Q> {
        self.terms
    }

    pub fn coeff(&self, x: &[i64]) -> Q {
        self.terms.get(x).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `c * t^x` in place.
    pub fn add_term(&mut self, x: Vec<i64>, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(x) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut r = self.clone();
        for (x, c) in &o.terms {
            r.add_term(x.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        MultiWeight { nvars: self.nvars, terms: self.terms.iter().map(|(x, c)| (x.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiWeight { nvars: self.nvars, terms: self.terms.iter().map(|(x, v)| (x.clone(), v * c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut r = Self::zero(self.nvars);
        for (x, a) in &self.terms {
            for (y, b) in &o.terms {
                let z = x.iter().zip(y).map(|(p, q)| p + q).collect();
                r.add_term(z, a * b);
            }
        }
        r
    }

    /// Substitutes `t_i -> t_i^-1` for every variable.
    pub fn bar(&self) -> Self {
        MultiWeight {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(x, c)| (x.iter().map(|e| -e).collect(), c.clone())).collect(),
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }
}

impl fmt::Display for MultiWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (x, c)) in self.terms.iter().enumerate() {
            let var = x
                .iter()
                .enumerate()
                .filter(|(_, e)| **e != 0)
                .map(|(j, e)| if *e == 1 { format!("t{}", j + 1) } else { format!("t{}^{}", j + 1, e) })
                .collect::<Vec<_>>()
                .join("*");
            fmt_coeff_term(f, i == 0, c, &var)?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
