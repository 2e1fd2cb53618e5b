//! Formal sums of colored diagrams in normal form.
//!
//! A diagram on skeleton `S` is transported to the representative graph of
//! `S`. Its coloring `(φ_e)` is recorded as a product of coordinates
//! `t^{a_e} / L_e`, where the level `L_e` is a self-reciprocal polynomial shared
//! by the automorphism orbit of `e`; a sum of such products is a
//! `MultiWeight` in one variable per edge. Holonomy is fixed by pushing every
//! spanning-forest edge to exponent 0, and automorphisms (with their AS signs
//! and edge flips) are averaged out. Skeletons with a bridge carry no classes:
//! holonomy on one side of a bridge rescales its color by any power of `t`,
//! so by linearity over `Q` every color on it is zero.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::colored::ColoredDiagram;
use super::graph::{skeleton, Skeleton, SkeletonCode};
use crate::algebra::{LaurentPoly, MultiWeight, RatFn, UPoly, Q};

/// Coordinates of one skeleton's part of a sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    pub levels: Vec<UPoly>,
    pub num: MultiWeight,
}

/// Element of the diagram space, keyed by skeleton.
#[derive(Clone, Debug, Default)]
pub struct DiagramSum {
    terms: BTreeMap<SkeletonCode, Tensor>,
}

/// Primitive, positive leading coefficient form of a nonzero polynomial.
pub(crate) fn normalized(p: &UPoly) -> UPoly {
    p.primitive_part().1
}

/// Smallest normalized self-reciprocal multiple of `d`.
pub(crate) fn self_reciprocal(d: &UPoly) -> UPoly {
    normalized(&d.lcm(&d.reciprocal()))
}

pub(crate) fn lcm_normalized(a: &UPoly, b: &UPoly) -> UPoly {
    normalized(&a.lcm(b))
}

/// For a self-reciprocal level `L` of degree `m`, `bar(t^a / L) = c t^{m-a} / L`.
fn flip_data(l: &UPoly) -> (i64, Q) {
    let m = l.degree().expect("levels are nonzero") as i64;
    let c = l.coeff(0) / l.lead();
    debug_assert!(c == Q::one() || c == -Q::one(), "level is not self-reciprocal");
    (m, c)
}

/// Holonomy moves at forest vertices until every forest edge has exponent 0.
fn gauge_fix(sk: &Skeleton, y: &mut [i64]) {
    for &(v, pe) in &sk.forest {
        let eps = if sk.rep.head(pe) == v { 1 } else { -1 };
        let n = -y[pe] * eps;
        for (e, end) in sk.rep.slots(v) {
            y[e] += if end == 1 { n } else { -n };
        }
    }
}

/// Gauge-fixed average over the automorphism group.
fn canonicalize(sk: &Skeleton, levels: &[UPoly], num: &MultiWeight) -> MultiWeight {
    let ne = levels.len();
    let flips: Vec<(i64, Q)> = levels.iter().map(flip_data).collect();
    let order = Q::from_integer((sk.auts.len() as i64).into());
    let mut acc = MultiWeight::zero(ne);
    for (x, q) in num.terms() {
        for a in &sk.auts {
            let mut y = vec![0i64; ne];
            let mut c = q / &order;
            if a.sign < 0 {
                c = -c;
            }
            for e in 0..ne {
                let e2 = a.emap[e];
                if a.flip[e] {
                    y[e2] = flips[e].0 - x[e];
                    c *= &flips[e].1;
                } else {
                    y[e2] = x[e];
                }
            }
            gauge_fix(sk, &mut y);
            acc.add_term(y, c);
        }
    }
    acc
}

fn lift(sk: &Skeleton, t: &Tensor, levels: &[UPoly]) -> MultiWeight {
    let ne = levels.len();
    let mut num = t.num.clone();
    let mut changed = false;
    for e in 0..ne {
        if t.levels[e] == levels[e] {
            continue;
        }
        let f = levels[e].div_exact(&t.levels[e]).expect("target level is a multiple");
        num = num.mul(&MultiWeight::from_laurent(ne, e, &LaurentPoly::from_upoly(f)));
        changed = true;
    }
    if changed {
        canonicalize(sk, levels, &num)
    } else {
        num
    }
}

impl Tensor {
    /// Color of edge `e` for the coordinate exponent `a`.
    pub fn coordinate(&self, e: usize, a: i64) -> RatFn {
        RatFn::over_normalized(LaurentPoly::t_pow(a), self.levels[e].clone())
    }
}

impl DiagramSum {
    pub fn zero() -> Self {
        DiagramSum { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_diagram(d: &ColoredDiagram) -> Self {
        let code = d.graph.code();
        let sk = skeleton(&code);
        if sk.bridged || d.colors.iter().any(RatFn::is_zero) {
            return Self::zero();
        }
        let iso = d.graph.first_isomorphism(&sk.rep).expect("graph matches its own skeleton");
        let ne = d.colors.len();
        let mut colors = vec![RatFn::zero(); ne];
        for (e, c) in d.colors.iter().enumerate() {
            colors[iso.emap[e]] = if iso.flip[e] { c.bar() } else { c.clone() };
        }
        let mut orbit_level: BTreeMap<usize, UPoly> = BTreeMap::new();
        for e in 0..ne {
            let l = orbit_level.entry(sk.edge_orbit[e]).or_insert_with(UPoly::one);
            *l = lcm_normalized(l, &self_reciprocal(colors[e].den()));
        }
        let levels: Vec<UPoly> = (0..ne).map(|e| orbit_level[&sk.edge_orbit[e]].clone()).collect();
        let mut num = MultiWeight::one(ne).scale(&Q::from_integer(iso.sign.into()));
        for e in 0..ne {
            let m = levels[e].div_exact(colors[e].den()).expect("level is a multiple of the denominator");
            let p = colors[e].num().mul(&LaurentPoly::from_upoly(m));
            num = num.mul(&MultiWeight::from_laurent(ne, e, &p));
        }
        Self::from_tensor(code, Tensor { levels, num })
    }

    /// Canonicalizes coordinates on one skeleton.
    pub(crate) fn from_tensor(code: SkeletonCode, t: Tensor) -> Self {
        let sk = skeleton(&code);
        let mut out = Self::zero();
        if sk.bridged {
            return out;
        }
        let num = canonicalize(&sk, &t.levels, &t.num);
        if !num.is_zero() {
            out.terms.insert(code, Tensor { levels: t.levels, num });
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SkeletonCode, &Tensor)> {
        self.terms.iter()
    }

    pub fn num_skeletons(&self) -> usize {
        self.terms.len()
    }

    pub fn tensor(&self, code: &SkeletonCode) -> Option<&Tensor> {
        self.terms.get(code)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (code, t) in &o.terms {
            match out.terms.remove(code) {
                None => {
                    out.terms.insert(code.clone(), t.clone());
                }
                Some(mine) => {
                    let sk = skeleton(code);
                    let levels: Vec<UPoly> =
                        mine.levels.iter().zip(&t.levels).map(|(a, b)| lcm_normalized(a, b)).collect();
                    let num = lift(&sk, &mine, &levels).add(&lift(&sk, t, &levels));
                    if !num.is_zero() {
                        out.terms.insert(code.clone(), Tensor { levels, num });
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, t)| (k.clone(), Tensor { levels: t.levels.clone(), num: t.num.scale(c) }))
            .collect();
        DiagramSum { terms }
    }

    /// Lcm of every level in the sum.
    pub fn uniform_level(&self) -> UPoly {
        let mut l = UPoly::one();
        for t in self.terms.values() {
            for x in &t.levels {
                l = lcm_normalized(&l, x);
            }
        }
        l
    }

    /// The same class with every level raised to `level`, which must be a
    /// self-reciprocal multiple of every present level.
    pub fn lifted_to(&self, level: &UPoly) -> Self {
        let mut out = Self::zero();
        for (code, t) in &self.terms {
            let sk = skeleton(code);
            let levels = vec![level.clone(); t.levels.len()];
            let num = lift(&sk, t, &levels);
            if !num.is_zero() {
                out.terms.insert(code.clone(), Tensor { levels, num });
            }
        }
        out
    }

    /// The sum with a single skeleton part, if `(levels, num)` is already in
    /// the form normalization produces: normalized self-reciprocal levels
    /// constant on edge orbits, and a gauge-fixed, automorphism-averaged `num`.
    pub(crate) fn from_canonical_part(code: &SkeletonCode, levels: Vec<UPoly>, num: MultiWeight) -> Option<Self> {
        let sk = skeleton(code);
        if levels.len() != sk.rep.num_edges() || num.nvars() != levels.len() {
            return None;
        }
        for (e, l) in levels.iter().enumerate() {
            if l.is_zero() || *l != normalized(l) || *l != self_reciprocal(l) || *l != levels[sk.edge_orbit[e]] {
                return None;
            }
        }
        if num.is_zero() || canonicalize(&sk, &levels, &num) != num {
            return None;
        }
        let mut terms = BTreeMap::new();
        terms.insert(code.clone(), Tensor { levels, num });
        Some(DiagramSum { terms })
    }

    /// Basis terms `(coefficient, skeleton, colors on the representative)`
    /// in canonical order.
    pub fn monomials(&self) -> Vec<(Q, &SkeletonCode, Vec<RatFn>)> {
        let mut out = Vec::new();
        for (code, t) in &self.terms {
            for (x, q) in t.num.terms() {
                let colors = x.iter().enumerate().map(|(e, &a)| t.coordinate(e, a)).collect();
                out.push((q.clone(), code, colors));
            }
        }
        out
    }
}

impl PartialEq for DiagramSum {
    fn eq(&self, o: &Self) -> bool {
        if self.terms.keys().ne(o.terms.keys()) {
            return false;
        }
        self.terms == o.terms || self.sub(o).is_zero()
    }
}

impl Eq for DiagramSum {}

impl fmt::Display for DiagramSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return writeln!(f, "0");
        }
        for (q, code, colors) in self.monomials() {
            let cs: Vec<String> = colors.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{} * graph{{{}}} colors{{{}}}", q, code, cs.join(", "))?;
        }
        Ok(())
    }
}
