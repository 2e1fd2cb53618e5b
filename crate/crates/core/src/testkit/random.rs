//! Random objects of every serializable type, for round-trip and property
//! tests. All draws come from the caller's seeded generator.

use rand::seq::SliceRandom;
use rand::Rng;

use super::random_acyclic_complex;
use crate::algebra::{LaurentPoly, Matrix, MultiWeight, RatFn, UPoly, Q};
use crate::diagram::{CGraph, ColoredCGraph, ColoredDiagram, DiagramSum, EdgeKind, Graph};
use crate::morse::{Endo, TwistedComplex, TOP};
use crate::trace::{AnomalyData, FlowCountTable, SignPattern};

pub fn rational(rng: &mut impl Rng) -> Q {
    let n: i64 = rng.gen_range(-9..=9);
    let d: i64 = [1, 1, 1, 2, 3, 5, 7][rng.gen_range(0..7)];
    Q::new(n.into(), d.into())
}

fn nonzero_rational(rng: &mut impl Rng) -> Q {
    loop {
        let q = rational(rng);
        if q != Q::from_integer(0.into()) {
            return q;
        }
    }
}

/// Up to `max_terms` terms with exponents in `[-bound, bound]`; may be zero.
pub fn laurent(rng: &mut impl Rng, bound: i64, max_terms: usize) -> LaurentPoly {
    let n = rng.gen_range(0..=max_terms);
    LaurentPoly::from_terms((0..n).map(|_| (rng.gen_range(-bound..=bound), rational(rng))))
}

pub fn nonzero_laurent(rng: &mut impl Rng, bound: i64, max_terms: usize) -> LaurentPoly {
    loop {
        let p = laurent(rng, bound, max_terms.max(1));
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn ratfn(rng: &mut impl Rng, bound: i64) -> RatFn {
    let num = laurent(rng, bound, 3);
    let deg = rng.gen_range(0..=bound.max(0) as usize);
    let mut coeffs: Vec<Q> = (0..=deg).map(|_| rational(rng)).collect();
    coeffs[0] = nonzero_rational(rng);
    coeffs[deg] = nonzero_rational(rng);
    let den = LaurentPoly::from_upoly(UPoly::from_coeffs(coeffs));
    RatFn::new(num, den).expect("nonzero denominator")
}

pub fn multiweight(rng: &mut impl Rng, nvars: usize, bound: i64, max_terms: usize) -> MultiWeight {
    let n = rng.gen_range(0..=max_terms);
    MultiWeight::from_terms(
        nvars,
        (0..n).map(|_| ((0..nvars).map(|_| rng.gen_range(-bound..=bound)).collect(), rational(rng))),
    )
}

pub fn feasible_sizes(rng: &mut impl Rng, max: usize) -> [usize; 4] {
    loop {
        let r1 = rng.gen_range(0..=max);
        let r2 = rng.gen_range(0..=max);
        let r3 = rng.gen_range(0..=max);
        if r1 + r2 <= max && r2 + r3 <= max {
            return [r1, r1 + r2, r2 + r3, r3];
        }
    }
}

pub fn acyclic_complex(rng: &mut impl Rng, max: usize, bound: i64) -> TwistedComplex {
    let sizes = feasible_sizes(rng, max);
    random_acyclic_complex(rng.gen(), sizes, bound).expect("feasible sizes").0
}

/// Random `RatFn` blocks of the given degree.
pub fn endo(rng: &mut impl Rng, dims: [usize; 4], degree: i64, bound: i64) -> Endo {
    let mut e = Endo::zero(dims, degree);
    for d in 0..=TOP {
        let t = d as i64 + degree;
        if !(0..=TOP as i64).contains(&t) {
            continue;
        }
        for s in 0..dims[d] {
            for r in 0..dims[t as usize] {
                if rng.gen_bool(0.6) {
                    e.set_entry((d, s), (t as usize, r), ratfn(rng, bound));
                }
            }
        }
    }
    e
}

/// Connected trivalent graph on `2k` vertices from a random half-edge
/// matching, with random slot order and orientations.
pub fn graph(rng: &mut impl Rng, k: usize) -> Graph {
    let nv = 2 * k;
    loop {
        let mut hs: Vec<(usize, usize)> = (0..nv).flat_map(|v| (0..3).map(move |s| (v, s))).collect();
        hs.shuffle(rng);
        let ends: Vec<[(usize, usize); 2]> = hs.chunks(2).map(|c| [c[0], c[1]]).collect();
        let g = Graph::new(nv, ends).expect("every slot used once");
        if g.is_connected() {
            return g;
        }
    }
}

/// Generator names for separated edges are drawn from `complexes[e]` when
/// given, otherwise from a fixed pool.
pub fn cgraph(rng: &mut impl Rng, k: usize, complexes: Option<&[TwistedComplex]>) -> CGraph {
    let g = graph(rng, k);
    let pool: Vec<String> = ["p", "q", "a1", "b_2", "x.3"].iter().map(|s| s.to_string()).collect();
    let kinds = (0..g.num_edges())
        .map(|e| {
            let names: Vec<String> = match complexes {
                Some(cs) => cs[e].all_generators().iter().flatten().cloned().collect(),
                None => pool.clone(),
            };
            if names.is_empty() || rng.gen_bool(0.5) {
                EdgeKind::Compact
            } else {
                EdgeKind::Separated {
                    input: names.choose(rng).unwrap().clone(),
                    output: names.choose(rng).unwrap().clone(),
                }
            }
        })
        .collect();
    CGraph::new(g, kinds).expect("even vertex count")
}

pub fn colored_cgraph(rng: &mut impl Rng, k: usize, bound: i64) -> ColoredCGraph {
    let g = cgraph(rng, k, None);
    let colors = (0..g.num_edges()).map(|_| ratfn(rng, bound)).collect();
    ColoredCGraph::new(g, colors).expect("one color per edge")
}

fn levels() -> [UPoly; 3] {
    [UPoly::one(), UPoly::from_ints(&[1, 1]), UPoly::from_ints(&[1, -3, 1])]
}

fn level_color(rng: &mut impl Rng, bound: i64, level: &UPoly) -> RatFn {
    let num = LaurentPoly::monomial(nonzero_rational(rng), rng.gen_range(-bound..=bound));
    RatFn::new(num, LaurentPoly::from_upoly(level.clone())).expect("nonzero level")
}

/// Colors `c t^a / D` with `D` drawn per edge from a few self-reciprocal levels.
pub fn colored_diagram(rng: &mut impl Rng, k: usize, bound: i64) -> ColoredDiagram {
    let g = graph(rng, k);
    let ls = levels();
    let colors = (0..g.num_edges())
        .map(|_| {
            let l = ls.choose(rng).unwrap().clone();
            level_color(rng, bound, &l)
        })
        .collect();
    ColoredDiagram::new(g, colors).expect("one color per edge")
}

/// Terms share one level, which keeps sums from lifting to large common
/// denominators.
pub fn diagram_sum(rng: &mut impl Rng, k: usize, bound: i64, max_terms: usize) -> DiagramSum {
    let n = rng.gen_range(0..=max_terms);
    let level = levels().choose(rng).unwrap().clone();
    (0..n).fold(DiagramSum::zero(), |acc, _| {
        let g = graph(rng, k);
        let colors = (0..g.num_edges()).map(|_| level_color(rng, bound, &level)).collect();
        let d = ColoredDiagram::new(g, colors).expect("one color per edge");
        acc.add(&d.normalize().scale(&rational(rng)))
    })
}

pub fn sign_pattern(rng: &mut impl Rng, n: usize) -> SignPattern {
    SignPattern((0..n).map(|_| rng.gen_bool(0.5)).collect())
}

pub fn count_table(rng: &mut impl Rng, k: usize, entries: usize) -> FlowCountTable {
    let entries = (0..entries).map(|_| (cgraph(rng, k, None), multiweight(rng, 3 * k, 2, 3))).collect();
    FlowCountTable { k, pattern: sign_pattern(rng, 3 * k), entries }
}

pub fn anomaly(rng: &mut impl Rng, k: usize) -> AnomalyData {
    AnomalyData {
        z_anom: diagram_sum(rng, k, 2, 2),
        mu_k: if rng.gen_bool(0.5) { Some(diagram_sum(rng, k, 2, 2)) } else { None },
        sign_w: rng.gen_range(-2..=2),
    }
}

/// Dense matrix of random Laurent entries.
pub fn laurent_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Matrix<LaurentPoly> {
    Matrix::from_fn(rows, cols, |_, _| laurent(rng, bound, 2))
}
