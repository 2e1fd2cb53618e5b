//! IHX relations and reduction modulo their span in a truncated coordinate
//! space.
//!
//! The truncation at bound `N` and level `D` is the span of basis terms whose
//! colors are `t^a / D` with `|a| <= N` after normal form. It is cut out of
//! the full space by keeping every IHX relation, generated from the
//! representative of each skeleton with leg colors `t^a / D` (`|a| <= N`) and
//! middle color 1, whose normal form lies in the box.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use super::colored::ColoredDiagram;
use super::graph::{all_skeletons, Graph, SkeletonCode};
use super::sum::{lcm_normalized, self_reciprocal, DiagramSum, Tensor};
use crate::algebra::{LaurentPoly, MultiWeight, RatFn, UPoly, Q};
use crate::error::GraphError;

/// The three-term relation at compact edge `e` from tail `u` to head `v`.
///
/// With `u` carrying legs `(a, b, e)` and `v` carrying `(e, c, d)` in cyclic
/// order, the relation is `T(a,b|c,d) + T(b,c|a,d) + T(c,a|b,d)`. Legs keep
/// their colors and orientations. The color of `e` must be a monomial
/// `c t^n`; a holonomy move at `u` makes it `c`, and `c` is factored out.
pub fn ihx_relation(d: &ColoredDiagram, e: usize) -> Result<DiagramSum, GraphError> {
    let g = &d.graph;
    if e >= g.num_edges() {
        return Err(GraphError::LabelGap { expected: g.num_edges(), label: e + 1 });
    }
    if g.is_loop(e) {
        return Err(GraphError::SelfLoop(e));
    }
    let (c, n) = d.colors[e].as_monomial().ok_or(GraphError::NonMonomialEdge(e))?;
    let (u, v) = (g.tail(e), g.head(e));
    let mut colors = d.holonomy_move(u, n).colors;
    colors[e] = RatFn::one();
    let su = g.slots(u);
    let sv = g.slots(v);
    let i = su.iter().position(|&h| h == (e, 0)).expect("tail of e sits at u");
    let j = sv.iter().position(|&h| h == (e, 1)).expect("head of e sits at v");
    let a = su[(i + 1) % 3];
    let b = su[(i + 2) % 3];
    let cc = sv[(j + 1) % 3];
    let dd = sv[(j + 2) % 3];
    let mut total = DiagramSum::zero();
    for (x, y, z, w) in [(a, b, cc, dd), (b, cc, a, dd), (cc, a, b, dd)] {
        let mut ends = g.all_ends().to_vec();
        ends[x.0][x.1] = (u, 0);
        ends[y.0][y.1] = (u, 1);
        ends[e][0] = (u, 2);
        ends[e][1] = (v, 0);
        ends[z.0][z.1] = (v, 1);
        ends[w.0][w.1] = (v, 2);
        let t = Graph::new(g.num_vertices(), ends).expect("reattachment keeps trivalence");
        let term = ColoredDiagram { graph: t, colors: colors.clone() };
        total = total.add(&term.normalize());
    }
    Ok(total.scale(&c))
}

/// Bound and level of a truncated coordinate space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Truncation {
    pub bound: i64,
    pub level: UPoly,
}

impl Truncation {
    pub fn new(bound: i64) -> Self {
        Truncation { bound, level: UPoly::one() }
    }

    pub fn with_level(bound: i64, level: &UPoly) -> Self {
        Truncation { bound, level: self_reciprocal(level) }
    }
}

/// Coordinate key: skeleton and exponent vector at the uniform level.
pub type Key = (SkeletonCode, Vec<i64>);

pub type SparseVec = BTreeMap<Key, Q>;

/// Coordinates of `s` after lifting every level to `level`.
pub fn coordinates(s: &DiagramSum, level: &UPoly) -> SparseVec {
    let mut out = SparseVec::new();
    for (code, t) in s.lifted_to(level).terms() {
        for (x, q) in t.num.terms() {
            out.insert((code.clone(), x.clone()), q.clone());
        }
    }
    out
}

/// Inverse of [`coordinates`].
pub fn from_coordinates(v: &SparseVec, level: &UPoly) -> DiagramSum {
    let mut by_code: BTreeMap<&SkeletonCode, Vec<(Vec<i64>, Q)>> = BTreeMap::new();
    for ((code, x), q) in v {
        by_code.entry(code).or_default().push((x.clone(), q.clone()));
    }
    let mut out = DiagramSum::zero();
    for (code, terms) in by_code {
        let ne = code.edges.len();
        let t = Tensor { levels: vec![level.clone(); ne], num: MultiWeight::from_terms(ne, terms) };
        out = out.add(&DiagramSum::from_tensor(code.clone(), t));
    }
    out
}

fn in_box(v: &SparseVec, bound: i64) -> bool {
    v.keys().all(|(_, x)| x.iter().all(|a| a.abs() <= bound))
}

/// Echelon basis of a subspace of sparse vectors. Every row is scaled so
/// its smallest key (the pivot) has coefficient 1, and pivots are distinct.
#[derive(Clone, Debug, Default)]
pub struct RelationSpan {
    rows: BTreeMap<Key, SparseVec>,
}

fn axpy(v: &mut SparseVec, c: &Q, row: &SparseVec) {
    for (k, x) in row {
        let y = v.entry(k.clone()).or_insert_with(Q::zero);
        *y -= c * x;
        if y.is_zero() {
            v.remove(k);
        }
    }
}

impl RelationSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The unique representative of `v + span` with no pivot keys.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        loop {
            let hit = v.iter().find(|(k, _)| self.rows.contains_key(*k)).map(|(k, c)| (k.clone(), c.clone()));
            let Some((k, c)) = hit else { return v };
            axpy(&mut v, &c, &self.rows[&k]);
        }
    }

    /// Adds `v` to the span; `false` if it was already contained.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((k, c)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else { return false };
        let inv = c.recip();
        let row = r.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        self.rows.insert(k, row);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Fully reduced basis, sorted by pivot.
    pub fn rref(&self) -> Vec<SparseVec> {
        let mut done: BTreeMap<Key, SparseVec> = BTreeMap::new();
        for (p, row) in self.rows.iter().rev() {
            let mut r = row.clone();
            loop {
                let hit = r.iter().find(|(k, _)| *k != p && done.contains_key(*k)).map(|(k, c)| (k.clone(), c.clone()));
                let Some((k, c)) = hit else { break };
                axpy(&mut r, &c, &done[&k]);
            }
            done.insert(p.clone(), r);
        }
        done.into_values().collect()
    }
}

fn relation_cache() -> &'static Mutex<HashMap<(usize, Truncation), Arc<RelationSpan>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, Truncation), Arc<RelationSpan>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Relation vectors generated on skeletons with `2k` vertices, in a fixed
/// order, with those leaving the box dropped.
pub fn truncated_relations(k: usize, trunc: &Truncation) -> Result<Vec<SparseVec>, GraphError> {
    let mut out = Vec::new();
    if trunc.bound < 0 {
        return Ok(out);
    }
    let level = self_reciprocal(&trunc.level);
    let den = LaurentPoly::from_upoly(level.clone());
    let n = trunc.bound;
    for code in all_skeletons(k)? {
        let rep = code.representative();
        let ne = rep.num_edges();
        for e in 0..ne {
            if rep.is_loop(e) {
                continue;
            }
            let legs: Vec<usize> = (0..ne).filter(|&f| f != e).collect();
            let mut exps = vec![-n; legs.len()];
            loop {
                let mut colors = vec![RatFn::one(); ne];
                for (i, &f) in legs.iter().enumerate() {
                    colors[f] = RatFn::new(LaurentPoly::t_pow(exps[i]), den.clone()).expect("nonzero level");
                }
                let d = ColoredDiagram { graph: rep.clone(), colors };
                let r = coordinates(&ihx_relation(&d, e)?, &level);
                if !r.is_empty() && in_box(&r, n) {
                    out.push(r);
                }
                // odometer over [-n, n]^legs
                let mut i = 0;
                while i < exps.len() && exps[i] == n {
                    exps[i] = -n;
                    i += 1;
                }
                if i == exps.len() {
                    break;
                }
                exps[i] += 1;
            }
        }
    }
    Ok(out)
}

/// Span of [`truncated_relations`], cached per `(k, truncation)`.
pub fn relation_span(k: usize, trunc: &Truncation) -> Result<Arc<RelationSpan>, GraphError> {
    let key = (k, Truncation::with_level(trunc.bound, &trunc.level));
    if let Some(s) = relation_cache().lock().unwrap().get(&key) {
        return Ok(s.clone());
    }
    let mut span = RelationSpan::new();
    for r in truncated_relations(k, &key.1)? {
        span.insert(&r);
    }
    let span = Arc::new(span);
    relation_cache().lock().unwrap().insert(key, span.clone());
    Ok(span)
}

/// Half the vertex count shared by every skeleton in `d`.
pub fn diagram_order(d: &DiagramSum) -> Result<Option<usize>, GraphError> {
    let mut k = None;
    for (code, _) in d.terms() {
        let kk = code.nv / 2;
        if k.map_or(false, |x| x != kk) {
            return Err(GraphError::Truncation("sum mixes diagrams with different vertex counts".into()));
        }
        k = Some(kk);
    }
    Ok(k)
}

/// Deterministic representative of the class of `d` modulo the IHX
/// relations of the truncation. The working level is the self-reciprocal
/// lcm of the truncation level and every level in `d`.
pub fn reduce_modulo_ihx(d: &DiagramSum, trunc: &Truncation) -> Result<DiagramSum, GraphError> {
    let Some(k) = diagram_order(d)? else { return Ok(DiagramSum::zero()) };
    let level = self_reciprocal(&lcm_normalized(&d.uniform_level(), &trunc.level));
    let v = coordinates(d, &level);
    let worst = v.keys().flat_map(|(_, x)| x.iter().map(|a| a.abs())).max().unwrap_or(0);
    if worst > trunc.bound {
        return Err(GraphError::Truncation(format!(
            "input has a color exponent of absolute value {} outside the truncation bound {}; rerun with a bound of at least {}",
            worst, trunc.bound, worst
        )));
    }
    let span = relation_span(k, &Truncation { bound: trunc.bound, level: level.clone() })?;
    Ok(from_coordinates(&span.reduce(&v), &level))
}

/// Whether `a` and `b` agree modulo IHX in the truncation.
pub fn ihx_equivalent(a: &DiagramSum, b: &DiagramSum, trunc: &Truncation) -> Result<bool, GraphError> {
    Ok(reduce_modulo_ihx(&a.sub(b), trunc)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn theta(c: [i64; 3]) -> ColoredDiagram {
        let g = Graph::from_edge_list(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        ColoredDiagram::new(g, c.iter().map(|&e| RatFn::t_pow(e)).collect()).unwrap()
    }

    #[test]
    fn self_loop_rejected() {
        let g = Graph::from_edge_list(2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        let d = ColoredDiagram::uncolored(g);
        assert_eq!(ihx_relation(&d, 0), Err(GraphError::SelfLoop(0)));
    }

    #[test]
    fn non_monomial_rejected() {
        let mut d = theta([0, 0, 0]);
        d.colors[0] = RatFn::from(LaurentPoly::from_terms([(0, q(1)), (1, q(1))]));
        assert_eq!(ihx_relation(&d, 0), Err(GraphError::NonMonomialEdge(0)));
    }

    #[test]
    fn relation_reduces_to_zero() {
        let d = theta([1, 0, -1]);
        let r = ihx_relation(&d, 1).unwrap();
        let tr = Truncation::new(2);
        assert!(reduce_modulo_ihx(&r, &tr).unwrap().is_zero());
    }

    #[test]
    fn outside_box_is_an_error() {
        let d = theta([5, 0, 1]).normalize();
        assert!(matches!(reduce_modulo_ihx(&d, &Truncation::new(1)), Err(GraphError::Truncation(_))));
    }

    #[test]
    fn negative_bound_is_empty() {
        assert!(truncated_relations(1, &Truncation::new(-1)).unwrap().is_empty());
    }

    #[test]
    fn reduction_is_idempotent() {
        let tr = Truncation::new(2);
        let d = theta([1, -1, 0]).normalize().add(&theta([0, 1, 1]).normalize());
        let r = reduce_modulo_ihx(&d, &tr).unwrap();
        assert_eq!(reduce_modulo_ihx(&r, &tr).unwrap(), r);
        assert!(reduce_modulo_ihx(&d.sub(&r), &tr).unwrap().is_zero());
    }
}
