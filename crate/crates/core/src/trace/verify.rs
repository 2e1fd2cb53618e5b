use std::collections::BTreeMap;

use super::{assemble_z, glued, Family};
use crate::algebra::{MultiWeight, RatFn};
use crate::diagram::{
    monomial_action, reduce_modulo_ihx, validate_cgraph, CGraph, ColoredDiagram, DiagramSum, EdgeKind, Truncation,
};
use crate::error::TraceError;

/// Counts `W` of degenerate graphs `Γ'(p̃, q̃)_i`: edge `i` is separated with
/// `ind p̃ = ind q̃` and every other edge has degree 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegenerateCountTable {
    pub entries: Vec<(CGraph, MultiWeight)>,
}

/// `(edge, input, output)` of the unique degree-0 edge.
fn degenerate_edge(index: usize, g: &CGraph, fam: &Family) -> Result<(usize, String, String), TraceError> {
    let deg = validate_cgraph(g, fam.complexes())?;
    let zeros = deg.zero_edges();
    let ones = deg.0.iter().filter(|&&d| d == 1).count();
    if zeros.len() != 1 || ones + 1 != deg.0.len() {
        return Err(TraceError::Degenerate {
            index,
            msg: format!("degree vector {:?} needs one 0 and the rest 1", deg.0),
        });
    }
    let e = zeros[0];
    let EdgeKind::Separated { input, output } = g.kind(e) else { unreachable!("compact edges have degree 1") };
    Ok((e, input.clone(), output.clone()))
}

/// Glued terms of one group that differ only in the color of edge `i`,
/// merged by linearity before normalization.
#[derive(Default)]
struct Merged {
    terms: Vec<ColoredDiagram>,
}

impl Merged {
    fn add_weighted(&mut self, i: usize, g: &CGraph, w: &MultiWeight, fam: &Family) -> Result<(), TraceError> {
        for (c, gamma) in monomial_action(w, g)? {
            let mut d = glued(&gamma, fam)?;
            d.colors[i] = d.colors[i].mul(&RatFn::constant(c));
            let same = |t: &ColoredDiagram| {
                t.graph == d.graph && t.colors.iter().zip(&d.colors).enumerate().all(|(e, (a, b))| e == i || a == b)
            };
            match self.terms.iter_mut().find(|t| same(t)) {
                Some(t) => t.colors[i] = t.colors[i].add(&d.colors[i]),
                None => self.terms.push(d),
            }
        }
        Ok(())
    }

    fn is_zero(&self) -> bool {
        let sum = self
            .terms
            .iter()
            .filter(|t| !t.colors.iter().any(RatFn::is_zero))
            .fold(DiagramSum::zero(), |acc, t| acc.add(&t.normalize()));
        sum.is_zero()
    }
}

/// Traces `W · (Σ_x ∂_{x p̃} Γ'(x, q̃) + Σ_y ∂_{q̃ y} Γ'(p̃, y) + δ_{p̃ q̃} Γ'(∅, ∅))`
/// for each group `(i, p̃, q̃)` and checks that every group vanishes. Here
/// `∂_{ab}` is the coefficient of `b` in `∂a`, placed in the variable `t_i`.
pub fn verify_degree_zero_cancellation(w: &DegenerateCountTable, fam: &Family) -> Result<bool, TraceError> {
    let mut groups: BTreeMap<(usize, String, String), Merged> = BTreeMap::new();
    for (index, (g, weight)) in w.entries.iter().enumerate() {
        let n = g.num_edges();
        if weight.nvars() != n {
            return Err(TraceError::WeightArity { expected: n, found: weight.nvars() });
        }
        let (i, pt, qt) = degenerate_edge(index, g, fam)?;
        let c = fam.complex(i);
        let (dp, ip) = c.locate(&pt).expect("validated");
        let (dq, iq) = c.locate(&qt).expect("validated");
        let slot = groups.entry((i, pt.clone(), qt.clone())).or_default();
        if dp < 3 {
            let b = c.boundary(dp + 1);
            for (xi, x) in c.generators(dp + 1).iter().enumerate() {
                let d = b.get(ip, xi);
                if d.is_zero() {
                    continue;
                }
                let gx = g.with_kind(i, EdgeKind::Separated { input: x.clone(), output: qt.clone() });
                let wx = weight.mul(&MultiWeight::from_laurent(n, i, d));
                slot.add_weighted(i, &gx, &wx, fam)?;
            }
        }
        if dq > 0 {
            let b = c.boundary(dq);
            for (yi, y) in c.generators(dq - 1).iter().enumerate() {
                let d = b.get(yi, iq);
                if d.is_zero() {
                    continue;
                }
                let gy = g.with_kind(i, EdgeKind::Separated { input: pt.clone(), output: y.clone() });
                let wy = weight.mul(&MultiWeight::from_laurent(n, i, d));
                slot.add_weighted(i, &gy, &wy, fam)?;
            }
        }
        if pt == qt {
            slot.add_weighted(i, &g.with_kind(i, EdgeKind::Compact), weight, fam)?;
        }
    }
    Ok(groups.values().all(Merged::is_zero))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    pub holds: bool,
    /// `z(g) - z(g')` before IHX reduction.
    pub difference: DiagramSum,
    /// Its representative modulo IHX in the truncation.
    pub residual: DiagramSum,
}

/// Compares `z` assembled with two propagator families modulo IHX.
pub fn verify_propagator_independence(
    counts: &super::FlowCountTable,
    a: &Family,
    b: &Family,
    trunc: &Truncation,
) -> Result<IndependenceReport, TraceError> {
    let difference = assemble_z(counts, a)?.sub(&assemble_z(counts, b)?);
    let residual = reduce_modulo_ihx(&difference, trunc)?;
    Ok(IndependenceReport { holds: residual.is_zero(), difference, residual })
}
