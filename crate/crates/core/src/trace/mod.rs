//! The trace from weighted C-graphs to the diagram space, assembly of the
//! invariant from flow-graph counts, and the identities behind its
//! invariance.

mod verify;

pub use verify::{
    verify_degree_zero_cancellation, verify_propagator_independence, DegenerateCountTable, IndependenceReport,
};

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{MultiWeight, Q};
use crate::diagram::{monomial_action, validate_cgraph, CGraph, ColoredCGraph, ColoredDiagram, DiagramSum, EdgeKind};
use crate::error::{MorseError, TraceError};
use crate::morse::{find_propagator, reversed, Endo, Propagator, TwistedComplex};

/// One complex and one degree-1 endomorphism per edge label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    complexes: Vec<TwistedComplex>,
    maps: Vec<Endo>,
}

impl Family {
    /// Missing propagators are computed with [`find_propagator`].
    pub fn new(complexes: Vec<TwistedComplex>, propagators: Vec<Option<Propagator>>) -> Result<Self, TraceError> {
        if propagators.len() != complexes.len() {
            return Err(TraceError::FamilySize { expected: complexes.len(), found: propagators.len() });
        }
        let maps = complexes
            .iter()
            .zip(propagators)
            .map(|(c, g)| match g {
                Some(g) => Propagator::new(c, g.into_endo()).map(Propagator::into_endo),
                None => find_propagator(c).map(Propagator::into_endo),
            })
            .collect::<Result<Vec<_>, MorseError>>()?;
        Ok(Family { complexes, maps })
    }

    pub fn from_complexes(complexes: Vec<TwistedComplex>) -> Result<Self, TraceError> {
        let n = complexes.len();
        Family::new(complexes, vec![None; n])
    }

    /// No identity check; for exercising the verifiers on non-propagators.
    pub fn from_maps(complexes: Vec<TwistedComplex>, maps: Vec<Endo>) -> Result<Self, TraceError> {
        if maps.len() != complexes.len() {
            return Err(TraceError::FamilySize { expected: complexes.len(), found: maps.len() });
        }
        for (c, g) in complexes.iter().zip(&maps) {
            if g.degree() != 1 || g.dims() != c.dims() {
                return Err(MorseError::EndoShape(format!("expected a degree 1 map on dims {:?}", c.dims())).into());
            }
        }
        Ok(Family { complexes, maps })
    }

    pub fn len(&self) -> usize {
        self.complexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complexes.is_empty()
    }

    pub fn complexes(&self) -> &[TwistedComplex] {
        &self.complexes
    }

    pub fn complex(&self, i: usize) -> &TwistedComplex {
        &self.complexes[i]
    }

    pub fn map(&self, i: usize) -> &Endo {
        &self.maps[i]
    }

    pub fn maps(&self) -> &[Endo] {
        &self.maps
    }

    pub fn replaced(&self, i: usize, c: TwistedComplex, g: Endo) -> Self {
        let mut out = self.clone();
        out.complexes[i] = c;
        out.maps[i] = g;
        out
    }
}

/// Multiplies the color of each separated edge `(p, q)` by `-g_{qp}`, glues
/// its white vertices, and normalizes.
pub fn trace(gamma: &ColoredCGraph, fam: &Family) -> Result<DiagramSum, TraceError> {
    Ok(glued(gamma, fam)?.normalize())
}

/// The glued diagram of [`trace`] before normalization.
pub(crate) fn glued(gamma: &ColoredCGraph, fam: &Family) -> Result<ColoredDiagram, TraceError> {
    let g = &gamma.graph;
    if fam.len() < g.num_edges() {
        return Err(TraceError::FamilySize { expected: g.num_edges(), found: fam.len() });
    }
    validate_cgraph(g, fam.complexes())?;
    let mut colors = gamma.colors.clone();
    for (e, kind) in g.kinds().iter().enumerate() {
        let EdgeKind::Separated { input, output } = kind else { continue };
        let c = fam.complex(e);
        let p = c.locate(input).expect("validated");
        let q = c.locate(output).expect("validated");
        if p.0 != q.0 + 1 {
            return Err(TraceError::NoEntry { edge: e, input: input.clone(), output: output.clone() });
        }
        colors[e] = colors[e].mul(&fam.map(e).entry(q, p).neg());
    }
    Ok(ColoredDiagram::new(g.graph().clone(), colors)?)
}

/// `Tr(w · Γ)`, linear in `w`.
pub fn trace_weighted(g: &CGraph, w: &MultiWeight, fam: &Family) -> Result<DiagramSum, TraceError> {
    if w.nvars() != g.num_edges() {
        return Err(TraceError::WeightArity { expected: g.num_edges(), found: w.nvars() });
    }
    let mut out = DiagramSum::zero();
    for (c, gamma) in monomial_action(w, g)? {
        out = out.add(&trace(&gamma, fam)?.scale(&c));
    }
    Ok(out)
}

/// Gradient sign pattern `(ε_1, ..., ε_{3k})`, written with `+` and `-`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignPattern(pub Vec<bool>);

impl SignPattern {
    pub fn all_plus(n: usize) -> Self {
        SignPattern(vec![false; n])
    }

    pub fn is_flipped(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All `2^n` patterns in increasing order.
    pub fn all(n: usize) -> Vec<SignPattern> {
        (0..1u64 << n).map(|m| SignPattern((0..n).map(|i| m >> (n - 1 - i) & 1 == 1).collect())).collect()
    }

    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Some(false),
                '-' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(SignPattern)
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "-" } else { "+" })?;
        }
        Ok(())
    }
}

/// Weighted flow-graph counts `#M_Γ(ξ)` for one sign pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowCountTable {
    pub k: usize,
    pub pattern: SignPattern,
    pub entries: Vec<(CGraph, MultiWeight)>,
}

impl FlowCountTable {
    pub fn empty(k: usize) -> Self {
        FlowCountTable { k, pattern: SignPattern::all_plus(3 * k), entries: Vec::new() }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let entries = self.entries.iter().map(|(g, w)| (g.clone(), w.scale(c))).collect();
        FlowCountTable { entries, ..self.clone() }
    }

    pub fn concat(&self, o: &Self) -> Self {
        let mut entries = self.entries.clone();
        entries.extend(o.entries.iter().cloned());
        FlowCountTable { entries, ..self.clone() }
    }
}

/// `z = Tr(Σ_Γ #M_Γ · Γ)`. Every key must have degree `(1, ..., 1)`.
pub fn assemble_z(counts: &FlowCountTable, fam: &Family) -> Result<DiagramSum, TraceError> {
    let mut out = DiagramSum::zero();
    for (index, (g, w)) in counts.entries.iter().enumerate() {
        let deg = validate_cgraph(g, fam.complexes())?;
        if !deg.is_all_ones() {
            return Err(TraceError::DegreeVector { index, degree: deg.0 });
        }
        out = out.add(&trace_weighted(g, w, fam)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnomalyData {
    pub z_anom: DiagramSum,
    /// `None` when no value was supplied; treated as 0.
    pub mu_k: Option<DiagramSum>,
    pub sign_w: i64,
}

impl AnomalyData {
    pub fn zero() -> Self {
        AnomalyData { z_anom: DiagramSum::zero(), mu_k: None, sign_w: 0 }
    }

    pub fn mu_defaulted(&self) -> bool {
        self.mu_k.is_none()
    }
}

/// `z - z_anom + sign(W) μ_k`.
pub fn correct_anomaly(z: &DiagramSum, a: &AnomalyData) -> DiagramSum {
    let mut out = z.sub(&a.z_anom);
    if let Some(mu) = &a.mu_k {
        out = out.add(&mu.scale(&Q::from_integer(a.sign_w.into())));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternInput {
    pub family: Family,
    pub counts: FlowCountTable,
    pub anomaly: AnomalyData,
}

/// Checks that every pattern is present and that each flipped complex is
/// exactly the reversal of the all-plus complex with the same label.
pub fn validate_patterns(inputs: &BTreeMap<SignPattern, PatternInput>) -> Result<usize, TraceError> {
    let n = inputs.keys().next().map_or(0, SignPattern::len);
    let base_key = SignPattern::all_plus(n);
    let base = inputs.get(&base_key).ok_or_else(|| TraceError::MissingPattern(base_key.to_string()))?;
    if base.family.len() != n {
        return Err(TraceError::FamilySize { expected: n, found: base.family.len() });
    }
    for pat in SignPattern::all(n) {
        let inp = inputs.get(&pat).ok_or_else(|| TraceError::MissingPattern(pat.to_string()))?;
        if inp.family.len() != n {
            return Err(TraceError::FamilySize { expected: n, found: inp.family.len() });
        }
        for i in 0..n {
            let b = base.family.complex(i);
            let ok = if pat.is_flipped(i) { *inp.family.complex(i) == reversed(b) } else { inp.family.complex(i) == b };
            if !ok {
                return Err(TraceError::ReversalMismatch { pattern: pat.to_string(), edge: i });
            }
        }
    }
    if inputs.len() != 1 << n {
        let extra = inputs.keys().find(|p| p.len() != n).expect("a pattern of another length");
        return Err(TraceError::MissingPattern(format!("{} has the wrong length", extra)));
    }
    Ok(n)
}

/// `Σ_ε ẑ(ε)`, summed in pattern order.
pub fn sum_over_orientations(inputs: &BTreeMap<SignPattern, PatternInput>) -> Result<DiagramSum, TraceError> {
    validate_patterns(inputs)?;
    let mut out = DiagramSum::zero();
    for inp in inputs.values() {
        let z = assemble_z(&inp.counts, &inp.family)?;
        out = out.add(&correct_anomaly(&z, &inp.anomaly));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, LaurentPoly, Matrix, RatFn, UPoly};
    use crate::diagram::Graph;

    fn tm1() -> LaurentPoly {
        LaurentPoly::from_terms([(1, q(1)), (0, q(-1))])
    }

    fn interval() -> TwistedComplex {
        let gens = [vec!["q".to_string()], vec!["p".to_string()], vec![], vec![]];
        let b1 = Matrix::from_rows(vec![vec![tm1()]]).unwrap();
        TwistedComplex::new(gens, [b1, Matrix::zeros(1, 0), Matrix::zeros(0, 0)]).unwrap()
    }

    fn theta() -> Graph {
        Graph::from_edge_list(2, &[(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn compact_graph_ignores_propagators() {
        let fam = Family::from_complexes(vec![interval(); 3]).unwrap();
        let g = CGraph::compact(theta());
        let z = trace_weighted(&g, &MultiWeight::one(3), &fam).unwrap();
        assert_eq!(z, ColoredDiagram::uncolored(theta()).normalize());
    }

    #[test]
    fn separated_edge_color() {
        // g(q) = p / (t - 1), so the glued edge has color -t / (t - 1)
        let fam = Family::from_complexes(vec![interval(); 3]).unwrap();
        let inv = RatFn::new(LaurentPoly::one(), tm1()).unwrap();
        assert_eq!(fam.map(0).entry((0, 0), (1, 0)), inv);
        let sep = EdgeKind::Separated { input: "p".into(), output: "q".into() };
        let g = CGraph::compact(theta()).with_kind(0, sep);
        let mut gamma = ColoredCGraph::uncolored(g);
        gamma.colors[0] = RatFn::t_pow(1);
        let got = trace(&gamma, &fam).unwrap();
        let mut colors = vec![RatFn::one(); 3];
        colors[0] = RatFn::new(LaurentPoly::t_pow(1).neg(), tm1()).unwrap();
        assert_eq!(got, ColoredDiagram::new(theta(), colors).unwrap().normalize());
    }

    #[test]
    fn degree_checked() {
        let fam = Family::from_complexes(vec![interval(); 3]).unwrap();
        let flat = EdgeKind::Separated { input: "p".into(), output: "p".into() };
        let g = CGraph::compact(theta()).with_kind(2, flat);
        let t = FlowCountTable { entries: vec![(g, MultiWeight::one(3))], ..FlowCountTable::empty(1) };
        assert!(matches!(assemble_z(&t, &fam), Err(TraceError::DegreeVector { index: 0, .. })));
    }

    #[test]
    fn anomaly_correction() {
        let mu = ColoredDiagram::uncolored(theta()).normalize();
        let z = mu.scale(&q(3));
        let a = AnomalyData { z_anom: DiagramSum::zero(), mu_k: Some(mu.clone()), sign_w: 1 };
        assert_eq!(correct_anomaly(&DiagramSum::zero(), &a), mu);
        assert_eq!(correct_anomaly(&z, &AnomalyData::zero()), z);
    }

    #[test]
    fn orientation_sum() {
        let mu = ColoredDiagram::uncolored(theta()).normalize();
        let a = AnomalyData { z_anom: DiagramSum::zero(), mu_k: Some(mu.clone()), sign_w: 1 };
        let base = interval();
        let flipped = reversed(&base);
        let mut inputs = BTreeMap::new();
        for pat in SignPattern::all(3) {
            let cs = (0..3).map(|i| if pat.is_flipped(i) { flipped.clone() } else { base.clone() }).collect();
            let family = Family::from_complexes(cs).unwrap();
            inputs.insert(pat, PatternInput { family, counts: FlowCountTable::empty(1), anomaly: a.clone() });
        }
        assert_eq!(sum_over_orientations(&inputs).unwrap(), mu.scale(&q(8)));
        let pat = SignPattern::parse("+-+").unwrap();
        let bad = Family::from_complexes(vec![base.clone(); 3]).unwrap();
        inputs.get_mut(&pat).unwrap().family = bad;
        assert!(matches!(sum_over_orientations(&inputs), Err(TraceError::ReversalMismatch { edge: 1, .. })));
        inputs.remove(&pat);
        assert!(matches!(sum_over_orientations(&inputs), Err(TraceError::MissingPattern(_))));
    }

    #[test]
    fn sp_naturality() {
        let c = interval();
        let fam = Family::from_complexes(vec![c.clone(); 3]).unwrap();
        let sep = EdgeKind::Separated { input: "p".into(), output: "q".into() };
        let mut gamma = ColoredCGraph::uncolored(CGraph::compact(theta()).with_kind(1, sep));
        gamma.colors[1] =
            RatFn::new(LaurentPoly::t_pow(2), LaurentPoly::from_upoly(UPoly::from_ints(&[2, 1]))).unwrap();
        for (name, sign) in [("p", 1), ("p", -1), ("q", 1), ("q", -1)] {
            let g = Propagator::new(&c, fam.map(1).clone()).unwrap();
            let (c2, g2) = crate::morse::conjugate_by_sp(&c, &g, name, sign).unwrap();
            let fam2 = fam.replaced(1, c2, g2.into_endo());
            assert_eq!(trace(&gamma.sp_action(1, name, sign), &fam2).unwrap(), trace(&gamma, &fam).unwrap());
        }
    }
}
