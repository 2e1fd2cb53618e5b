//! Graphs whose edges are either compact or separated into two arcs ending at
//! white vertices decorated by Morse generators.

use super::graph::{Graph, HalfEdge};
use crate::algebra::{MultiWeight, RatFn, Q};
use crate::error::GraphError;
use crate::morse::TwistedComplex;

/// A separated edge is stored in the underlying graph with its output arc at
/// the tail and its input arc at the head, so gluing yields an edge from the
/// output attachment to the input attachment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Compact,
    Separated { input: String, output: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CGraph {
    graph: Graph,
    kinds: Vec<EdgeKind>,
}

/// Per-edge degrees: 1 on compact edges, `ind(input) - ind(output)` on
/// separated ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeVector(pub Vec<i64>);

impl DegreeVector {
    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|&d| d == 1)
    }

    pub fn zero_edges(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&e| self.0[e] == 0).collect()
    }
}

impl CGraph {
    /// `graph` must have an even, positive number of vertices.
    pub fn new(graph: Graph, kinds: Vec<EdgeKind>) -> Result<Self, GraphError> {
        let nv = graph.num_vertices();
        if nv == 0 || nv % 2 != 0 {
            return Err(GraphError::VertexRange(nv));
        }
        if kinds.len() != graph.num_edges() {
            return Err(GraphError::LabelGap { expected: graph.num_edges(), label: kinds.len() + 1 });
        }
        Ok(CGraph { graph, kinds })
    }

    pub fn compact(graph: Graph) -> Self {
        let kinds = vec![EdgeKind::Compact; graph.num_edges()];
        CGraph::new(graph, kinds).expect("trivalent graphs have an even vertex count")
    }

    pub fn k(&self) -> usize {
        self.graph.num_vertices() / 2
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_edges(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, e: usize) -> &EdgeKind {
        &self.kinds[e]
    }

    pub fn kinds(&self) -> &[EdgeKind] {
        &self.kinds
    }

    /// Attachment of the input arc (separated) or the head (compact).
    pub fn input_slot(&self, e: usize) -> HalfEdge {
        self.graph.ends(e)[1]
    }

    /// Attachment of the output arc (separated) or the tail (compact).
    pub fn output_slot(&self, e: usize) -> HalfEdge {
        self.graph.ends(e)[0]
    }

    /// A separated edge whose arcs meet the same black vertex.
    pub fn is_closed(&self, e: usize) -> bool {
        matches!(self.kinds[e], EdgeKind::Separated { .. }) && self.graph.is_loop(e)
    }

    pub fn with_kind(&self, e: usize, kind: EdgeKind) -> Self {
        let mut kinds = self.kinds.clone();
        kinds[e] = kind;
        CGraph { graph: self.graph.clone(), kinds }
    }
}

/// Checks decorations against `complexes[e]` (one complex per edge label)
/// and returns the degree vector.
pub fn validate_cgraph(g: &CGraph, complexes: &[TwistedComplex]) -> Result<DegreeVector, GraphError> {
    let mut deg = Vec::with_capacity(g.num_edges());
    for (e, kind) in g.kinds.iter().enumerate() {
        match kind {
            EdgeKind::Compact => deg.push(1),
            EdgeKind::Separated { input, output } => {
                let c = complexes.get(e).ok_or(GraphError::MissingComplex(e))?;
                let ind = |name: &String| {
                    c.locate(name)
                        .map(|(d, _)| d as i64)
                        .ok_or_else(|| GraphError::UnknownGenerator { edge: e, name: name.clone() })
                };
                deg.push(ind(input)? - ind(output)?);
            }
        }
    }
    Ok(DegreeVector(deg))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredCGraph {
    pub graph: CGraph,
    pub colors: Vec<RatFn>,
}

impl ColoredCGraph {
    pub fn new(graph: CGraph, colors: Vec<RatFn>) -> Result<Self, GraphError> {
        if colors.len() != graph.num_edges() {
            return Err(GraphError::ColorCount { expected: graph.num_edges(), found: colors.len() });
        }
        Ok(ColoredCGraph { graph, colors })
    }

    pub fn uncolored(graph: CGraph) -> Self {
        let colors = vec![RatFn::one(); graph.num_edges()];
        ColoredCGraph { graph, colors }
    }

    /// Rescaling of colors matching `S_p` conjugation of complex `label` with
    /// `sign`: a separated edge of that label is multiplied by `t^{-sign}`
    /// when its input is `p` and by `t^{sign}` when its output is `p`.
    pub fn sp_action(&self, label: usize, p: &str, sign: i32) -> Self {
        let mut colors = self.colors.clone();
        if let EdgeKind::Separated { input, output } = self.graph.kind(label) {
            let mut n = 0i64;
            if input == p {
                n -= sign as i64;
            }
            if output == p {
                n += sign as i64;
            }
            colors[label] = colors[label].mul_t_pow(n);
        }
        ColoredCGraph { graph: self.graph.clone(), colors }
    }
}

/// `t_1^{n_1} ... t_m^{n_m} · Γ` colors edge `i` by `t^{n_i}`; extended
/// linearly over the terms of `w`.
pub fn monomial_action(w: &MultiWeight, g: &CGraph) -> Result<Vec<(Q, ColoredCGraph)>, GraphError> {
    if w.nvars() != g.num_edges() {
        return Err(GraphError::ColorCount { expected: g.num_edges(), found: w.nvars() });
    }
    Ok(w.terms()
        .map(|(x, c)| {
            let colors = x.iter().map(|&n| RatFn::t_pow(n)).collect();
            (c.clone(), ColoredCGraph { graph: g.clone(), colors })
        })
        .collect())
}
