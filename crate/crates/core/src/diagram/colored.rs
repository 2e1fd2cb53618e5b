use super::graph::Graph;
use super::sum::DiagramSum;
use crate::algebra::RatFn;
use crate::error::GraphError;

/// A trivalent graph with one `Q(t)` color per edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredDiagram {
    pub graph: Graph,
    pub colors: Vec<RatFn>,
}

impl ColoredDiagram {
    pub fn new(graph: Graph, colors: Vec<RatFn>) -> Result<Self, GraphError> {
        if colors.len() != graph.num_edges() {
            return Err(GraphError::ColorCount { expected: graph.num_edges(), found: colors.len() });
        }
        Ok(ColoredDiagram { graph, colors })
    }

    /// All edges colored 1.
    pub fn uncolored(graph: Graph) -> Self {
        let colors = vec![RatFn::one(); graph.num_edges()];
        ColoredDiagram { graph, colors }
    }

    /// Multiplies the color of each edge at `v` by `t^{n ε}`, where `ε` is
    /// `+1` at a head and `-1` at a tail. A loop at `v` is unchanged.
    pub fn holonomy_move(&self, v: usize, n: i64) -> Self {
        let mut colors = self.colors.clone();
        for (e, end) in self.graph.slots(v) {
            let eps = if end == 1 { 1 } else { -1 };
            colors[e] = colors[e].mul_t_pow(n * eps);
        }
        ColoredDiagram { graph: self.graph.clone(), colors }
    }

    /// Reverses edge `e` and replaces its color by the bar involute.
    pub fn reorient(&self, e: usize) -> Self {
        let mut colors = self.colors.clone();
        colors[e] = colors[e].bar();
        ColoredDiagram { graph: self.graph.reversed_edge(e), colors }
    }

    /// Exchanges two slots at `v`; equal to `-self` in the diagram space.
    pub fn swap_slots(&self, v: usize, a: usize, b: usize) -> Self {
        ColoredDiagram { graph: self.graph.swapped_slots(v, a, b), colors: self.colors.clone() }
    }

    /// Renames vertices and edges; the class is unchanged.
    pub fn relabel(&self, vmap: &[usize], emap: &[usize]) -> Self {
        let mut colors = vec![RatFn::zero(); self.colors.len()];
        for (e, c) in self.colors.iter().enumerate() {
            colors[emap[e]] = c.clone();
        }
        ColoredDiagram { graph: self.graph.relabel(vmap, emap), colors }
    }

    pub fn normalize(&self) -> DiagramSum {
        DiagramSum::from_diagram(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta(c: [i64; 3]) -> ColoredDiagram {
        let g = Graph::from_edge_list(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        ColoredDiagram::new(g, c.iter().map(|&e| RatFn::t_pow(e)).collect()).unwrap()
    }

    #[test]
    fn zero_move_is_identity() {
        let d = theta([1, 2, 3]);
        assert_eq!(d.holonomy_move(0, 0), d);
    }

    #[test]
    fn opposite_moves_cancel() {
        let d = theta([1, -1, 0]);
        let back = d.holonomy_move(0, 2).holonomy_move(1, 2);
        // on the theta graph a move at both ends shifts nothing
        assert_eq!(back, d);
        assert_eq!(d.holonomy_move(0, 3).holonomy_move(0, -3), d);
    }

    #[test]
    fn wrong_color_count() {
        let g = Graph::from_edge_list(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        assert!(ColoredDiagram::new(g, vec![RatFn::one()]).is_err());
    }
}
