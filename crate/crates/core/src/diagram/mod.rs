//! Trivalent diagrams with `Q(t)` edge colors modulo AS, orientation
//! reversal, linearity, holonomy and automorphisms, plus IHX reduction in
//! truncated coordinate spaces.

mod cgraph;
mod colored;
mod graph;
mod ihx;
mod sum;

pub use cgraph::{monomial_action, validate_cgraph, CGraph, ColoredCGraph, DegreeVector, EdgeKind};
pub use colored::ColoredDiagram;
pub use graph::{all_skeletons, skeleton, Graph, HalfEdge, Iso, Skeleton, SkeletonCode};
pub use ihx::{
    coordinates, from_coordinates, ihx_equivalent, ihx_relation, reduce_modulo_ihx, relation_span, truncated_relations,
    Key, RelationSpan, SparseVec, Truncation,
};
pub use sum::{DiagramSum, Tensor};
