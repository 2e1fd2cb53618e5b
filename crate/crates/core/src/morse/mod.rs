//! Twisted Morse complexes over `Q[t, t^-1]`, their graded endomorphisms, and
//! combinatorial propagators.

mod complex;
mod endo;
mod homology;
mod ochain;
mod transform;

pub use complex::{TwistedComplex, Violation, TOP};
pub use endo::{delta, find_propagator, find_propagator_seeded, is_propagator, propagator_homotopy, Endo, Propagator};
pub use homology::{homology_over_lambda, HomologyModule};
pub use ochain::{boundary_of_o, verify_o_cycle, OChainBoundary};
pub use transform::{
    conjugate_by_sp, elementary, elementary_entry, handle_slide, reverse_complex, reversed, reversed_map,
    slide_difference_holds,
};
