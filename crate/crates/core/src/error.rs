use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// A parse failure with a location: byte offset within the expression, or a
/// line number when raised by a file reader.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {msg}")]
pub struct ParseError {
    pub location: String,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { location: format!("offset {}", pos), msg: msg.into() }
    }

    pub fn at_line(line: usize, msg: impl Into<String>) -> Self {
        ParseError { location: format!("line {}", line), msg: msg.into() }
    }

    /// Prefixes the location with the enclosing line.
    pub fn in_line(self, line: usize) -> Self {
        ParseError { location: format!("line {}, {}", line, self.location), msg: self.msg }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("generator name {0:?} is used more than once")]
    DuplicateGenerator(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("boundary in degree {degree} has shape {found:?}, expected {expected:?}")]
    BoundaryShape { degree: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("endomorphism shape mismatch: {0}")]
    EndoShape(String),
    #[error("complex is not acyclic over Q(t)")]
    NotAcyclic,
    #[error("not a propagator: {0}")]
    NotPropagator(String),
    #[error("invalid handle slide: {0}")]
    InvalidSlide(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} has {found} half-edges, expected 3")]
    NotTrivalent { vertex: usize, found: usize },
    #[error("slot {vertex}.{slot} is used twice")]
    SlotReused { vertex: usize, slot: usize },
    #[error("edge labels must be exactly 1..{expected}, problem at label {label}")]
    LabelGap { expected: usize, label: usize },
    #[error("vertex {0} is out of range")]
    VertexRange(usize),
    #[error("edge {edge}: unknown generator {name:?}")]
    UnknownGenerator { edge: usize, name: String },
    #[error("edge {0} has no complex")]
    MissingComplex(usize),
    #[error("edge {0} is a self-loop; IHX needs two distinct endpoints")]
    SelfLoop(usize),
    #[error("edge {0} is not a compact edge")]
    NotCompact(usize),
    #[error("edge {0} does not carry a monomial coloring")]
    NonMonomialEdge(usize),
    #[error("expected {expected} colors, found {found}")]
    ColorCount { expected: usize, found: usize },
    #[error("vertex line for {vertex} disagrees with its edge attachments")]
    VertexMismatch { vertex: usize },
    #[error("{0}")]
    Truncation(String),
    #[error("k = {0} exceeds the supported range")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error("count table entry {index}: degree vector {degree:?} is not all ones")]
    DegreeVector { index: usize, degree: Vec<i64> },
    #[error("degenerate table entry {index}: {msg}")]
    Degenerate { index: usize, msg: String },
    #[error("weight has {found} variables, expected {expected}")]
    WeightArity { expected: usize, found: usize },
    #[error("missing sign pattern {0}")]
    MissingPattern(String),
    #[error("pattern {pattern}: complex {edge} is not the reversal of the base complex")]
    ReversalMismatch { pattern: String, edge: usize },
    #[error("expected {expected} complexes, found {found}")]
    FamilySize { expected: usize, found: usize },
    #[error("edge {edge}: no propagator entry from {output} to {input} (degree is not 1)")]
    NoEntry { edge: usize, input: String, output: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TestkitError {
    #[error("sizes {0:?} admit no acyclic complex")]
    Infeasible([usize; 4]),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
