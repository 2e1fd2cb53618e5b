use std::collections::HashSet;

use crate::algebra::{rank, to_ratfn_matrix, LaurentPoly, Matrix};
use crate::error::MorseError;

/// Highest Morse index; generators live in degrees `0..=TOP`.
pub const TOP: usize = 3;

/// A based free chain complex of `Q[t, t^-1]`-modules with generators in
/// degrees 0 through 3.
///
/// `boundary(i)` is the matrix of `∂ : C_i -> C_{i-1}`; its `(q, p)` entry is
/// the coefficient of `q` in `∂p`, so rows follow the degree `i - 1`
/// generators in declared order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistedComplex {
    generators: [Vec<String>; 4],
    boundary: [Matrix<LaurentPoly>; 3],
}

/// Witness that `∂ ∘ ∂ != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Degree of the source generator of the composite `∂_{d-1} ∘ ∂_d`.
    pub degree: usize,
    pub source: String,
    pub target: String,
    pub value: LaurentPoly,
}

impl TwistedComplex {
    pub fn new(generators: [Vec<String>; 4], boundary: [Matrix<LaurentPoly>; 3]) -> Result<Self, MorseError> {
        let mut seen = HashSet::new();
        for name in generators.iter().flatten() {
            if !seen.insert(name.as_str()) {
                return Err(MorseError::DuplicateGenerator(name.clone()));
            }
        }
        for i in 1..=TOP {
            let expected = (generators[i - 1].len(), generators[i].len());
            let found = boundary[i - 1].shape();
            if expected != found {
                return Err(MorseError::BoundaryShape { degree: i, expected, found });
            }
        }
        Ok(TwistedComplex { generators, boundary })
    }

    /// The complex with the given generators and all boundaries zero.
    pub fn with_zero_boundary(generators: [Vec<String>; 4]) -> Self {
        let boundary = std::array::from_fn(|i| Matrix::zeros(generators[i].len(), generators[i + 1].len()));
        TwistedComplex::new(generators, boundary).expect("shapes agree by construction")
    }

    pub fn empty() -> Self {
        Self::with_zero_boundary(Default::default())
    }

    pub fn generators(&self, degree: usize) -> &[String] {
        &self.generators[degree]
    }

    pub fn all_generators(&self) -> &[Vec<String>; 4] {
        &self.generators
    }

    /// Rank of `C_i`; zero outside `0..=3`.
    pub fn dim(&self, degree: i64) -> usize {
        if (0..=TOP as i64).contains(&degree) {
            self.generators[degree as usize].len()
        } else {
            0
        }
    }

    pub fn dims(&self) -> [usize; 4] {
        std::array::from_fn(|i| self.generators[i].len())
    }

    /// `∂ : C_degree -> C_{degree-1}` for `degree` in `1..=3`.
    pub fn boundary(&self, degree: usize) -> &Matrix<LaurentPoly> {
        &self.boundary[degree - 1]
    }

    pub fn boundaries(&self) -> &[Matrix<LaurentPoly>; 3] {
        &self.boundary
    }

    /// `(degree, position)` of a generator.
    pub fn locate(&self, name: &str) -> Option<(usize, usize)> {
        self.generators.iter().enumerate().find_map(|(d, g)| g.iter().position(|x| x == name).map(|i| (d, i)))
    }

    pub fn index_of(&self, name: &str) -> Result<usize, MorseError> {
        self.locate(name).map(|(d, _)| d).ok_or_else(|| MorseError::UnknownGenerator(name.to_string()))
    }

    /// Coefficient of `target` in `∂ source`, zero unless the indices differ by one.
    pub fn boundary_coeff(&self, source: (usize, usize), target: (usize, usize)) -> LaurentPoly {
        if source.0 == target.0 + 1 {
            self.boundary(source.0).get(target.1, source.1).clone()
        } else {
            LaurentPoly::zero()
        }
    }

    pub fn num_generators(&self) -> usize {
        self.generators.iter().map(Vec::len).sum()
    }

    /// Checks `∂ ∘ ∂ = 0` exactly.
    pub fn validate(&self) -> Result<(), Violation> {
        for d in 2..=TOP {
            let comp = self.boundary(d - 1).mul(self.boundary(d));
            if let Some((r, c, v)) = comp.first_nonzero() {
                return Err(Violation {
                    degree: d,
                    source: self.generators[d][c].clone(),
                    target: self.generators[d - 2][r].clone(),
                    value: v.clone(),
                });
            }
        }
        Ok(())
    }

    /// Ranks of `∂_1, ∂_2, ∂_3` over `Q(t)`.
    pub fn boundary_ranks(&self) -> [usize; 3] {
        std::array::from_fn(|i| rank(&to_ratfn_matrix(&self.boundary[i])))
    }

    /// Whether the complex becomes exact after tensoring with `Q(t)`.
    pub fn is_acyclic(&self) -> bool {
        let r = self.boundary_ranks();
        let rank_at = |d: usize| if (1..=TOP).contains(&d) { r[d - 1] } else { 0 };
        (0..=TOP).all(|i| rank_at(i) + rank_at(i + 1) == self.generators[i].len())
    }

    /// Boundary entries as `(degree, target row, source column, value)`.
    pub fn nonzero_boundary_entries(&self) -> impl Iterator<Item = (usize, usize, usize, &LaurentPoly)> {
        (1..=TOP).flat_map(move |d| {
            self.boundary(d).entries().filter(|(_, _, v)| !v.is_zero()).map(move |(r, c, v)| (d, r, c, v))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn tm1() -> LaurentPoly {
        LaurentPoly::from_terms([(1, q(1)), (0, q(-1))])
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    pub(crate) fn interval() -> TwistedComplex {
        let gens = [names(&["q"]), names(&["p"]), vec![], vec![]];
        let b1 = Matrix::from_rows(vec![vec![tm1()]]).unwrap();
        TwistedComplex::new(gens, [b1, Matrix::zeros(1, 0), Matrix::zeros(0, 0)]).unwrap()
    }

    #[test]
    fn zero_boundaries_are_valid() {
        let c = TwistedComplex::with_zero_boundary([names(&["a"]), names(&["b", "c"]), names(&["d"]), vec![]]);
        assert!(c.validate().is_ok());
        assert!(!c.is_acyclic());
    }

    #[test]
    fn single_boundary_valid_and_acyclic() {
        let c = interval();
        assert!(c.validate().is_ok());
        assert!(c.is_acyclic());
    }

    #[test]
    fn composite_witness() {
        let gens = [names(&["q"]), names(&["p"]), names(&["r"]), vec![]];
        let b1 = Matrix::from_rows(vec![vec![tm1()]]).unwrap();
        let b2 = Matrix::from_rows(vec![vec![LaurentPoly::one()]]).unwrap();
        let c = TwistedComplex::new(gens, [b1, b2, Matrix::zeros(1, 0)]).unwrap();
        let v = c.validate().unwrap_err();
        assert_eq!(v.degree, 2);
        assert_eq!((v.source.as_str(), v.target.as_str()), ("r", "q"));
        assert_eq!(v.value, tm1());
    }

    #[test]
    fn duplicate_names_rejected() {
        let gens = [names(&["x"]), names(&["x"]), vec![], vec![]];
        let b = [Matrix::zeros(1, 1), Matrix::zeros(1, 0), Matrix::zeros(0, 0)];
        assert_eq!(TwistedComplex::new(gens, b), Err(MorseError::DuplicateGenerator("x".into())));
    }

    #[test]
    fn bad_shape_rejected() {
        let gens = [names(&["x"]), names(&["y"]), vec![], vec![]];
        let b = [Matrix::zeros(2, 1), Matrix::zeros(1, 0), Matrix::zeros(0, 0)];
        assert!(matches!(TwistedComplex::new(gens, b), Err(MorseError::BoundaryShape { degree: 1, .. })));
    }
}
