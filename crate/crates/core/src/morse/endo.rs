use std::ops::Deref;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::complex::{TwistedComplex, TOP};
use crate::algebra::{solve_linear_ordered, to_ratfn_matrix, AlgebraError, Matrix, RatFn};
use crate::error::MorseError;

/// A graded endomorphism of degree `k` of a complex with dimensions `dims`.
///
/// `block(i)` is the matrix of the component `C_i -> C_{i+k}`; components
/// whose target degree lies outside `0..=3` are empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Endo {
    degree: i64,
    dims: [usize; 4],
    blocks: [Matrix<RatFn>; 4],
}

fn dim_at(dims: &[usize; 4], d: i64) -> usize {
    if (0..=TOP as i64).contains(&d) {
        dims[d as usize]
    } else {
        0
    }
}

impl Endo {
    pub fn zero(dims: [usize; 4], degree: i64) -> Self {
        let blocks = std::array::from_fn(|i| Matrix::zeros(dim_at(&dims, i as i64 + degree), dims[i]));
        Endo { degree, dims, blocks }
    }

    pub fn identity(dims: [usize; 4]) -> Self {
        let blocks = std::array::from_fn(|i| Matrix::identity(dims[i]));
        Endo { degree: 0, dims, blocks }
    }

    pub fn from_blocks(dims: [usize; 4], degree: i64, blocks: [Matrix<RatFn>; 4]) -> Result<Self, MorseError> {
        for (i, b) in blocks.iter().enumerate() {
            let expected = (dim_at(&dims, i as i64 + degree), dims[i]);
            if b.shape() != expected {
                return Err(MorseError::EndoShape(format!(
                    "block {} has shape {:?}, expected {:?}",
                    i,
                    b.shape(),
                    expected
                )));
            }
        }
        Ok(Endo { degree, dims, blocks })
    }

    /// `∂` as a degree `-1` endomorphism.
    pub fn boundary(c: &TwistedComplex) -> Self {
        let dims = c.dims();
        let blocks =
            std::array::from_fn(|i| if i == 0 { Matrix::zeros(0, dims[0]) } else { to_ratfn_matrix(c.boundary(i)) });
        Endo { degree: -1, dims, blocks }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    pub fn block(&self, i: usize) -> &Matrix<RatFn> {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[Matrix<RatFn>; 4] {
        &self.blocks
    }

    /// Coefficient of generator `target` in the image of `source`, both as
    /// `(degree, position)`.
    pub fn entry(&self, source: (usize, usize), target: (usize, usize)) -> RatFn {
        if target.0 as i64 == source.0 as i64 + self.degree {
            self.blocks[source.0].get(target.1, source.1).clone()
        } else {
            RatFn::zero()
        }
    }

    pub fn set_entry(&mut self, source: (usize, usize), target: (usize, usize), v: RatFn) {
        assert_eq!(target.0 as i64, source.0 as i64 + self.degree, "entry outside the grading");
        self.blocks[source.0].set(target.1, source.1, v);
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    fn check_compatible(&self, o: &Self) -> Result<(), MorseError> {
        if self.dims != o.dims {
            return Err(MorseError::EndoShape(format!("dimensions {:?} and {:?} differ", self.dims, o.dims)));
        }
        Ok(())
    }

    fn zip(&self, o: &Self, f: impl Fn(&Matrix<RatFn>, &Matrix<RatFn>) -> Matrix<RatFn>) -> Result<Self, MorseError> {
        self.check_compatible(o)?;
        if self.degree != o.degree {
            return Err(MorseError::EndoShape(format!("degrees {} and {} differ", self.degree, o.degree)));
        }
        let blocks = std::array::from_fn(|i| f(&self.blocks[i], &o.blocks[i]));
        Ok(Endo { degree: self.degree, dims: self.dims, blocks })
    }

    pub fn add(&self, o: &Self) -> Result<Self, MorseError> {
        self.zip(o, Matrix::add)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, MorseError> {
        self.zip(o, Matrix::sub)
    }

    pub fn neg(&self) -> Self {
        Endo { degree: self.degree, dims: self.dims, blocks: std::array::from_fn(|i| self.blocks[i].neg()) }
    }

    pub fn scale(&self, c: &RatFn) -> Self {
        Endo { degree: self.degree, dims: self.dims, blocks: std::array::from_fn(|i| self.blocks[i].scale(c)) }
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Result<Self, MorseError> {
        self.check_compatible(o)?;
        let degree = self.degree + o.degree;
        let blocks = std::array::from_fn(|i| {
            let mid = i as i64 + o.degree;
            let rows = dim_at(&self.dims, i as i64 + degree);
            if (0..=TOP as i64).contains(&mid) {
                self.blocks[mid as usize].mul(&o.blocks[i])
            } else {
                Matrix::zeros(rows, self.dims[i])
            }
        });
        Ok(Endo { degree, dims: self.dims, blocks })
    }

    /// `δ(self) = ∂ ∘ self - (-1)^k self ∘ ∂`.
    pub fn delta(&self, c: &TwistedComplex) -> Result<Self, MorseError> {
        if c.dims() != self.dims {
            return Err(MorseError::EndoShape(format!(
                "endomorphism dimensions {:?} do not match complex {:?}",
                self.dims,
                c.dims()
            )));
        }
        let d = Endo::boundary(c);
        let left = d.compose(self)?;
        let right = self.compose(&d)?;
        if self.degree.rem_euclid(2) == 0 {
            left.sub(&right)
        } else {
            left.add(&right)
        }
    }
}

/// `δ g` for a degree-`k` endomorphism `g`.
pub fn delta(c: &TwistedComplex, g: &Endo) -> Result<Endo, MorseError> {
    g.delta(c)
}

/// A degree one endomorphism `g` with `∂g + g∂ = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Propagator(Endo);

impl Propagator {
    /// Accepts `g` only if it satisfies the propagator identity for `c`.
    pub fn new(c: &TwistedComplex, g: Endo) -> Result<Self, MorseError> {
        if g.degree != 1 {
            return Err(MorseError::NotPropagator(format!("degree is {}, expected 1", g.degree)));
        }
        let dg = g.delta(c)?;
        if dg != Endo::identity(c.dims()) {
            let bad = (0..=TOP).find(|&i| *dg.block(i) != Matrix::identity(c.dims()[i])).unwrap();
            return Err(MorseError::NotPropagator(format!("∂g + g∂ differs from 1 on degree {}", bad)));
        }
        Ok(Propagator(g))
    }

    pub(crate) fn new_unchecked(g: Endo) -> Self {
        Propagator(g)
    }

    pub fn as_endo(&self) -> &Endo {
        &self.0
    }

    pub fn into_endo(self) -> Endo {
        self.0
    }
}

impl Deref for Propagator {
    type Target = Endo;

    fn deref(&self) -> &Endo {
        &self.0
    }
}

/// Whether `g` satisfies `∂g + g∂ = 1` on `c`.
pub fn is_propagator(c: &TwistedComplex, g: &Endo) -> bool {
    g.degree == 1 && g.delta(c).map_or(false, |d| d == Endo::identity(c.dims()))
}

/// Solves for a propagator degree by degree, visiting unknowns in declared order.
pub fn find_propagator(c: &TwistedComplex) -> Result<Propagator, MorseError> {
    solve_propagator(c, |n| (0..n).collect())
}

/// As [`find_propagator`] with unknowns visited in a seeded random order, which
/// in general selects a different propagator.
pub fn find_propagator_seeded(c: &TwistedComplex, seed: u64) -> Result<Propagator, MorseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    solve_propagator(c, move |n| {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(&mut rng);
        v
    })
}

fn solve_propagator(c: &TwistedComplex, mut order: impl FnMut(usize) -> Vec<usize>) -> Result<Propagator, MorseError> {
    if c.validate().is_err() {
        return Err(MorseError::NotPropagator("boundary does not square to zero".into()));
    }
    let dims = c.dims();
    let d: Vec<Matrix<RatFn>> = (1..=TOP).map(|i| to_ratfn_matrix(c.boundary(i))).collect();
    let mut g: Vec<Matrix<RatFn>> = Vec::with_capacity(4);
    // On C_i the identity reads ∂_{i+1} g_i = 1 - g_{i-1} ∂_i.
    for i in 0..TOP {
        let mut rhs = Matrix::identity(dims[i]);
        if i > 0 {
            rhs = rhs.sub(&g[i - 1].mul(&d[i - 1]));
        }
        let sol = solve_linear_ordered(&d[i], &rhs, &order(dims[i + 1])).map_err(|e| match e {
            AlgebraError::NoSolution => MorseError::NotAcyclic,
            e => MorseError::Algebra(e),
        })?;
        g.push(sol.x);
    }
    if g[TOP - 1].mul(&d[TOP - 1]) != Matrix::identity(dims[TOP]) {
        return Err(MorseError::NotAcyclic);
    }
    g.push(Matrix::zeros(0, dims[TOP]));
    let blocks: [Matrix<RatFn>; 4] = g.try_into().expect("four blocks");
    let e = Endo::from_blocks(dims, 1, blocks)?;
    Ok(Propagator(e))
}

/// A degree two `h` with `∂h - h∂ = g' - g`, namely `h = g ∘ (g' - g)`.
pub fn propagator_homotopy(c: &TwistedComplex, g: &Endo, g2: &Endo) -> Result<Endo, MorseError> {
    for (name, x) in [("g", g), ("g'", g2)] {
        if !is_propagator(c, x) {
            return Err(MorseError::NotPropagator(format!("{} fails ∂g + g∂ = 1", name)));
        }
    }
    g.compose(&g2.sub(g)?)
}
