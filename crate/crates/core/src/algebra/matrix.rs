use std::fmt;

use num_traits::{One, Zero};

use super::{AlgebraError, LaurentPoly, RatFn, UPoly, Q};

/// Minimal commutative ring interface shared by the coefficient types.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Self;
    /// Pivot preference; smaller is preferred.
    fn pivot_cost(&self) -> usize {
        0
    }
}

macro_rules! impl_ring {
    ($t:ty) => {
        impl Ring for $t {
            fn zero() -> Self {
                <$t>::zero()
            }
            fn one() -> Self {
                <$t>::one()
            }
            fn is_zero(&self) -> bool {
                <$t>::is_zero(self)
            }
            fn add(&self, o: &Self) -> Self {
                <$t>::add(self, o)
            }
            fn sub(&self, o: &Self) -> Self {
                <$t>::sub(self, o)
            }
            fn mul(&self, o: &Self) -> Self {
                <$t>::mul(self, o)
            }
            fn neg(&self) -> Self {
                <$t>::neg(self)
            }
        }
    };
}

impl_ring!(UPoly);
impl_ring!(LaurentPoly);
impl_ring!(RatFn);

impl Ring for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for Q {
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl Field for RatFn {
    fn inv(&self) -> Self {
        RatFn::inv(self).expect("pivot is nonzero")
    }
    fn pivot_cost(&self) -> usize {
        self.complexity()
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(AlgebraError::Shape(format!("ragged rows in {}-row matrix", r)));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &R)> {
        let c = self.cols;
        self.data.iter().enumerate().map(move |(k, v)| (k / c.max(1), k % c.max(1), v))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &R)> {
        self.entries().find(|(_, _, v)| !v.is_zero())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, AlgebraError> {
        if self.cols != o.rows {
            return Err(AlgebraError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    /// Panics on a shape mismatch; use [`Matrix::checked_mul`] for untrusted shapes.
    pub fn mul(&self, o: &Self) -> Self {
        self.checked_mul(o).expect("matrix shapes")
    }

    fn zip_with(&self, o: &Self, f: impl Fn(&R, &R) -> R) -> Result<Self, AlgebraError> {
        if self.shape() != o.shape() {
            return Err(AlgebraError::Shape(format!("shape {:?} does not match {:?}", self.shape(), o.shape())));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.zip_with(o, |a, b| a.add(b))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.zip_with(o, |a, b| a.sub(b))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.checked_add(o).expect("matrix shapes")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.checked_sub(o).expect("matrix shapes")
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &R) {
        for j in 0..self.cols {
            let v = self.get(src, j).mul(c);
            if !v.is_zero() {
                let idx = dst * self.cols + j;
                self.data[idx] = self.data[idx].add(&v);
            }
        }
    }

    /// `col[dst] += c * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &R) {
        for i in 0..self.rows {
            let v = self.get(i, src).mul(c);
            if !v.is_zero() {
                let idx = i * self.cols + dst;
                self.data[idx] = self.data[idx].add(&v);
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &R) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = self.data[idx].mul(c);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &R) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] = self.data[idx].mul(c);
        }
    }

    /// Horizontal block `[self | o]`.
    pub fn hcat(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j).clone())
    }
}

impl<R: fmt::Display> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.data[i * self.cols + j].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.data.chunks(self.cols.max(1))).finish()
    }
}

/// Result of [`solve_linear`].
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<F> {
    pub x: Matrix<F>,
    /// `false` when the system has free variables; `x` then sets them to zero.
    pub unique: bool,
}

struct Echelon<F> {
    b: Matrix<F>,
    /// `(row, column)` of each pivot, in elimination order.
    pivots: Vec<(usize, usize)>,
}

/// Gauss-Jordan elimination of `[a | b]` visiting columns of `a` in `order`.
/// Pivot rows are chosen by smallest [`Field::pivot_cost`].
fn eliminate<F: Field>(mut a: Matrix<F>, mut b: Matrix<F>, order: &[usize]) -> Echelon<F> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in order {
        if r == a.rows() {
            break;
        }
        let best = (r..a.rows()).filter(|&i| !a.get(i, c).is_zero()).min_by_key(|&i| (a.get(i, c).pivot_cost(), i));
        let Some(p) = best else { continue };
        a.swap_rows(r, p);
        b.swap_rows(r, p);
        let inv = a.get(r, c).inv();
        a.scale_row(r, &inv);
        b.scale_row(r, &inv);
        for i in 0..a.rows() {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).neg();
            a.add_row_multiple(i, r, &f);
            b.add_row_multiple(i, r, &f);
        }
        pivots.push((r, c));
        r += 1;
    }
    Echelon { b, pivots }
}

/// Solves `m * x = b` exactly.
pub fn solve_linear<F: Field>(m: &Matrix<F>, b: &Matrix<F>) -> Result<Solution<F>, AlgebraError> {
    let order: Vec<usize> = (0..m.cols()).collect();
    solve_linear_ordered(m, b, &order)
}

/// As [`solve_linear`], visiting unknowns in the given order. Different orders
/// may select different particular solutions of an underdetermined system.
pub fn solve_linear_ordered<F: Field>(
    m: &Matrix<F>,
    b: &Matrix<F>,
    order: &[usize],
) -> Result<Solution<F>, AlgebraError> {
    if m.rows() != b.rows() {
        return Err(AlgebraError::Shape(format!(
            "system has {} equations but right-hand side has {} rows",
            m.rows(),
            b.rows()
        )));
    }
    let e = eliminate(m.clone(), b.clone(), order);
    let rank = e.pivots.len();
    for i in rank..e.b.rows() {
        if e.b.row(i).iter().any(|v| !v.is_zero()) {
            return Err(AlgebraError::NoSolution);
        }
    }
    let mut x = Matrix::zeros(m.cols(), b.cols());
    for &(r, c) in &e.pivots {
        for j in 0..b.cols() {
            x.set(c, j, e.b.get(r, j).clone());
        }
    }
    Ok(Solution { x, unique: rank == m.cols() })
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let order: Vec<usize> = (0..m.cols()).collect();
    eliminate(m.clone(), Matrix::zeros(m.rows(), 0), &order).pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn identity_system() {
        let b = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(3), q(4)]]).unwrap();
        let s = solve_linear(&Matrix::identity(2), &b).unwrap();
        assert_eq!(s.x, b);
        assert!(s.unique);
    }

    #[test]
    fn scalar_division_over_ratfn() {
        let tm1 = RatFn::from(LaurentPoly::from_terms([(1, q(1)), (0, q(-1))]));
        let m = Matrix::from_rows(vec![vec![tm1.clone()]]).unwrap();
        let s = solve_linear(&m, &Matrix::identity(1)).unwrap();
        assert_eq!(s.x.get(0, 0), &tm1.inv().unwrap());
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        let m = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(2), q(2)]]).unwrap();
        let bad = Matrix::from_rows(vec![vec![q(1)], vec![q(3)]]).unwrap();
        assert_eq!(solve_linear(&m, &bad), Err(AlgebraError::NoSolution));
        let ok = Matrix::from_rows(vec![vec![q(1)], vec![q(2)]]).unwrap();
        let s = solve_linear(&m, &ok).unwrap();
        assert!(!s.unique);
        assert_eq!(m.mul(&s.x), ok);
        assert_eq!(rank(&m), 1);
    }
}
