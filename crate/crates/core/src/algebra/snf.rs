//! Smith normal form over `Q[t]`.

use super::{Matrix, UPoly};

/// `u * m * v == d` with `d` diagonal, monic diagonal entries, and each
/// diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithForm {
    pub u: Matrix<UPoly>,
    pub d: Matrix<UPoly>,
    pub v: Matrix<UPoly>,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<UPoly> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn min_degree_entry(a: &Matrix<UPoly>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            if let Some(d) = a.get(i, j).degree() {
                if best.map_or(true, |(bd, _, _)| d < bd) {
                    best = Some((d, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn smith_normal_form(m: &Matrix<UPoly>) -> SmithForm {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut u = Matrix::<UPoly>::identity(rows);
    let mut v = Matrix::<UPoly>::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_degree_entry(&a, t) else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            let pivot = a.get(t, t).clone();
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = a.get(i, t).div_rem(&pivot);
                let f = q.neg();
                a.add_row_multiple(i, t, &f);
                u.add_row_multiple(i, t, &f);
                dirty |= !r.is_zero();
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = a.get(t, j).div_rem(&pivot);
                let f = q.neg();
                a.add_col_multiple(j, t, &f);
                v.add_col_multiple(j, t, &f);
                dirty |= !r.is_zero();
            }
            if dirty {
                // a remainder of smaller degree now sits in row or column t
                let mut best = (pivot.degree().unwrap(), t, t);
                for i in t + 1..rows {
                    if let Some(d) = a.get(i, t).degree() {
                        if d < best.0 {
                            best = (d, i, t);
                        }
                    }
                }
                for j in t + 1..cols {
                    if let Some(d) = a.get(t, j).degree() {
                        if d < best.0 {
                            best = (d, t, j);
                        }
                    }
                }
                let (_, bi, bj) = best;
                a.swap_rows(t, bi);
                u.swap_rows(t, bi);
                a.swap_cols(t, bj);
                v.swap_cols(t, bj);
                continue;
            }
            let pivot = a.get(t, t).clone();
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !pivot.divides(a.get(i, j)));
            match offender {
                Some((i, _)) => {
                    let one = UPoly::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        t += 1;
    }
    for i in 0..rows.min(cols) {
        let x = a.get(i, i);
        if !x.is_zero() && !x.lead().eq(&num_traits::One::one()) {
            let c = UPoly::constant(x.lead().recip());
            a.scale_row(i, &c);
            u.scale_row(i, &c);
        }
    }
    SmithForm { u, d: a, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    fn check(m: &Matrix<UPoly>) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        for (i, j, x) in s.d.entries() {
            if i != j {
                assert!(x.is_zero());
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[0].divides(&w[1]), "{:?} does not divide {:?}", w[0], w[1]);
        }
        s
    }

    #[test]
    fn already_normal_is_unchanged() {
        let m = Matrix::from_rows(vec![vec![p(&[-1, 1]), p(&[])], vec![p(&[]), p(&[1, 0, -1])]]).unwrap();
        let s = check(&m);
        assert_eq!(s.diagonal(), vec![p(&[-1, 1]), p(&[-1, 0, 1])]);
    }

    #[test]
    fn zero_matrix() {
        let m = Matrix::<UPoly>::zeros(2, 3);
        let s = check(&m);
        assert!(s.d.is_zero());
    }

    #[test]
    fn coprime_entries_split() {
        // diag(t, t - 1) has Smith form diag(1, t(t-1))
        let m = Matrix::from_rows(vec![vec![p(&[0, 1]), p(&[])], vec![p(&[]), p(&[-1, 1])]]).unwrap();
        let s = check(&m);
        assert_eq!(s.diagonal(), vec![p(&[1]), p(&[0, -1, 1])]);
    }
}
