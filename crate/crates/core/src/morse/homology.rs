use std::fmt;

use super::complex::{TwistedComplex, TOP};
use crate::algebra::{smith_normal_form, Matrix, UPoly};

/// `H_i ≅ Λ^free_rank ⊕ ⊕_j Λ/(torsion[j])`, each torsion entry monic, free
/// of factors `t`, and of positive degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyModule {
    pub degree: usize,
    pub free_rank: usize,
    pub torsion: Vec<UPoly>,
}

/// Clears negative powers by scaling each column by a unit `t^m`.
fn cleared(m: &Matrix<crate::algebra::LaurentPoly>) -> Matrix<UPoly> {
    let shifts: Vec<i64> =
        (0..m.cols()).map(|j| (0..m.rows()).filter_map(|i| m.get(i, j).min_exp()).min().unwrap_or(0)).collect();
    Matrix::from_fn(m.rows(), m.cols(), |i, j| {
        m.get(i, j).mul_t_pow(-shifts[j]).to_upoly().expect("nonnegative exponents after clearing")
    })
}

/// Invariant factors of `m` over `Λ`, non-units only.
fn invariant_factors(m: &Matrix<crate::algebra::LaurentPoly>) -> (usize, Vec<UPoly>) {
    let s = smith_normal_form(&cleared(m));
    let diag = s.diagonal();
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    let torsion =
        diag.into_iter().filter(|x| !x.is_zero()).map(|x| x.strip_t().1.monic()).filter(|x| !x.is_constant()).collect();
    (rank, torsion)
}

/// The `Λ`-modules `H_0, ..., H_3` of a valid complex.
pub fn homology_over_lambda(c: &TwistedComplex) -> Vec<HomologyModule> {
    let facts: Vec<(usize, Vec<UPoly>)> = (1..=TOP).map(|d| invariant_factors(c.boundary(d))).collect();
    (0..=TOP)
        .map(|i| {
            let rank_out = if i >= 1 { facts[i - 1].0 } else { 0 };
            let (rank_in, torsion) = if i < TOP { (facts[i].0, facts[i].1.clone()) } else { (0, vec![]) };
            HomologyModule { degree: i, free_rank: c.generators(i).len() - rank_out - rank_in, torsion }
        })
        .collect()
}

impl fmt::Display for HomologyModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Λ".to_string() } else { format!("Λ^{}", self.free_rank) });
        }
        for x in &self.torsion {
            parts.push(format!("Λ/({})", crate::algebra::LaurentPoly::from_upoly(x.clone())));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "H_{} = {}", self.degree, parts.join(" ⊕ "))
    }
}
