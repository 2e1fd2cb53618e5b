//! Exact arithmetic over `Q[t, t^-1]`, `Q(t)` and `Q[t_1^±1, ..., t_n^±1]`,
//! dense matrices with exact elimination, and Smith normal form over `Q[t]`.

mod laurent;
mod matrix;
mod multi;
pub mod parse;
mod ratfn;
mod snf;
mod upoly;

pub use laurent::LaurentPoly;
pub use matrix::{rank, solve_linear, solve_linear_ordered, Field, Matrix, Ring, Solution};
pub use multi::MultiWeight;
pub use ratfn::RatFn;
pub use snf::{smith_normal_form, SmithForm};
pub use upoly::UPoly;

pub use crate::error::AlgebraError;

/// Arbitrary-precision rationals.
pub type Q = num_rational::BigRational;

/// Embeds a Laurent matrix into the rational-function field.
pub fn to_ratfn_matrix(m: &Matrix<LaurentPoly>) -> Matrix<RatFn> {
    m.map(|x| RatFn::from(x.clone()))
}

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}
