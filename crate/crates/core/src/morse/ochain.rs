//! Boundary coefficients of the flow-line 1-chain `O(ξ)`.

use super::complex::{TwistedComplex, TOP};
use super::endo::Endo;
use super::transform::{reversed, reversed_map};
use crate::algebra::{to_ratfn_matrix, RatFn};

/// A 0-chain with `Q(t)` coefficients on the generators of a complex, listed
/// degree by degree in declared order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OChainBoundary {
    pub coeffs: [Vec<(String, RatFn)>; 4],
}

impl OChainBoundary {
    pub fn get(&self, name: &str) -> Option<(usize, &RatFn)> {
        self.coeffs.iter().enumerate().find_map(|(d, v)| v.iter().find(|(n, _)| n == name).map(|(_, c)| (d, c)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &str, &RatFn)> {
        self.coeffs.iter().enumerate().flat_map(|(d, v)| v.iter().map(move |(n, c)| (d, n.as_str(), c)))
    }
}

fn sign(k: usize) -> RatFn {
    if k % 2 == 0 {
        RatFn::one()
    } else {
        RatFn::from_int(-1)
    }
}

/// Coefficient of each generator `p` of index `k` in `∂O(ξ)`:
/// `-Σ_q (-1)^{k-1} g_{qp} ∂_{pq} + Σ_r (-1)^k g_{pr} ∂_{rp}`, where `q` runs over
/// index `k-1` and `r` over index `k+1`.
pub fn boundary_of_o(c: &TwistedComplex, g: &Endo) -> OChainBoundary {
    let coeffs = std::array::from_fn(|k| {
        let s = sign(k);
        c.generators(k)
            .iter()
            .enumerate()
            .map(|(pi, name)| {
                let mut down = RatFn::zero();
                if k > 0 {
                    let d = to_ratfn_matrix(c.boundary(k));
                    for qi in 0..c.generators(k - 1).len() {
                        // g_{qp} is the coefficient of p in g(q)
                        let gqp = g.entry((k - 1, qi), (k, pi));
                        let dpq = d.get(qi, pi);
                        down = down.add(&gqp.mul(dpq));
                    }
                }
                let mut up = RatFn::zero();
                if k < TOP {
                    let d = to_ratfn_matrix(c.boundary(k + 1));
                    for ri in 0..c.generators(k + 1).len() {
                        let gpr = g.entry((k, pi), (k + 1, ri));
                        let drp = d.get(pi, ri);
                        up = up.add(&gpr.mul(drp));
                    }
                }
                // -(-1)^{k-1} = (-1)^k
                (name.clone(), s.mul(&down.add(&up)))
            })
            .collect()
    });
    OChainBoundary { coeffs }
}

/// Checks that `∂O(ξ) + ∂O(-ξ)` vanishes generator by generator, where `O(-ξ)`
/// is computed on the reversed pair.
///
/// Also requires every coefficient of `∂O(ξ)` to be exactly `(-1)^{ind p}`:
/// a perturbation of `g` by a bar-symmetric amount cancels in the sum alone.
pub fn verify_o_cycle(c: &TwistedComplex, g: &Endo) -> bool {
    let o = boundary_of_o(c, g);
    let ro = boundary_of_o(&reversed(c), &reversed_map(g));
    let ok = o.iter().all(|(k, name, x)| {
        let Some((rk, y)) = ro.get(name) else { return false };
        rk == TOP - k && *x == sign(k) && x.add(y).is_zero()
    });
    ok
}
