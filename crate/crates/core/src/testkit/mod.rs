//! Seeded generators and brute-force oracles for tests.

pub mod random;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{to_ratfn_matrix, LaurentPoly, Matrix, RatFn, Q};
use crate::diagram::{all_skeletons, coordinates, ihx_relation, CGraph, ColoredDiagram, Graph, SparseVec, Truncation};
use crate::error::TestkitError;
use crate::morse::{Endo, Propagator, TwistedComplex, TOP};

pub type Seed = u64;

pub fn rng(seed: Seed) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero Laurent polynomial with exponents in `[-bound, bound]` and small
/// integer coefficients.
pub fn random_unit_times_poly(rng: &mut impl Rng, bound: i64) -> LaurentPoly {
    loop {
        let nterms = rng.gen_range(1..=3);
        let p = LaurentPoly::from_terms(
            (0..nterms).map(|_| (rng.gen_range(-bound..=bound), Q::from_integer(rng.gen_range(-3i64..=3).into()))),
        );
        if !p.is_zero() {
            return p;
        }
    }
}

/// Product of `count` elementary matrices `I + c t^m E_ab` and its inverse.
fn random_elementary_product(
    rng: &mut impl Rng,
    n: usize,
    count: usize,
    bound: i64,
) -> (Matrix<LaurentPoly>, Matrix<LaurentPoly>) {
    let mut a = Matrix::identity(n);
    let mut inv = Matrix::identity(n);
    if n < 2 {
        return (a, inv);
    }
    for _ in 0..count {
        let r = rng.gen_range(0..n);
        let mut s = rng.gen_range(0..n - 1);
        if s >= r {
            s += 1;
        }
        let c = [-2i64, -1, 1, 2][rng.gen_range(0..4)];
        let m = LaurentPoly::monomial(Q::from_integer(c.into()), rng.gen_range(-bound..=bound));
        // E = I + m e_rs acts on rows: a <- E a, inv <- inv E^-1
        a.add_row_multiple(r, s, &m);
        inv.add_col_multiple(s, r, &m.neg());
    }
    (a, inv)
}

/// A random acyclic complex of sizes `(n_0, ..., n_3)` with its transported
/// standard propagator.
///
/// Generators are paired `x -> u y` down one degree with random nonzero `u`,
/// and each degree is then rebased by a product of elementary matrices.
pub fn random_acyclic_complex(
    seed: Seed,
    sizes: [usize; 4],
    degree_bound: i64,
) -> Result<(TwistedComplex, Propagator), TestkitError> {
    let n = sizes;
    let infeasible = || TestkitError::Infeasible(sizes);
    let r1 = n[0];
    let r2 = n[1].checked_sub(r1).ok_or_else(infeasible)?;
    let r3 = n[2].checked_sub(r2).ok_or_else(infeasible)?;
    if n[3] != r3 {
        return Err(infeasible());
    }
    let ranks = [0, r1, r2, r3, 0];
    let mut rng = rng(seed);
    let bound = degree_bound.max(0);
    let perms: Vec<Vec<usize>> = (0..=TOP)
        .map(|d| {
            let mut p: Vec<usize> = (0..n[d]).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    let mut bd: [Matrix<LaurentPoly>; 3] = std::array::from_fn(|k| Matrix::zeros(n[k], n[k + 1]));
    let mut gb: [Matrix<RatFn>; 4] = std::array::from_fn(|d| Matrix::zeros(if d < TOP { n[d + 1] } else { 0 }, n[d]));
    for d in 1..=TOP {
        for j in 0..ranks[d] {
            // degree d lists the targets of ∂_{d+1} first, then the sources of ∂_d
            let x = perms[d][ranks[d + 1] + j];
            let y = perms[d - 1][j];
            let u = random_unit_times_poly(&mut rng, bound);
            let inv = RatFn::from(u.clone()).inv().expect("nonzero");
            bd[d - 1].set(y, x, u);
            gb[d - 1].set(x, y, inv);
        }
    }
    let mats: Vec<_> = (0..=TOP).map(|d| random_elementary_product(&mut rng, n[d], n[d] + 1, bound)).collect();
    let boundary: [Matrix<LaurentPoly>; 3] = std::array::from_fn(|k| mats[k].0.mul(&bd[k]).mul(&mats[k + 1].1));
    let blocks: [Matrix<RatFn>; 4] = std::array::from_fn(|d| {
        if d < TOP {
            to_ratfn_matrix(&mats[d + 1].0).mul(&gb[d]).mul(&to_ratfn_matrix(&mats[d].1))
        } else {
            gb[d].clone()
        }
    });
    let gens: [Vec<String>; 4] = std::array::from_fn(|d| (0..n[d]).map(|j| format!("c{}_{}", d, j)).collect());
    let c = TwistedComplex::new(gens, boundary).expect("shapes follow sizes");
    let g = Endo::from_blocks(n, 1, blocks).expect("shapes follow sizes");
    let g = Propagator::new(&c, g).expect("conjugated standard propagator");
    Ok((c, g))
}

/// Connected trivalent skeletons with `2k` vertices, one per class.
pub fn enumerate_trivalent_graphs(k: usize) -> Result<Vec<CGraph>, TestkitError> {
    Ok(all_skeletons(k)?.iter().map(|code| CGraph::compact(code.representative())).collect())
}

/// Independent count of connected trivalent multigraphs on `2k` vertices:
/// every perfect matching of the `6k` half-edges, deduplicated by the
/// lexicographically least adjacency matrix over vertex relabelings.
pub fn matching_oracle_count(k: usize) -> usize {
    let nv = 2 * k;
    let nh = 3 * nv;
    let mut classes: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut partner = vec![usize::MAX; nh];
    fn matchings(partner: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        let Some(a) = partner.iter().position(|&p| p == usize::MAX) else {
            f(partner);
            return;
        };
        for b in a + 1..partner.len() {
            if partner[b] == usize::MAX {
                partner[a] = b;
                partner[b] = a;
                matchings(partner, f);
                partner[a] = usize::MAX;
                partner[b] = usize::MAX;
            }
        }
    }
    let mut perms = Vec::new();
    permutations(nv, &mut Vec::new(), &mut perms);
    matchings(&mut partner, &mut |m: &[usize]| {
        let mut adj = vec![0usize; nv * nv];
        for (h, &o) in m.iter().enumerate() {
            if h < o {
                let (a, b) = (h / 3, o / 3);
                adj[a * nv + b] += 1;
                if a != b {
                    adj[b * nv + a] += 1;
                }
            }
        }
        if !adjacency_connected(&adj, nv) {
            return;
        }
        let best = perms
            .iter()
            .map(|p| {
                let mut x = vec![0; nv * nv];
                for i in 0..nv {
                    for j in 0..nv {
                        x[p[i] * nv + p[j]] = adj[i * nv + j];
                    }
                }
                x
            })
            .min()
            .unwrap();
        classes.insert(best);
    });
    classes.len()
}

fn permutations(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for i in 0..n {
        if !cur.contains(&i) {
            cur.push(i);
            permutations(n, cur, out);
            cur.pop();
        }
    }
}

fn adjacency_connected(adj: &[usize], nv: usize) -> bool {
    let mut seen = vec![false; nv];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..nv {
            if adj[v * nv + w] > 0 && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Row-reduced basis of the truncated relation space, built without the
/// library's reducer: each skeleton is presented by a randomly relabeled
/// copy of its representative (edge flips only at level 1, where the leg
/// exponent box is bar-symmetric), relations are generated in a shuffled
/// order, and the basis comes from dense Gauss-Jordan elimination.
pub fn brute_force_relation_span(k: usize, trunc: &Truncation, seed: Seed) -> Result<Vec<SparseVec>, TestkitError> {
    let mut rng = rng(seed);
    let mut rels = Vec::new();
    if trunc.bound >= 0 {
        let level = trunc.level.clone();
        let den = LaurentPoly::from_upoly(level.clone());
        let n = trunc.bound;
        for code in all_skeletons(k)? {
            let rep = code.representative();
            let g = random_relabel(&mut rng, &rep, level.is_one());
            let ne = g.num_edges();
            for e in 0..ne {
                if g.is_loop(e) {
                    continue;
                }
                let legs: Vec<usize> = (0..ne).filter(|&f| f != e).collect();
                let total = (2 * n + 1).pow(legs.len() as u32);
                for idx in 0..total {
                    let mut colors = vec![RatFn::one(); ne];
                    let mut r = idx;
                    for &f in &legs {
                        let a = (r % (2 * n + 1)) as i64 - n;
                        r /= 2 * n + 1;
                        colors[f] = RatFn::new(LaurentPoly::t_pow(a), den.clone()).expect("nonzero level");
                    }
                    rels.push((ColoredDiagram { graph: g.clone(), colors }, e));
                }
            }
        }
        rels.shuffle(&mut rng);
    }
    let mut vecs = Vec::new();
    for (d, e) in rels {
        let v = coordinates(&ihx_relation(&d, e)?, &trunc.level);
        if !v.is_empty() && v.keys().all(|(_, x)| x.iter().all(|a| a.abs() <= trunc.bound)) {
            vecs.push(v);
        }
    }
    Ok(dense_rref(&vecs))
}

fn random_relabel(rng: &mut impl Rng, g: &Graph, flips: bool) -> Graph {
    let mut vmap: Vec<usize> = (0..g.num_vertices()).collect();
    let mut emap: Vec<usize> = (0..g.num_edges()).collect();
    vmap.shuffle(rng);
    emap.shuffle(rng);
    let mut h = g.relabel(&vmap, &emap);
    if flips {
        for e in 0..h.num_edges() {
            if rng.gen_bool(0.5) {
                h = h.reversed_edge(e);
            }
        }
    }
    h
}

/// Reduced row echelon form of the span of `vecs`, rows sorted by pivot.
pub fn dense_rref(vecs: &[SparseVec]) -> Vec<SparseVec> {
    let keys: Vec<_> = vecs.iter().flat_map(|v| v.keys().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
    let index: BTreeMap<_, usize> = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
    let mut rows: Vec<Vec<Q>> = vecs
        .iter()
        .map(|v| {
            let mut r = vec![Q::from_integer(0.into()); keys.len()];
            for (k, x) in v {
                r[index[k]] = x.clone();
            }
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..keys.len() {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != Q::from_integer(0.into())) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != Q::from_integer(0.into()) {
                let c = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &c * y;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows.into_iter()
        .map(|r| {
            r.into_iter()
                .enumerate()
                .filter(|(_, x)| *x != Q::from_integer(0.into()))
                .map(|(i, x)| (keys[i].clone(), x))
                .collect()
        })
        .collect()
}
