//! Library results checked against independent computations: dense rank and
//! minors, brute-force relation spans, and residuals by direct products.

use rand::seq::SliceRandom;
use rand::Rng;

use equimorse::algebra::{q, rank, solve_linear, to_ratfn_matrix, LaurentPoly, Matrix, MultiWeight, RatFn, UPoly};
use equimorse::diagram::{
    all_skeletons, coordinates, ihx_relation, reduce_modulo_ihx, relation_span, CGraph, ColoredDiagram, DiagramSum,
    EdgeKind, Graph, SparseVec, Truncation,
};
use equimorse::morse::{
    elementary, find_propagator, find_propagator_seeded, handle_slide, homology_over_lambda, is_propagator,
    propagator_homotopy, Endo, TwistedComplex, TOP,
};
use equimorse::testkit::{
    brute_force_relation_span, dense_rref, enumerate_trivalent_graphs, matching_oracle_count, random,
    random_acyclic_complex, rng,
};
use equimorse::trace::{assemble_z, verify_propagator_independence, Family, FlowCountTable};

fn in_span(basis: &[SparseVec], v: &SparseVec) -> bool {
    let mut rows = basis.to_vec();
    rows.push(v.clone());
    dense_rref(&rows).len() == basis.len()
}

fn max_exponent(v: &SparseVec) -> i64 {
    v.keys().flat_map(|(_, x)| x.iter().map(|a| a.abs())).max().unwrap_or(0)
}

#[test]
fn invertible_lambda_systems_have_zero_residual() {
    let mut r = rng(66);
    for _ in 0..10 {
        let n = 6;
        let mut m: Matrix<LaurentPoly> = Matrix::identity(n);
        for _ in 0..12 {
            let a = r.gen_range(0..n);
            let b = (a + r.gen_range(1..n)) % n;
            m.add_row_multiple(a, b, &LaurentPoly::monomial(q(r.gen_range(-2..=2)), r.gen_range(-2..=2)));
        }
        let m = to_ratfn_matrix(&m);
        let b: Matrix<RatFn> = Matrix::from_fn(n, 2, |_, _| random::ratfn(&mut r, 2));
        let sol = solve_linear(&m, &b).unwrap();
        assert!(sol.unique);
        assert_eq!(m.mul(&sol.x), b);
    }
}

#[test]
fn seeded_propagators_and_their_homotopy() {
    let mut r = rng(168);
    for _ in 0..20 {
        let (c, _) = random_acyclic_complex(r.gen(), random::feasible_sizes(&mut r, 5), 2).unwrap();
        let g = find_propagator_seeded(&c, r.gen()).unwrap();
        let g2 = find_propagator_seeded(&c, r.gen()).unwrap();
        assert!(is_propagator(&c, g.as_endo()) && is_propagator(&c, g2.as_endo()));
        let h = propagator_homotopy(&c, g.as_endo(), g2.as_endo()).unwrap();
        assert_eq!(h.degree(), 2);
        let d = Endo::boundary(&c);
        let lhs = d.compose(&h).unwrap().sub(&h.compose(&d).unwrap()).unwrap();
        assert_eq!(lhs, g2.as_endo().sub(g.as_endo()).unwrap());
    }
}

#[test]
fn handle_slide_output_has_a_homotopy() {
    let mut r = rng(169);
    let mut n = 0;
    while n < 10 {
        let (c, g) = random_acyclic_complex(r.gen(), random::feasible_sizes(&mut r, 5), 2).unwrap();
        let Some(&d) = (0..=TOP).filter(|&d| c.dims()[d] >= 2).collect::<Vec<_>>().choose(&mut r) else { continue };
        let h0 = elementary(c.dims(), d, 0, 1, LaurentPoly::t_pow(r.gen_range(-2..=2)));
        let (c2, g2) = handle_slide(&c, &g, &h0).unwrap();
        let fresh = find_propagator(&c2).unwrap();
        let h = propagator_homotopy(&c2, fresh.as_endo(), g2.as_endo()).unwrap();
        let bd = Endo::boundary(&c2);
        let lhs = bd.compose(&h).unwrap().sub(&h.compose(&bd).unwrap()).unwrap();
        assert_eq!(lhs, g2.as_endo().sub(fresh.as_endo()).unwrap());
        n += 1;
    }
}

/// Determinant by cofactor expansion.
fn det(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    if m.is_empty() {
        return LaurentPoly::one();
    }
    let mut out = LaurentPoly::zero();
    for j in 0..m.len() {
        let minor: Vec<Vec<LaurentPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][j].mul(&det(&minor));
        out = if j % 2 == 0 { out.add(&term) } else { out.sub(&term) };
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Gcd of the `r`-minors, made monic with powers of `t` removed.
fn determinantal_divisor(m: &Matrix<LaurentPoly>, r: usize) -> UPoly {
    let mut g = UPoly::zero();
    for rows in subsets(m.rows(), r) {
        for cols in subsets(m.cols(), r) {
            let sub: Vec<Vec<LaurentPoly>> =
                rows.iter().map(|&i| cols.iter().map(|&j| m.get(i, j).clone()).collect()).collect();
            let d = det(&sub);
            if !d.is_zero() {
                g = g.gcd(&d.to_upoly_shifted().1);
            }
        }
    }
    g.strip_t().1.monic()
}

#[test]
fn homology_matches_ranks_and_minors() {
    let mut r = rng(223);
    for _ in 0..40 {
        let (n0, n1, n2, n3) = (r.gen_range(0..=3), r.gen_range(0..=3), r.gen_range(0..=2), r.gen_range(0..=2));
        let gens: [Vec<String>; 4] =
            std::array::from_fn(|d| (0..[n0, n1, n2, n3][d]).map(|j| format!("x{}_{}", d, j)).collect());
        let b1: Matrix<LaurentPoly> =
            Matrix::from_fn(
                n0,
                n1,
                |_, _| if r.gen_bool(0.3) { LaurentPoly::zero() } else { random::laurent(&mut r, 2, 2) },
            );
        let c = TwistedComplex::new(gens, [b1.clone(), Matrix::zeros(n1, n2), Matrix::zeros(n2, n3)]).unwrap();
        let h = homology_over_lambda(&c);
        let rk = rank(&to_ratfn_matrix(&b1));
        assert_eq!(h[0].free_rank, n0 - rk);
        assert_eq!(h[1].free_rank, n1 - rk);
        assert!(h[1].torsion.is_empty());
        assert_eq!((h[2].free_rank, h[3].free_rank), (n2, n3));
        let product = h[0].torsion.iter().fold(UPoly::one(), |acc, x| acc.mul(x));
        assert_eq!(product, if rk == 0 { UPoly::one() } else { determinantal_divisor(&b1, rk) });
        assert!(h[0].torsion.windows(2).all(|w| w[0].divides(&w[1])));
    }
}

#[test]
fn generated_complexes_have_trivial_homology() {
    let mut r = rng(224);
    for _ in 0..20 {
        let c = random::acyclic_complex(&mut r, 5, 2);
        for m in homology_over_lambda(&c) {
            assert_eq!(m.free_rank, 0);
        }
    }
}

#[test]
fn enumeration_matches_matchings() {
    assert_eq!(enumerate_trivalent_graphs(1).unwrap().len(), matching_oracle_count(1));
    assert_eq!(enumerate_trivalent_graphs(2).unwrap().len(), matching_oracle_count(2));
    for k in 1..=3 {
        for g in enumerate_trivalent_graphs(k).unwrap() {
            assert!(g.graph().is_connected());
            let g = g.graph();
            let mut uses = vec![0; g.num_vertices()];
            for e in 0..g.num_edges() {
                for (v, _) in g.ends(e) {
                    uses[v] += 1;
                }
            }
            assert!(uses.iter().all(|&u| u == 3));
        }
    }
}

#[test]
fn relation_span_matches_brute_force() {
    let levels = [UPoly::one(), UPoly::from_ints(&[1, 1]), UPoly::from_ints(&[1, -3, 1])];
    for bound in 0..=2 {
        for level in &levels {
            let tr = Truncation::with_level(bound, level);
            let lib = relation_span(1, &tr).unwrap().rref();
            assert_eq!(
                lib,
                brute_force_relation_span(1, &tr, bound as u64 + 7).unwrap(),
                "bound {} level {:?}",
                bound,
                level
            );
        }
    }
    let tr = Truncation::new(0);
    assert_eq!(relation_span(2, &tr).unwrap().rref(), brute_force_relation_span(2, &tr, 3).unwrap());
}

#[test]
fn theta_relations_stay_on_two_vertices() {
    let theta = Graph::from_edge_list(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
    let k1 = all_skeletons(1).unwrap();
    let mut r = rng(315);
    for e in 0..3 {
        let colors = (0..3).map(|_| RatFn::t_pow(r.gen_range(-2..=2))).collect();
        let rel = ihx_relation(&ColoredDiagram::new(theta.clone(), colors).unwrap(), e).unwrap();
        assert!(rel.terms().all(|(code, _)| k1.contains(code)));
    }
}

fn level_one_sum(r: &mut impl Rng, terms: usize) -> DiagramSum {
    (0..terms).fold(DiagramSum::zero(), |acc, _| {
        let g = random::graph(r, 1);
        let colors =
            (0..3).map(|_| RatFn::from(LaurentPoly::monomial(q(r.gen_range(1..=3)), r.gen_range(-1..=1)))).collect();
        acc.add(&ColoredDiagram::new(g, colors).unwrap().normalize().scale(&q(r.gen_range(-3..=3))))
    })
}

#[test]
fn k1_reduction_agrees_with_rank() {
    let mut r = rng(324);
    let one = UPoly::one();
    let (mut same, mut differ) = (0, 0);
    for i in 0..60 {
        let a = level_one_sum(&mut r, 3);
        let mut b = if i % 2 == 0 { a.clone() } else { level_one_sum(&mut r, 3) };
        for _ in 0..r.gen_range(0..=2) {
            let g = random::graph(&mut r, 1);
            let Some(&e) = (0..3).filter(|&e| !g.is_loop(e)).collect::<Vec<_>>().choose(&mut r) else { continue };
            let colors = (0..3).map(|x| RatFn::t_pow(if x == e { 0 } else { r.gen_range(-1..=1) })).collect();
            let rel = ihx_relation(&ColoredDiagram::new(g, colors).unwrap(), e).unwrap();
            b = b.add(&rel.scale(&q(r.gen_range(1..=3))));
        }
        let diff = coordinates(&a.sub(&b), &one);
        let bound =
            [&a, &b].iter().map(|s| max_exponent(&coordinates(s, &one))).max().unwrap().max(max_exponent(&diff));
        let tr = Truncation::new(bound);
        let lib = reduce_modulo_ihx(&a, &tr).unwrap() == reduce_modulo_ihx(&b, &tr).unwrap();
        let oracle = in_span(&brute_force_relation_span(1, &tr, i).unwrap(), &diff);
        assert_eq!(lib, oracle, "pair {}", i);
        if lib {
            same += 1;
        } else {
            differ += 1;
        }
    }
    assert!(same > 0 && differ > 0);
}

#[test]
fn independence_residual_is_a_span_representative() {
    let mut r = rng(420);
    for i in 0..10 {
        // constant units keep every color at level 1
        let cs: Vec<TwistedComplex> =
            (0..3).map(|_| random_acyclic_complex(r.gen(), random::feasible_sizes(&mut r, 3), 0).unwrap().0).collect();
        let seeded = |s: u64| {
            let gs = cs.iter().map(|c| Some(find_propagator_seeded(c, s).unwrap())).collect();
            Family::new(cs.clone(), gs).unwrap()
        };
        let (fa, fb) = (seeded(r.gen()), seeded(r.gen()));
        let mut counts = FlowCountTable::empty(1);
        for _ in 0..2 {
            let g = random::graph(&mut r, 1);
            let kinds = (0..3)
                .map(|e| {
                    let c = &cs[e];
                    match (0..TOP)
                        .filter(|&d| c.dims()[d] > 0 && c.dims()[d + 1] > 0)
                        .collect::<Vec<_>>()
                        .choose(&mut r)
                    {
                        Some(&d) => EdgeKind::Separated {
                            input: c.generators(d + 1).choose(&mut r).unwrap().clone(),
                            output: c.generators(d).choose(&mut r).unwrap().clone(),
                        },
                        None => EdgeKind::Compact,
                    }
                })
                .collect();
            let w = MultiWeight::from_terms(
                3,
                [(vec![r.gen_range(-1..=1), 0, r.gen_range(-1..=1)], q(r.gen_range(1..=3)))],
            );
            counts.entries.push((CGraph::new(g, kinds).unwrap(), w));
        }
        let one = UPoly::one();
        let z = assemble_z(&counts, &fa).unwrap().sub(&assemble_z(&counts, &fb).unwrap());
        let bound = max_exponent(&coordinates(&z, &one));
        let tr = Truncation::new(bound);
        let rep = verify_propagator_independence(&counts, &fa, &fb, &tr).unwrap();
        let basis = brute_force_relation_span(1, &tr, i).unwrap();
        let diff = coordinates(&rep.difference, &one);
        assert_eq!(rep.holds, in_span(&basis, &diff), "dataset {}", i);
        let moved = coordinates(&rep.difference.sub(&rep.residual), &one);
        assert!(in_span(&basis, &moved), "dataset {}", i);
    }
    let (c, g) = random_acyclic_complex(5, [1, 2, 1, 0], 0).unwrap();
    let fam = Family::new(vec![c.clone(), c.clone(), c], vec![Some(g.clone()), Some(g.clone()), Some(g)]).unwrap();
    let counts = FlowCountTable::empty(1);
    assert!(verify_propagator_independence(&counts, &fam, &fam, &Truncation::new(0)).unwrap().holds);
}
