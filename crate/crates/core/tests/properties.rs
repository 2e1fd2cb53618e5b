//! Randomized invariants. Each case draws a seed and builds its objects
//! through the seeded generators, so failures shrink to a reproducible seed.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use equimorse::algebra::parse::{parse_laurent, parse_multiweight, parse_ratfn};
use equimorse::algebra::{q, smith_normal_form, solve_linear, Matrix, MultiWeight, RatFn, UPoly};
use equimorse::diagram::{CGraph, ColoredCGraph, ColoredDiagram, DiagramSum, EdgeKind};
use equimorse::morse::{
    boundary_of_o, conjugate_by_sp, elementary, find_propagator, handle_slide, is_propagator, reverse_complex,
    slide_difference_holds, verify_o_cycle, Propagator, TwistedComplex, TOP,
};
use equimorse::testkit::{random, random_acyclic_complex, rng};
use equimorse::trace::{assemble_z, correct_anomaly, trace_weighted, Family, FlowCountTable};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn nonempty_complex(r: &mut impl Rng, max: usize, bound: i64) -> (TwistedComplex, Propagator) {
    loop {
        let sizes = random::feasible_sizes(r, max);
        if sizes.iter().sum::<usize>() > 0 {
            return random_acyclic_complex(r.gen(), sizes, bound).unwrap();
        }
    }
}

fn small_family(r: &mut impl Rng) -> Family {
    let (cs, gs): (Vec<_>, Vec<_>) = (0..3).map(|_| nonempty_complex(r, 2, 1)).unzip();
    Family::new(cs, gs.into_iter().map(Some).collect()).unwrap()
}

/// k = 1 graph whose separated edges go down exactly one index.
fn degree_one_cgraph(r: &mut impl Rng, fam: &Family) -> CGraph {
    let g = random::graph(r, 1);
    let kinds = (0..3)
        .map(|e| {
            let c = fam.complex(e);
            let ds: Vec<usize> = (0..TOP).filter(|&d| c.dims()[d] > 0 && c.dims()[d + 1] > 0).collect();
            match ds.choose(r) {
                Some(&d) if r.gen_bool(0.6) => EdgeKind::Separated {
                    input: c.generators(d + 1).choose(r).unwrap().clone(),
                    output: c.generators(d).choose(r).unwrap().clone(),
                },
                _ => EdgeKind::Compact,
            }
        })
        .collect();
    CGraph::new(g, kinds).unwrap()
}

fn counts(r: &mut impl Rng, fam: &Family, n: usize) -> FlowCountTable {
    let mut t = FlowCountTable::empty(1);
    t.entries = (0..n).map(|_| (degree_one_cgraph(r, fam), random::multiweight(r, 3, 1, 2))).collect();
    t
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn scalar_text_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random::laurent(&mut r, 4, 4);
        prop_assert_eq!(parse_laurent(&p.to_string()).unwrap(), p.clone());
        let f = random::ratfn(&mut r, 3);
        prop_assert_eq!(parse_ratfn(&f.to_string()).unwrap().to_string(), f.to_string());
        let w = random::multiweight(&mut r, 4, 3, 4);
        prop_assert_eq!(parse_multiweight(&w.to_string(), 4).unwrap(), w);
    }

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (random::laurent(&mut r, 3, 3), random::laurent(&mut r, 3, 3), random::laurent(&mut r, 3, 3));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));

        let (a, b, c) = (random::ratfn(&mut r, 2), random::ratfn(&mut r, 2), random::ratfn(&mut r, 2));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }

        let n = 3;
        let (a, b, c) = (random::multiweight(&mut r, n, 2, 3), random::multiweight(&mut r, n, 2, 3), random::multiweight(&mut r, n, 2, 3));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn bar_is_a_ring_involution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random::laurent(&mut r, 4, 3), random::laurent(&mut r, 4, 3));
        prop_assert_eq!(a.mul(&b).bar(), a.bar().mul(&b.bar()));
        prop_assert_eq!(a.bar().bar(), a);
        let (f, g) = (random::ratfn(&mut r, 2), random::ratfn(&mut r, 2));
        prop_assert_eq!(f.mul(&g).bar(), f.bar().mul(&g.bar()));
        prop_assert_eq!(f.add(&g).bar(), f.bar().add(&g.bar()));
        prop_assert_eq!(f.bar().bar(), f);
        let w = random::multiweight(&mut r, 3, 2, 3);
        let v = random::multiweight(&mut r, 3, 2, 3);
        prop_assert_eq!(w.mul(&v).bar(), w.bar().mul(&v.bar()));
    }

    #[test]
    fn solve_linear_residual_is_zero(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (m, n) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let a: Matrix<RatFn> = Matrix::from_fn(m, n, |_, _| if r.gen_bool(0.3) { RatFn::zero() } else { random::ratfn(&mut r, 1) });
        let x0: Matrix<RatFn> = Matrix::from_fn(n, 1, |_, _| random::ratfn(&mut r, 1));
        let b = a.mul(&x0);
        let sol = solve_linear(&a, &b).unwrap();
        prop_assert_eq!(a.mul(&sol.x), b);
    }

    #[test]
    fn smith_form_multiplies_back(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (m, n) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let a: Matrix<UPoly> = Matrix::from_fn(m, n, |_, _| {
            let len = r.gen_range(0..=3);
            UPoly::from_ints(&(0..len).map(|_| r.gen_range(-2..=2)).collect::<Vec<_>>())
        });
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
        let diag = s.diagonal();
        for (i, j, x) in s.d.entries() {
            prop_assert!(i == j || x.is_zero());
        }
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[0].divides(&w[1])));
        }
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn propagators_exist_on_acyclic_complexes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random::acyclic_complex(&mut r, 6, 2);
        prop_assert!(c.validate().is_ok() && c.is_acyclic());
        let g = find_propagator(&c).unwrap();
        prop_assert!(is_propagator(&c, g.as_endo()));
    }

    #[test]
    fn delta_squares_to_zero(seed in any::<u64>(), degree in -3i64..=3) {
        let mut r = rng(seed);
        let c = random::acyclic_complex(&mut r, 4, 2);
        let g = random::endo(&mut r, c.dims(), degree, 2);
        prop_assert!(g.delta(&c).unwrap().delta(&c).unwrap().is_zero());
    }

    #[test]
    fn sp_conjugation_preserves_propagators(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (c, g) = nonempty_complex(&mut r, 5, 2);
        let names: Vec<String> = c.all_generators().iter().flatten().cloned().collect();
        let p = names.choose(&mut r).unwrap();
        let sign = if r.gen_bool(0.5) { 1 } else { -1 };
        let (c2, g2) = conjugate_by_sp(&c, &g, p, sign).unwrap();
        prop_assert!(c2.validate().is_ok() && c2.is_acyclic());
        prop_assert!(is_propagator(&c2, g2.as_endo()));
        prop_assert_eq!(conjugate_by_sp(&c2, &g2, p, -sign).unwrap(), (c, g));
    }

    #[test]
    fn reversal_is_an_involution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (c, g) = nonempty_complex(&mut r, 6, 2);
        let (rc, rg) = reverse_complex(&c, &g);
        prop_assert!(rc.validate().is_ok() && rc.is_acyclic() && is_propagator(&rc, rg.as_endo()));
        prop_assert_eq!(reverse_complex(&rc, &rg), (c, g));
    }

    #[test]
    fn o_chain_boundary_coefficients(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (c, g) = nonempty_complex(&mut r, 5, 2);
        for (k, _, x) in boundary_of_o(&c, g.as_endo()).iter() {
            prop_assert_eq!(x.clone(), RatFn::from_int(if k % 2 == 0 { 1 } else { -1 }));
        }
        prop_assert!(verify_o_cycle(&c, g.as_endo()));
    }

    #[test]
    fn handle_slides_keep_the_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (c, g) = nonempty_complex(&mut r, 6, 2);
        let ds: Vec<usize> = (0..=TOP).filter(|&d| c.dims()[d] >= 2).collect();
        if let Some(&d) = ds.choose(&mut r) {
            let n = c.dims()[d];
            let s = r.gen_range(0..n);
            let t = (s + r.gen_range(1..n)) % n;
            let h = elementary(c.dims(), d, s, t, random::nonzero_laurent(&mut r, 2, 2));
            let (c2, g2) = handle_slide(&c, &g, &h).unwrap();
            prop_assert!(c2.is_acyclic() && is_propagator(&c2, g2.as_endo()));
            prop_assert!(slide_difference_holds(g.as_endo(), g2.as_endo(), &h));
        }
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>()) {
        let sizes = random::feasible_sizes(&mut rng(seed), 6);
        prop_assert_eq!(random_acyclic_complex(seed, sizes, 2).unwrap(), random_acyclic_complex(seed, sizes, 2).unwrap());
        prop_assert_eq!(random::diagram_sum(&mut rng(seed), 2, 2, 3), random::diagram_sum(&mut rng(seed), 2, 2, 3));
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn normalization_is_idempotent(seed in any::<u64>(), k in 1usize..=2) {
        let mut r = rng(seed);
        let s = random::diagram_sum(&mut r, k, 2, 3);
        let again = s.monomials().into_iter().fold(DiagramSum::zero(), |acc, (c, code, colors)| {
            acc.add(&ColoredDiagram::new(code.representative(), colors).unwrap().normalize().scale(&c))
        });
        prop_assert_eq!(again, s);
    }

    #[test]
    fn normalization_respects_the_relations(seed in any::<u64>(), k in 1usize..=2) {
        let mut r = rng(seed);
        let d = random::colored_diagram(&mut r, k, 2);
        let base = d.normalize();
        let nv = 2 * k;
        let ne = 3 * k;
        prop_assert_eq!(d.holonomy_move(r.gen_range(0..nv), r.gen_range(-3..=3)).normalize(), base.clone());
        prop_assert_eq!(d.reorient(r.gen_range(0..ne)).normalize(), base.clone());
        let mut vmap: Vec<usize> = (0..nv).collect();
        let mut emap: Vec<usize> = (0..ne).collect();
        vmap.shuffle(&mut r);
        emap.shuffle(&mut r);
        prop_assert_eq!(d.relabel(&vmap, &emap).normalize(), base.clone());
        let v = r.gen_range(0..nv);
        prop_assert_eq!(d.swap_slots(v, 0, 2).normalize(), base.neg());
        let e = r.gen_range(0..ne);
        let c = q(r.gen_range(1..=4)) / q(r.gen_range(1..=3));
        let mut scaled = d.clone();
        scaled.colors[e] = scaled.colors[e].scale(&c);
        prop_assert_eq!(scaled.normalize(), base.scale(&c));
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn trace_is_linear_in_the_weight(seed in any::<u64>()) {
        let mut r = rng(seed);
        let fam = small_family(&mut r);
        let g = degree_one_cgraph(&mut r, &fam);
        let (a, b) = (random::multiweight(&mut r, 3, 1, 2), random::multiweight(&mut r, 3, 1, 2));
        let c = q(r.gen_range(-3..=3));
        let lhs = trace_weighted(&g, &a.add(&b.scale(&c)), &fam).unwrap();
        let rhs = trace_weighted(&g, &a, &fam).unwrap().add(&trace_weighted(&g, &b, &fam).unwrap().scale(&c));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(trace_weighted(&g, &MultiWeight::zero(3), &fam).unwrap().is_zero());
    }

    #[test]
    fn assembly_is_additive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let fam = small_family(&mut r);
        let (n1, n2) = (r.gen_range(0..=2), r.gen_range(0..=2));
        let (a, b) = (counts(&mut r, &fam, n1), counts(&mut r, &fam, n2));
        let whole = assemble_z(&a.concat(&b), &fam).unwrap();
        prop_assert_eq!(whole, assemble_z(&a, &fam).unwrap().add(&assemble_z(&b, &fam).unwrap()));
    }

    #[test]
    fn anomaly_correction_is_independent_of_counts(seed in any::<u64>()) {
        let mut r = rng(seed);
        let fam = small_family(&mut r);
        let an = random::anomaly(&mut r, 1);
        let shift = |z: &DiagramSum| correct_anomaly(z, &an).sub(z);
        let n = r.gen_range(1..=2);
        let z1 = assemble_z(&counts(&mut r, &fam, n), &fam).unwrap();
        let z2 = assemble_z(&counts(&mut r, &fam, n), &fam).unwrap();
        prop_assert_eq!(shift(&z1), shift(&z2));
        prop_assert_eq!(shift(&DiagramSum::zero()), shift(&z1));
    }

    #[test]
    fn colored_cgraph_color_count_is_checked(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random::cgraph(&mut r, 1, None);
        prop_assert!(ColoredCGraph::new(g.clone(), vec![RatFn::one(); 2]).is_err());
        prop_assert!(ColoredCGraph::new(g, vec![RatFn::one(); 3]).is_ok());
    }
}
