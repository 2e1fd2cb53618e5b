//! The command line driven in-process through `cli::run` on files written to
//! a scratch directory.

use std::path::{Path, PathBuf};

use equimorse::algebra::{q, LaurentPoly, Matrix};
use equimorse::cli::{run, CliOutput};
use equimorse::diagram::{ColoredDiagram, DiagramSum, Graph};
use equimorse::io::{
    write_anomaly, write_complex, write_count_table, write_diagram_sum, write_family, CountFile, FamilyManifest,
};
use equimorse::morse::{reversed, TwistedComplex};
use equimorse::testkit::random_acyclic_complex;
use equimorse::trace::{AnomalyData, FlowCountTable, SignPattern};

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn put(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn cli(args: &[&str]) -> CliOutput {
    run(std::iter::once("equimorse").chain(args.iter().copied()))
}

fn payload(out: &CliOutput) -> &str {
    out.stdout.split_once("\n---\n").map(|(_, p)| p).unwrap_or_else(|| panic!("no payload in {}", out.stdout))
}

fn t_minus_one() -> LaurentPoly {
    LaurentPoly::from_terms([(1, q(1)), (0, q(-1))])
}

fn interval() -> TwistedComplex {
    let gens = [vec!["q".to_string()], vec!["p".to_string()], vec![], vec![]];
    let b1 = Matrix::from_rows(vec![vec![t_minus_one()]]).unwrap();
    TwistedComplex::new(gens, [b1, Matrix::zeros(1, 0), Matrix::zeros(0, 0)]).unwrap()
}

#[test]
fn check_reports_acyclic_interval() {
    let dir = scratch("check");
    let path = put(&dir, "interval.txt", &write_complex(&interval()));
    let out = cli(&["check", &path]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.lines().any(|l| l == "acyclic: true"), "{}", out.stdout);
}

#[test]
fn check_rejects_nonzero_square() {
    let dir = scratch("square");
    let gens = [vec!["q".to_string()], vec!["p".to_string()], vec!["r".to_string()], vec![]];
    let b1 = Matrix::from_rows(vec![vec![t_minus_one()]]).unwrap();
    let b2 = Matrix::from_rows(vec![vec![LaurentPoly::one()]]).unwrap();
    let c = TwistedComplex::new(gens, [b1, b2, Matrix::zeros(1, 0)]).unwrap();
    let out = cli(&["check", &put(&dir, "bad.txt", &write_complex(&c))]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("valid: false"), "{}", out.stdout);
}

#[test]
fn generated_pair_is_an_o_cycle() {
    let dir = scratch("ocycle");
    let c = dir.join("c.txt");
    let g = dir.join("g.txt");
    let (c, g) = (c.to_str().unwrap(), g.to_str().unwrap());
    let out = cli(&["gen", "complex", "--seed", "11", "--sizes", "1,2,2,1", "--propagator-out", g]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    std::fs::write(c, payload(&out)).unwrap();
    let out = cli(&["verify", "o-cycle", c, g]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    let out = cli(&["verify", "o-cycle", c]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
}

/// One empty count table for each of the 2^3 sign patterns over three random
/// complexes.
fn empty_tables(dir: &Path) -> Vec<String> {
    let cs: Vec<TwistedComplex> = (0..3).map(|i| random_acyclic_complex(i, [1, 2, 1, 0], 1).unwrap().0).collect();
    for (i, c) in cs.iter().enumerate() {
        put(dir, &format!("c{}.txt", i), &write_complex(c));
        put(dir, &format!("r{}.txt", i), &write_complex(&reversed(c)));
    }
    SignPattern::all(3)
        .into_iter()
        .map(|pat| {
            let tag = pat.to_string().replace('+', "p").replace('-', "m");
            let entries =
                (0..3).map(|i| (format!("{}{}.txt", if pat.is_flipped(i) { "r" } else { "c" }, i), None)).collect();
            put(dir, &format!("fam_{}.txt", tag), &write_family(&FamilyManifest { entries }));
            let table = FlowCountTable { k: 1, pattern: pat, entries: Vec::new() };
            let cf = CountFile { table, family: Some(format!("fam_{}.txt", tag)) };
            put(dir, &format!("counts_{}.txt", tag), &write_count_table(&cf))
        })
        .collect()
}

#[test]
fn empty_invariant_is_zero() {
    let dir = scratch("invariant");
    let mut files = empty_tables(&dir);
    assert_eq!(files.len(), 8);
    files.push(put(&dir, "anomaly.txt", &write_anomaly(&AnomalyData::zero())));
    let mut args = vec!["invariant"];
    args.extend(files.iter().map(String::as_str));
    let out = cli(&args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(payload(&out).trim(), "0");
    assert!(out.stdout.contains("mu_k_defaulted: true"));
}

#[test]
fn anomaly_only_invariant_counts_every_pattern() {
    let dir = scratch("mu");
    let mut files = empty_tables(&dir);
    let theta = Graph::from_edge_list(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
    let mu = ColoredDiagram::uncolored(theta).normalize();
    let a = AnomalyData { z_anom: DiagramSum::zero(), mu_k: Some(mu.clone()), sign_w: 1 };
    files.push(put(&dir, "anomaly.txt", &write_anomaly(&a)));
    let mut args = vec!["invariant"];
    args.extend(files.iter().map(String::as_str));
    let out = cli(&args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(payload(&out), write_diagram_sum(&mu.scale(&q(8))));
}

#[test]
fn reports_are_deterministic_up_to_timing() {
    let dir = scratch("determinism");
    let path = put(&dir, "interval.txt", &write_complex(&interval()));
    let strip = |o: CliOutput| o.stdout.lines().filter(|l| !l.starts_with("timing_ms:")).collect::<Vec<_>>().join("\n");
    for cmd in ["check", "propagator", "homology"] {
        assert_eq!(strip(cli(&[cmd, &path])), strip(cli(&[cmd, &path])), "{}", cmd);
    }
}

#[test]
fn input_errors_exit_with_two() {
    let dir = scratch("errors");
    let bad = put(&dir, "bad.txt", "generators[0]: q\nnonsense here\n");
    let out = cli(&["check", &bad]);
    assert_eq!(out.code, 2);
    assert!(!out.stderr.is_empty());
    assert_eq!(cli(&["check", dir.join("missing.txt").to_str().unwrap()]).code, 2);
    assert_eq!(cli(&["no-such-command"]).code, 2);
    assert_eq!(cli(&["gen", "complex", "--seed", "1", "--sizes", "1,0,0,0"]).code, 2);
}
