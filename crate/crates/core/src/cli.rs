//! The `equimorse` command line. Exit status is 0 on success or a verified
//! identity, 1 when a verification comes out false, 2 on input errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::algebra::parse::parse_laurent;
use crate::algebra::{LaurentPoly, UPoly};
use crate::diagram::{reduce_modulo_ihx, ColoredCGraph, Truncation};
use crate::io::{
    self, inputs_digest, load_complex, load_count_table, load_family, load_propagator, LoadError, RunReport,
};
use crate::morse::{
    boundary_of_o, conjugate_by_sp, elementary, find_propagator, find_propagator_seeded, handle_slide,
    homology_over_lambda, is_propagator, reverse_complex, slide_difference_holds, verify_o_cycle, Propagator,
    TwistedComplex,
};
use crate::testkit::{enumerate_trivalent_graphs, random, random_acyclic_complex, rng};
use crate::trace::{
    sum_over_orientations, trace, verify_degree_zero_cancellation, verify_propagator_independence, AnomalyData,
    PatternInput,
};

#[derive(Parser, Debug)]
#[command(name = "equimorse", version, about = "Twisted Morse complexes, propagators and colored diagram traces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate a complex and test acyclicity over Q(t).
    Check { complex: PathBuf },
    /// Solve for a combinatorial propagator.
    Propagator {
        complex: PathBuf,
        /// Visit unknowns in a seeded order.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Homology over Q[t, t^-1] as a module presentation.
    Homology { complex: PathBuf },
    /// Trace one colored C-graph; `colors` may be `-` to use the graph file's colors.
    Trace { graph: PathBuf, colors: String, family: PathBuf },
    /// Assemble the invariant from one count table per sign pattern; the last file is the anomaly data.
    Invariant {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        trunc: TruncArgs,
    },
    /// Reduce a diagram sum modulo IHX in a truncation.
    Reduce {
        sum: PathBuf,
        #[command(flatten)]
        trunc: TruncArgs,
    },
    #[command(subcommand)]
    Verify(VerifyCmd),
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Args, Debug, Clone)]
struct TruncArgs {
    /// Bound on color exponents; without it, `invariant` skips the reduction.
    #[arg(long)]
    truncation: Option<i64>,
    /// Common color denominator of the truncation, as a polynomial in t.
    #[arg(long)]
    level: Option<String>,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Boundary of the flow-line chain and its cycle property.
    OCycle { complex: PathBuf, propagator: Option<PathBuf> },
    /// Trace naturality under S_p conjugation of one complex of the family.
    Sp {
        family: PathBuf,
        graph: PathBuf,
        /// Edge label (1-based) whose complex is conjugated.
        #[arg(long)]
        label: usize,
        #[arg(long)]
        generator: String,
        #[arg(long, allow_hyphen_values = true)]
        sign: i32,
    },
    /// Degree-zero cancellation for a degenerate count table.
    Cancellation { table: PathBuf, family: PathBuf },
    /// Compare z for two propagator families modulo IHX.
    PropagatorIndependence {
        counts: PathBuf,
        family_a: PathBuf,
        family_b: PathBuf,
        #[arg(long, default_value_t = 2)]
        truncation: i64,
    },
    /// Handle slide by h(source) = value · target within one degree.
    HandleSlide {
        complex: PathBuf,
        propagator: Option<PathBuf>,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
    },
}

#[derive(Subcommand, Debug)]
enum GenCmd {
    /// Random acyclic complex with its propagator.
    Complex {
        #[arg(long)]
        seed: u64,
        /// Generator counts in degrees 0..3, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        degree_bound: i64,
        /// Also write the propagator here.
        #[arg(long)]
        propagator_out: Option<PathBuf>,
    },
    /// Reversed complex and propagator, for flipped sign patterns.
    Reversed {
        complex: PathBuf,
        propagator: Option<PathBuf>,
        #[arg(long)]
        propagator_out: Option<PathBuf>,
    },
    /// Skeletons with 2k vertices, or `--count` random C-graphs with a seed.
    Graphs {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

/// Outcome of [`run`]: exit status and the two output streams.
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Run {
    inputs: Vec<Vec<u8>>,
}

impl Run {
    fn read(&mut self, p: &Path) -> Result<(), String> {
        self.inputs.push(std::fs::read(p).map_err(|e| format!("{}: {}", p.display(), e))?);
        Ok(())
    }

    fn report(&self, op: &str) -> RunReport {
        RunReport::new(op, inputs_digest(self.inputs.iter().map(|v| v.as_slice())))
    }
}

fn load_err(e: LoadError) -> String {
    e.to_string()
}

fn truncation(t: &TruncArgs, default: i64) -> Result<Truncation, String> {
    let bound = t.truncation.unwrap_or(default);
    let level = match &t.level {
        Some(s) => {
            let p = parse_laurent(s).map_err(|e| format!("--level: {}", e))?;
            let (shift, u) = p.to_upoly_shifted();
            if shift != 0 || u.coeff(0) == num_traits::Zero::zero() {
                return Err("--level must be a polynomial with nonzero constant term".into());
            }
            u
        }
        None => UPoly::one(),
    };
    Ok(Truncation::with_level(bound, &level))
}

fn propagator_for(run: &mut Run, c: &TwistedComplex, p: Option<&PathBuf>) -> Result<Propagator, String> {
    match p {
        Some(p) => {
            run.read(p)?;
            load_propagator(p, c).map_err(load_err)
        }
        None => find_propagator(c).map_err(|e| e.to_string()),
    }
}

fn bool_outcome(r: &mut RunReport, ok: bool) {
    r.outcome = ok.to_string();
}

fn execute(cmd: Cmd) -> Result<RunReport, String> {
    let mut run = Run { inputs: Vec::new() };
    match cmd {
        Cmd::Check { complex } => {
            run.read(&complex)?;
            let c = load_complex(&complex).map_err(load_err)?;
            let mut r = run.report("check");
            match c.validate() {
                Ok(()) => {
                    let acyclic = c.is_acyclic();
                    r.field("valid", true).field("acyclic", acyclic);
                    bool_outcome(&mut r, acyclic);
                }
                Err(v) => {
                    r.field("valid", false).field(
                        "violation",
                        format!("{} -> {} in degree {}: {}", v.source, v.target, v.degree, v.value),
                    );
                    bool_outcome(&mut r, false);
                }
            }
            Ok(r)
        }
        Cmd::Propagator { complex, seed } => {
            run.read(&complex)?;
            let c = load_complex(&complex).map_err(load_err)?;
            let g = match seed {
                Some(s) => find_propagator_seeded(&c, s),
                None => find_propagator(&c),
            };
            let mut r = run.report("propagator");
            match g {
                Ok(g) => {
                    r.outcome = "ok".into();
                    r.payload = Some(io::write_propagator(&c, &g));
                }
                Err(e) => {
                    r.field("error", e);
                    bool_outcome(&mut r, false);
                }
            }
            Ok(r)
        }
        Cmd::Homology { complex } => {
            run.read(&complex)?;
            let c = load_complex(&complex).map_err(load_err)?;
            c.validate().map_err(|v| format!("boundary does not square to zero at {} -> {}", v.source, v.target))?;
            let mut r = run.report("homology");
            r.outcome = "ok".into();
            r.field("acyclic", c.is_acyclic());
            r.payload = Some(homology_over_lambda(&c).iter().map(|h| format!("{}\n", h)).collect());
            Ok(r)
        }
        Cmd::Trace { graph, colors, family } => {
            run.read(&graph)?;
            let (g, inline) = io::parse_cgraph(&io::read_file(&graph).map_err(load_err)?)
                .map_err(|e| format!("{}: {}", graph.display(), e))?;
            let cs = if colors == "-" {
                inline
            } else {
                let p = PathBuf::from(&colors);
                run.read(&p)?;
                let text = io::read_file(&p).map_err(load_err)?;
                Some(io::parse_colors_text(&text, g.num_edges()).map_err(|e| format!("{}: {}", colors, e))?)
            };
            run.read(&family)?;
            let fam = load_family(&family).map_err(load_err)?;
            let gamma = match cs {
                Some(cs) => ColoredCGraph::new(g, cs).map_err(|e| e.to_string())?,
                None => ColoredCGraph::uncolored(g),
            };
            let z = trace(&gamma, &fam).map_err(|e| e.to_string())?;
            let mut r = run.report("trace");
            r.outcome = "ok".into();
            r.payload = Some(io::write_diagram_sum(&z));
            Ok(r)
        }
        Cmd::Invariant { files, trunc } => {
            let (anomaly_path, counts) = files.split_last().expect("clap requires two files");
            let mut patterns = BTreeMap::new();
            let mut k = None;
            for p in counts {
                run.read(p)?;
                let (cf, fam_path) = load_count_table(p).map_err(load_err)?;
                let fam_path = fam_path.ok_or_else(|| format!("{}: count table has no `family:` line", p.display()))?;
                run.read(&fam_path)?;
                let family = load_family(&fam_path).map_err(load_err)?;
                if k.replace(cf.table.k).is_some_and(|k0| k0 != cf.table.k) {
                    return Err(format!("{}: k differs from the other count tables", p.display()));
                }
                let pat = cf.table.pattern.clone();
                let input = PatternInput { family, counts: cf.table, anomaly: AnomalyData::zero() };
                if patterns.insert(pat.clone(), input).is_some() {
                    return Err(format!("{}: pattern {} given twice", p.display(), pat));
                }
            }
            run.read(anomaly_path)?;
            let text = io::read_file(anomaly_path).map_err(load_err)?;
            let anomaly = io::parse_anomaly(&text).map_err(|e| format!("{}: {}", anomaly_path.display(), e))?;
            for v in patterns.values_mut() {
                v.anomaly = anomaly.clone();
            }
            let z = sum_over_orientations(&patterns).map_err(|e| e.to_string())?;
            let mut r = run.report("invariant");
            r.outcome = "ok".into();
            r.field("patterns", patterns.len());
            let z = match trunc.truncation {
                Some(_) => {
                    let t = truncation(&trunc, 0)?;
                    r.field("truncation", t.bound).field("level", LaurentPoly::from_upoly(t.level.clone()));
                    reduce_modulo_ihx(&z, &t).map_err(|e| e.to_string())?
                }
                None => {
                    r.field("truncation", "none");
                    z
                }
            };
            r.field("mu_k_defaulted", anomaly.mu_defaulted());
            if anomaly.mu_defaulted() {
                r.warn("mu_k was not supplied and is taken to be 0");
            }
            r.payload = Some(io::write_diagram_sum(&z));
            Ok(r)
        }
        Cmd::Reduce { sum, trunc } => {
            run.read(&sum)?;
            let s = io::parse_diagram_sum(&io::read_file(&sum).map_err(load_err)?)
                .map_err(|e| format!("{}: {}", sum.display(), e))?;
            let t = truncation(&trunc, 2)?;
            let red = reduce_modulo_ihx(&s, &t).map_err(|e| e.to_string())?;
            let mut r = run.report("reduce");
            r.outcome = "ok".into();
            r.field("truncation", t.bound).field("level", LaurentPoly::from_upoly(t.level.clone()));
            r.payload = Some(io::write_diagram_sum(&red));
            Ok(r)
        }
        Cmd::Verify(v) => verify(&mut run, v),
        Cmd::Gen(g) => generate(&mut run, g),
    }
}

fn verify(run: &mut Run, v: VerifyCmd) -> Result<RunReport, String> {
    match v {
        VerifyCmd::OCycle { complex, propagator } => {
            run.read(&complex)?;
            let c = load_complex(&complex).map_err(load_err)?;
            let g = propagator_for(run, &c, propagator.as_ref())?;
            let mut r = run.report("verify o-cycle");
            for (_, name, x) in boundary_of_o(&c, &g).iter() {
                r.field(&format!("boundary_O[{}]", name), x);
            }
            bool_outcome(&mut r, verify_o_cycle(&c, &g));
            Ok(r)
        }
        VerifyCmd::Sp { family, graph, label, generator, sign } => {
            run.read(&family)?;
            run.read(&graph)?;
            let fam = load_family(&family).map_err(load_err)?;
            let (g, colors) = io::parse_cgraph(&io::read_file(&graph).map_err(load_err)?)
                .map_err(|e| format!("{}: {}", graph.display(), e))?;
            let gamma = match colors {
                Some(cs) => ColoredCGraph::new(g, cs).map_err(|e| e.to_string())?,
                None => ColoredCGraph::uncolored(g),
            };
            if label == 0 || label > fam.len() {
                return Err(format!("--label must lie in 1..{}", fam.len()));
            }
            let i = label - 1;
            let p = Propagator::new(fam.complex(i), fam.map(i).clone()).map_err(|e| e.to_string())?;
            let (c2, g2) = conjugate_by_sp(fam.complex(i), &p, &generator, sign).map_err(|e| e.to_string())?;
            let fam2 = fam.replaced(i, c2, g2.into_endo());
            let lhs = trace(&gamma.sp_action(i, &generator, sign), &fam2).map_err(|e| e.to_string())?;
            let rhs = trace(&gamma, &fam).map_err(|e| e.to_string())?;
            let mut r = run.report("verify sp");
            bool_outcome(&mut r, lhs == rhs);
            r.payload = Some(io::write_diagram_sum(&rhs));
            Ok(r)
        }
        VerifyCmd::Cancellation { table, family } => {
            run.read(&table)?;
            run.read(&family)?;
            let w = io::parse_degenerate_table(&io::read_file(&table).map_err(load_err)?)
                .map_err(|e| format!("{}: {}", table.display(), e))?;
            let fam = load_family(&family).map_err(load_err)?;
            let ok = verify_degree_zero_cancellation(&w, &fam).map_err(|e| e.to_string())?;
            let mut r = run.report("verify cancellation");
            r.field("entries", w.entries.len());
            bool_outcome(&mut r, ok);
            Ok(r)
        }
        VerifyCmd::PropagatorIndependence { counts, family_a, family_b, truncation } => {
            run.read(&counts)?;
            run.read(&family_a)?;
            run.read(&family_b)?;
            let (cf, _) = load_count_table(&counts).map_err(load_err)?;
            let a = load_family(&family_a).map_err(load_err)?;
            let b = load_family(&family_b).map_err(load_err)?;
            let rep = verify_propagator_independence(&cf.table, &a, &b, &Truncation::new(truncation))
                .map_err(|e| e.to_string())?;
            let mut r = run.report("verify propagator-independence");
            r.field("truncation", truncation);
            bool_outcome(&mut r, rep.holds);
            r.payload = Some(format!(
                "difference:\n{}residual:\n{}",
                io::write_diagram_sum(&rep.difference),
                io::write_diagram_sum(&rep.residual)
            ));
            Ok(r)
        }
        VerifyCmd::HandleSlide { complex, propagator, source, target, value } => {
            run.read(&complex)?;
            let c = load_complex(&complex).map_err(load_err)?;
            let g = propagator_for(run, &c, propagator.as_ref())?;
            let (ds, is) = c.locate(&source).ok_or_else(|| format!("unknown generator {:?}", source))?;
            let (dt, it) = c.locate(&target).ok_or_else(|| format!("unknown generator {:?}", target))?;
            if ds != dt || is == it {
                return Err("a handle slide joins two distinct generators of the same index".into());
            }
            let value = parse_laurent(&value).map_err(|e| format!("--value: {}", e))?;
            let h = elementary(c.dims(), ds, is, it, value);
            let (c2, g2) = handle_slide(&c, &g, &h).map_err(|e| e.to_string())?;
            let identity = is_propagator(&c2, &g2);
            let diff = slide_difference_holds(&g, &g2, &h);
            let mut r = run.report("verify handle-slide");
            r.field("propagator_identity", identity).field("difference_identity", diff);
            bool_outcome(&mut r, identity && diff);
            r.payload = Some(format!("{}---\n{}", io::write_complex(&c2), io::write_propagator(&c2, &g2)));
            Ok(r)
        }
    }
}

fn generate(run: &mut Run, g: GenCmd) -> Result<RunReport, String> {
    match g {
        GenCmd::Complex { seed, sizes, degree_bound, propagator_out } => {
            let sizes: [usize; 4] = sizes.try_into().map_err(|_| "--sizes takes four counts".to_string())?;
            let (c, g) = random_acyclic_complex(seed, sizes, degree_bound).map_err(|e| e.to_string())?;
            let mut r = run.report("gen complex");
            r.outcome = "ok".into();
            r.field("seed", seed).field("sizes", format!("{:?}", sizes));
            if let Some(p) = propagator_out {
                std::fs::write(&p, io::write_propagator(&c, &g)).map_err(|e| format!("{}: {}", p.display(), e))?;
                r.field("propagator", p.display());
            }
            r.payload = Some(io::write_complex(&c));
            Ok(r)
        }
        GenCmd::Reversed { complex, propagator, propagator_out } => {
            run.read(&complex)?;
            let c = load_complex(&complex).map_err(load_err)?;
            let g = propagator_for(run, &c, propagator.as_ref())?;
            let (c2, g2) = reverse_complex(&c, &g);
            let mut r = run.report("gen reversed");
            r.outcome = "ok".into();
            if let Some(p) = propagator_out {
                std::fs::write(&p, io::write_propagator(&c2, g2.as_endo()))
                    .map_err(|e| format!("{}: {}", p.display(), e))?;
                r.field("propagator", p.display());
            }
            r.payload = Some(io::write_complex(&c2));
            Ok(r)
        }
        GenCmd::Graphs { k, seed, count } => {
            let blocks: Vec<String> = match seed {
                None => enumerate_trivalent_graphs(k)
                    .map_err(|e| e.to_string())?
                    .iter()
                    .map(|g| io::write_cgraph(g, None))
                    .collect(),
                Some(s) => {
                    if k == 0 {
                        return Err("k must be positive".into());
                    }
                    let mut rg = rng(s);
                    (0..count).map(|_| io::write_cgraph(&random::cgraph(&mut rg, k, None), None)).collect()
                }
            };
            let mut r = run.report("gen graphs");
            r.outcome = "ok".into();
            r.field("k", k).field("graphs", blocks.len());
            r.payload = Some(blocks.join("\n"));
            Ok(r)
        }
    }
}

/// Parses `args` (including the program name) and runs one command.
/// The environment variable `EQUIMORSE_REPORT=payload` prints only the
/// payload.
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return CliOutput {
                code,
                stdout: if code == 0 { e.to_string() } else { String::new() },
                stderr: if code == 0 { String::new() } else { e.to_string() },
            };
        }
    };
    let start = Instant::now();
    match execute(cli.cmd) {
        Ok(mut r) => {
            r.timing_ms = Some(start.elapsed().as_millis());
            let code = if r.outcome == "false" { 1 } else { 0 };
            let payload_only = std::env::var("EQUIMORSE_REPORT").is_ok_and(|v| v == "payload");
            let stdout = if payload_only { r.payload.clone().unwrap_or_default() } else { r.to_string() };
            CliOutput { code, stdout, stderr: String::new() }
        }
        Err(msg) => CliOutput { code: 2, stdout: String::new(), stderr: format!("error: {}\n", msg) },
    }
}
