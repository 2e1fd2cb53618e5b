//! Text formats. Every reader accepts `#` comments and blank lines and
//! reports failures with line numbers; every writer emits the canonical
//! form its reader maps back to the same object.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::algebra::parse::{parse_laurent, parse_multiweight, parse_ratfn};
use crate::algebra::{Matrix, MultiWeight, RatFn, UPoly, Q};
use crate::diagram::{CGraph, ColoredDiagram, DiagramSum, EdgeKind, Graph, SkeletonCode};
use crate::error::ParseError;
use crate::morse::{Endo, TwistedComplex, TOP};
use crate::trace::{AnomalyData, DegenerateCountTable, FlowCountTable, SignPattern};

/// Non-blank lines with comments removed, paired with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::at_line(line, msg)
}

/// Splits `key: value` at the first colon.
fn key_value(line: usize, s: &str) -> Result<(&str, &str), ParseError> {
    s.split_once(':')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| err(line, format!("expected `key: value`, found {:?}", s)))
}

fn bracket_index(line: usize, key: &str, name: &str) -> Result<usize, ParseError> {
    let inner = key
        .strip_prefix(name)
        .and_then(|r| r.strip_prefix('['))
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| err(line, format!("expected `{}[i]`, found {:?}", name, key)))?;
    let i: usize = inner.parse().map_err(|_| err(line, format!("bad index {:?}", inner)))?;
    Ok(i)
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || ",:@#{}=".contains(c))
}

fn parse_names(line: usize, v: &str) -> Result<Vec<String>, ParseError> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|n| {
            let n = n.trim();
            if valid_name(n) {
                Ok(n.to_string())
            } else {
                Err(err(line, format!("invalid generator name {:?}", n)))
            }
        })
        .collect()
}

fn write_matrix<R: crate::algebra::Ring + std::fmt::Display>(out: &mut String, m: &Matrix<R>) {
    if m.cols() == 0 {
        return;
    }
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "  {}", row.join(", "));
    }
}

/// Reads `rows` lines of `cols` comma-separated entries starting at `lines[*pos]`.
fn read_matrix<R: crate::algebra::Ring>(
    lines: &[(usize, &str)],
    pos: &mut usize,
    rows: usize,
    cols: usize,
    parse: impl Fn(&str) -> Result<R, ParseError>,
) -> Result<Matrix<R>, ParseError> {
    let mut data = Vec::with_capacity(rows);
    if cols > 0 {
        for _ in 0..rows {
            let Some(&(ln, l)) = lines.get(*pos) else {
                return Err(err(lines.last().map_or(0, |x| x.0), format!("expected {} matrix rows", rows)));
            };
            let row: Vec<R> =
                l.split(',').map(|x| parse(x.trim()).map_err(|e| e.in_line(ln))).collect::<Result<_, _>>()?;
            if row.len() != cols {
                return Err(err(ln, format!("expected {} entries, found {}", cols, row.len())));
            }
            data.push(row);
            *pos += 1;
        }
    } else {
        data = vec![Vec::new(); rows];
    }
    Ok(if rows == 0 { Matrix::zeros(0, cols) } else { Matrix::from_rows(data).expect("rows checked") })
}

fn write_generators(out: &mut String, gens: &[Vec<String>; 4]) {
    for (d, g) in gens.iter().enumerate() {
        if g.is_empty() {
            let _ = writeln!(out, "generators[{}]:", d);
        } else {
            let _ = writeln!(out, "generators[{}]: {}", d, g.join(", "));
        }
    }
}

/// Reads the four `generators[i]` lines.
fn read_generators(lines: &[(usize, &str)], pos: &mut usize) -> Result<[Vec<String>; 4], ParseError> {
    let mut gens: [Vec<String>; 4] = Default::default();
    for (d, slot) in gens.iter_mut().enumerate() {
        let &(ln, l) = lines.get(*pos).ok_or_else(|| err(0, format!("missing generators[{}]", d)))?;
        let (k, v) = key_value(ln, l)?;
        if bracket_index(ln, k, "generators")? != d {
            return Err(err(ln, format!("expected generators[{}]", d)));
        }
        *slot = parse_names(ln, v)?;
        *pos += 1;
    }
    Ok(gens)
}

fn expect_header(lines: &[(usize, &str)], pos: &mut usize, name: &str, i: usize) -> Result<(), ParseError> {
    let &(ln, l) =
        lines.get(*pos).ok_or_else(|| err(lines.last().map_or(0, |x| x.0), format!("missing {}[{}]", name, i)))?;
    let (k, v) = key_value(ln, l)?;
    if bracket_index(ln, k, name)? != i || !v.is_empty() {
        return Err(err(ln, format!("expected `{}[{}]:`", name, i)));
    }
    *pos += 1;
    Ok(())
}

fn expect_end(lines: &[(usize, &str)], pos: usize) -> Result<(), ParseError> {
    match lines.get(pos) {
        Some(&(ln, l)) => Err(err(ln, format!("unexpected line {:?}", l))),
        None => Ok(()),
    }
}

pub fn write_complex(c: &TwistedComplex) -> String {
    let mut out = String::new();
    write_generators(&mut out, c.all_generators());
    for d in 1..=TOP {
        let _ = writeln!(out, "boundary[{}]:", d);
        write_matrix(&mut out, c.boundary(d));
    }
    out
}

pub fn parse_complex(text: &str) -> Result<TwistedComplex, ParseError> {
    let lines = content_lines(text);
    let mut pos = 0;
    let gens = read_generators(&lines, &mut pos)?;
    let mut bs = Vec::new();
    for d in 1..=TOP {
        expect_header(&lines, &mut pos, "boundary", d)?;
        bs.push(read_matrix(&lines, &mut pos, gens[d - 1].len(), gens[d].len(), parse_laurent)?);
    }
    expect_end(&lines, pos)?;
    let boundary: [Matrix<_>; 3] = bs.try_into().expect("three boundaries");
    TwistedComplex::new(gens, boundary).map_err(|e| err(1, e.to_string()))
}

/// The generators of `c` followed by `g[i]:` blocks, `C_i -> C_{i+1}`.
pub fn write_propagator(c: &TwistedComplex, g: &Endo) -> String {
    let mut out = String::new();
    write_generators(&mut out, c.all_generators());
    for d in 0..TOP {
        let _ = writeln!(out, "g[{}]:", d);
        write_matrix(&mut out, g.block(d));
    }
    out
}

/// Returns the declared generators and the map; the caller checks them
/// against its complex.
pub fn parse_propagator(text: &str) -> Result<([Vec<String>; 4], Endo), ParseError> {
    let lines = content_lines(text);
    let mut pos = 0;
    let gens = read_generators(&lines, &mut pos)?;
    let dims: [usize; 4] = std::array::from_fn(|d| gens[d].len());
    let mut blocks = Vec::new();
    for d in 0..TOP {
        expect_header(&lines, &mut pos, "g", d)?;
        blocks.push(read_matrix(&lines, &mut pos, dims[d + 1], dims[d], parse_ratfn)?);
    }
    expect_end(&lines, pos)?;
    blocks.push(Matrix::zeros(0, dims[TOP]));
    let blocks: [Matrix<RatFn>; 4] = blocks.try_into().expect("four blocks");
    let g = Endo::from_blocks(dims, 1, blocks).map_err(|e| err(1, e.to_string()))?;
    Ok((gens, g))
}

fn write_slot(h: (usize, usize)) -> String {
    format!("{}.{}", h.0 + 1, h.1)
}

fn parse_slot(line: usize, s: &str, nv: usize) -> Result<(usize, usize), ParseError> {
    let (v, sl) = s.split_once('.').ok_or_else(|| err(line, format!("expected vertex.slot, found {:?}", s)))?;
    let v: usize = v.trim().parse().map_err(|_| err(line, format!("bad vertex {:?}", v)))?;
    let sl: usize = sl.trim().parse().map_err(|_| err(line, format!("bad slot {:?}", sl)))?;
    if v == 0 || v > nv {
        return Err(err(line, format!("vertex {} is outside 1..{}", v, nv)));
    }
    if sl > 2 {
        return Err(err(line, format!("slot {} is outside 0..2", sl)));
    }
    Ok((v - 1, sl))
}

/// Graph block: `k`, vertex lines, edge lines and optional color lines.
pub fn write_cgraph(g: &CGraph, colors: Option<&[RatFn]>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "k: {}", g.k());
    let gr = g.graph();
    for v in 0..gr.num_vertices() {
        let labels: Vec<String> = gr.slots(v).iter().map(|(e, _)| (e + 1).to_string()).collect();
        let _ = writeln!(out, "vertex {}: {}", v + 1, labels.join(" "));
    }
    for e in 0..g.num_edges() {
        match g.kind(e) {
            EdgeKind::Compact => {
                let _ = writeln!(
                    out,
                    "edge {}: compact {} {}",
                    e + 1,
                    write_slot(gr.ends(e)[0]),
                    write_slot(gr.ends(e)[1])
                );
            }
            EdgeKind::Separated { input, output } => {
                let _ = writeln!(
                    out,
                    "edge {}: separated in={}@{} out={}@{}",
                    e + 1,
                    write_slot(g.input_slot(e)),
                    input,
                    write_slot(g.output_slot(e)),
                    output
                );
            }
        }
    }
    if let Some(cs) = colors {
        for (e, c) in cs.iter().enumerate() {
            let _ = writeln!(out, "color {}: {}", e + 1, c);
        }
    }
    out
}

fn label(line: usize, s: &str, ne: usize) -> Result<usize, ParseError> {
    let l: usize = s.trim().parse().map_err(|_| err(line, format!("bad edge label {:?}", s)))?;
    if l == 0 || l > ne {
        return Err(err(line, format!("edge label {} is outside 1..{}", l, ne)));
    }
    Ok(l - 1)
}

fn parse_arc(line: usize, s: &str, prefix: &str, nv: usize) -> Result<((usize, usize), String), ParseError> {
    let body =
        s.strip_prefix(prefix).ok_or_else(|| err(line, format!("expected {}<vertex.slot>@<generator>", prefix)))?;
    let (slot, name) = body.split_once('@').ok_or_else(|| err(line, "missing @<generator>"))?;
    if !valid_name(name) {
        return Err(err(line, format!("invalid generator name {:?}", name)));
    }
    Ok((parse_slot(line, slot, nv)?, name.to_string()))
}

/// Parses the color lines `color <label>: <RatFn>` for `ne` edges; every
/// label must appear exactly once.
pub fn parse_colors(lines: &[(usize, &str)], ne: usize) -> Result<Vec<RatFn>, ParseError> {
    let mut colors: Vec<Option<RatFn>> = vec![None; ne];
    for &(ln, l) in lines {
        let (k, v) = key_value(ln, l)?;
        let lab = k.strip_prefix("color").ok_or_else(|| err(ln, format!("expected a color line, found {:?}", l)))?;
        let e = label(ln, lab, ne)?;
        if colors[e].is_some() {
            return Err(err(ln, format!("color {} given twice", e + 1)));
        }
        colors[e] = Some(parse_ratfn(v).map_err(|x| x.in_line(ln))?);
    }
    colors
        .into_iter()
        .enumerate()
        .map(|(e, c)| c.ok_or_else(|| err(lines.last().map_or(0, |x| x.0), format!("missing color {}", e + 1))))
        .collect()
}

pub fn parse_colors_text(text: &str, ne: usize) -> Result<Vec<RatFn>, ParseError> {
    parse_colors(&content_lines(text), ne)
}

pub(crate) fn parse_cgraph_lines(lines: &[(usize, &str)]) -> Result<(CGraph, Option<Vec<RatFn>>), ParseError> {
    let &(ln0, first) = lines.first().ok_or_else(|| err(0, "empty graph block"))?;
    let (k, v) = key_value(ln0, first)?;
    if k != "k" {
        return Err(err(ln0, "graph block must start with `k: <int>`"));
    }
    let kk: usize = v.parse().map_err(|_| err(ln0, format!("bad k {:?}", v)))?;
    if kk == 0 {
        return Err(err(ln0, "k must be positive"));
    }
    let (nv, ne) = (2 * kk, 3 * kk);
    let mut vertex_lines: Vec<Option<(usize, [usize; 3])>> = vec![None; nv];
    let mut edges: Vec<Option<([(usize, usize); 2], EdgeKind)>> = vec![None; ne];
    let mut color_lines = Vec::new();
    for &(ln, l) in &lines[1..] {
        let (key, val) = key_value(ln, l)?;
        if let Some(id) = key.strip_prefix("vertex") {
            let id: usize = id.trim().parse().map_err(|_| err(ln, format!("bad vertex id {:?}", id)))?;
            if id == 0 || id > nv {
                return Err(err(ln, format!("vertex {} is outside 1..{}", id, nv)));
            }
            let labs: Vec<&str> = val.split_whitespace().collect();
            if labs.len() != 3 {
                return Err(err(ln, format!("vertex {} lists {} half-edges, expected 3", id, labs.len())));
            }
            let mut t = [0; 3];
            for (i, s) in labs.iter().enumerate() {
                t[i] = label(ln, s, ne)?;
            }
            if vertex_lines[id - 1].replace((ln, t)).is_some() {
                return Err(err(ln, format!("vertex {} listed twice", id)));
            }
        } else if let Some(lab) = key.strip_prefix("edge") {
            let e = label(ln, lab, ne)?;
            let parts: Vec<&str> = val.split_whitespace().collect();
            let entry = match parts.as_slice() {
                ["compact", a, b] => ([parse_slot(ln, a, nv)?, parse_slot(ln, b, nv)?], EdgeKind::Compact),
                ["separated", i, o] => {
                    let (is, input) = parse_arc(ln, i, "in=", nv)?;
                    let (os, output) = parse_arc(ln, o, "out=", nv)?;
                    ([os, is], EdgeKind::Separated { input, output })
                }
                _ => return Err(err(ln, format!("malformed edge line {:?}", l))),
            };
            if edges[e].replace(entry).is_some() {
                return Err(err(ln, format!("edge {} listed twice", e + 1)));
            }
        } else if key.starts_with("color") {
            color_lines.push((ln, l));
        } else {
            return Err(err(ln, format!("unexpected line {:?}", l)));
        }
    }
    let last = lines.last().map_or(ln0, |x| x.0);
    let mut ends = Vec::with_capacity(ne);
    let mut kinds = Vec::with_capacity(ne);
    for (e, x) in edges.into_iter().enumerate() {
        let (pair, kind) =
            x.ok_or_else(|| err(last, format!("edge labels must be exactly 1..{}; {} is missing", ne, e + 1)))?;
        ends.push(pair);
        kinds.push(kind);
    }
    let graph = Graph::new(nv, ends).map_err(|e| err(last, e.to_string()))?;
    for (v, x) in vertex_lines.iter().enumerate() {
        let (ln, labs) = x.ok_or_else(|| err(last, format!("vertex {} has no vertex line", v + 1)))?;
        let actual = graph.slots(v).map(|(e, _)| e);
        if actual != labs {
            return Err(err(ln, format!("vertex {} disagrees with its edge attachments", v + 1)));
        }
    }
    let g = CGraph::new(graph, kinds).map_err(|e| err(last, e.to_string()))?;
    let colors = if color_lines.is_empty() { None } else { Some(parse_colors(&color_lines, ne)?) };
    Ok((g, colors))
}

pub fn parse_cgraph(text: &str) -> Result<(CGraph, Option<Vec<RatFn>>), ParseError> {
    parse_cgraph_lines(&content_lines(text))
}

/// One line per basis term, `<q> * graph{<code>} colors{<c1>, ...}`, or `0`.
pub fn write_diagram_sum(s: &DiagramSum) -> String {
    s.to_string()
}

fn parse_code(line: usize, s: &str) -> Result<SkeletonCode, ParseError> {
    let mut edges = Vec::new();
    for part in s.split_whitespace() {
        let (a, b) = part.split_once('-').ok_or_else(|| err(line, format!("bad code edge {:?}", part)))?;
        let a: usize = a.parse().map_err(|_| err(line, format!("bad code vertex {:?}", a)))?;
        let b: usize = b.parse().map_err(|_| err(line, format!("bad code vertex {:?}", b)))?;
        edges.push((a, b));
    }
    let nv = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    let code = SkeletonCode { nv, edges };
    let g = Graph::from_edge_list(nv, &code.edges).map_err(|e| err(line, e.to_string()))?;
    if g.code() != code {
        return Err(err(line, format!("graph code {:?} is not canonical", s)));
    }
    Ok(code)
}

struct DiagramLine {
    line: usize,
    q: Q,
    code: SkeletonCode,
    colors: Vec<RatFn>,
}

fn parse_diagram_line(line: usize, l: &str) -> Result<DiagramLine, ParseError> {
    let (q, rest) = l.split_once('*').ok_or_else(|| err(line, "expected `<rational> * graph{...} colors{...}`"))?;
    let q: Q = q.trim().parse().map_err(|_| err(line, format!("bad coefficient {:?}", q.trim())))?;
    let rest = rest.trim();
    let body = rest.strip_prefix("graph{").ok_or_else(|| err(line, "expected graph{...}"))?;
    let (code, rest) = body.split_once('}').ok_or_else(|| err(line, "unterminated graph{"))?;
    let code = parse_code(line, code)?;
    let colors = rest
        .trim()
        .strip_prefix("colors{")
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| err(line, "expected colors{...}"))?;
    let colors: Vec<RatFn> =
        colors.split(',').map(|c| parse_ratfn(c.trim()).map_err(|e| e.in_line(line))).collect::<Result<_, _>>()?;
    if colors.len() != code.edges.len() {
        return Err(err(line, format!("{} colors for {} edges", colors.len(), code.edges.len())));
    }
    Ok(DiagramLine { line, q, code, colors })
}

fn normalize_line(d: &DiagramLine) -> Result<DiagramSum, ParseError> {
    let cd = ColoredDiagram::new(d.code.representative(), d.colors.clone()).map_err(|e| err(d.line, e.to_string()))?;
    Ok(cd.normalize().scale(&d.q))
}

/// Lines of one skeleton that already spell out a normal-form part; `None`
/// sends them through full normalization.
fn canonical_part(lines: &[&DiagramLine]) -> Option<DiagramSum> {
    let first = lines.first()?;
    let levels: Vec<UPoly> = first.colors.iter().map(|c| c.den().clone()).collect();
    let mut num = MultiWeight::zero(levels.len());
    for d in lines {
        let mut x = Vec::with_capacity(levels.len());
        for (c, l) in d.colors.iter().zip(&levels) {
            let (a, e) = c.num().as_monomial()?;
            if c.den() != l || !a.is_one() {
                return None;
            }
            x.push(e);
        }
        if !num.coeff(&x).is_zero() || d.q.is_zero() {
            return None;
        }
        num.add_term(x, d.q.clone());
    }
    DiagramSum::from_canonical_part(&first.code, levels, num)
}

pub(crate) fn parse_diagram_lines(lines: &[(usize, &str)]) -> Result<DiagramSum, ParseError> {
    if let [(_, "0")] = lines {
        return Ok(DiagramSum::zero());
    }
    let parsed: Vec<DiagramLine> = lines.iter().map(|&(ln, l)| parse_diagram_line(ln, l)).collect::<Result<_, _>>()?;
    let mut groups: BTreeMap<&SkeletonCode, Vec<&DiagramLine>> = BTreeMap::new();
    for d in &parsed {
        groups.entry(&d.code).or_default().push(d);
    }
    let mut s = DiagramSum::zero();
    for group in groups.values() {
        let part = match canonical_part(group) {
            Some(p) => p,
            None => {
                group.iter().try_fold(DiagramSum::zero(), |acc, d| Ok::<_, ParseError>(acc.add(&normalize_line(d)?)))?
            }
        };
        s = s.add(&part);
    }
    Ok(s)
}

pub fn parse_diagram_sum(text: &str) -> Result<DiagramSum, ParseError> {
    parse_diagram_lines(&content_lines(text))
}

fn write_count_entries(out: &mut String, entries: &[(CGraph, MultiWeight)]) {
    for (g, w) in entries {
        out.push_str("count {\n");
        for l in write_cgraph(g, None).lines() {
            let _ = writeln!(out, "  {}", l);
        }
        let _ = writeln!(out, "}}: {}", w);
    }
}

/// Reads `count {` blocks and `count <path>: <weight>` references; `load`
/// returns the text of a referenced graph file.
fn read_count_entries(
    lines: &[(usize, &str)],
    mut pos: usize,
    load: &dyn Fn(&str) -> Result<String, ParseError>,
) -> Result<Vec<(CGraph, MultiWeight)>, ParseError> {
    let mut entries = Vec::new();
    while let Some(&(ln, l)) = lines.get(pos) {
        let rest = l
            .strip_prefix("count")
            .ok_or_else(|| err(ln, format!("expected a count entry, found {:?}", l)))?
            .trim_start();
        let (g, w) = if rest == "{" {
            let end = (pos + 1..lines.len())
                .find(|&i| lines[i].1.starts_with("}:"))
                .ok_or_else(|| err(ln, "unterminated count block"))?;
            let (g, colors) = parse_cgraph_lines(&lines[pos + 1..end])?;
            if colors.is_some() {
                return Err(err(ln, "count graphs carry weights, not colors"));
            }
            let (wl, wtext) = lines[end];
            pos = end + 1;
            let w = parse_multiweight(wtext[2..].trim(), g.num_edges()).map_err(|e| e.in_line(wl))?;
            (g, w)
        } else {
            let (path, w) = rest.rsplit_once(':').ok_or_else(|| err(ln, "expected `count <path>: <weight>`"))?;
            let (g, _) = parse_cgraph(&load(path.trim())?)
                .map_err(|e| ParseError { location: format!("{}, {}", path.trim(), e.location), msg: e.msg })?;
            pos += 1;
            let w = parse_multiweight(w.trim(), g.num_edges()).map_err(|e| e.in_line(ln))?;
            (g, w)
        };
        entries.push((g, w));
    }
    Ok(entries)
}

/// A count table together with the family file it refers to, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountFile {
    pub table: FlowCountTable,
    pub family: Option<String>,
}

pub fn write_count_table(c: &CountFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "k: {}", c.table.k);
    let _ = writeln!(out, "pattern: {}", c.table.pattern);
    if let Some(f) = &c.family {
        let _ = writeln!(out, "family: {}", f);
    }
    write_count_entries(&mut out, &c.table.entries);
    out
}

fn no_files(path: &str) -> Result<String, ParseError> {
    Err(ParseError { location: path.to_string(), msg: "graph file references are not available here".into() })
}

pub fn parse_count_table(text: &str) -> Result<CountFile, ParseError> {
    parse_count_table_with(text, &no_files)
}

pub fn parse_count_table_with(
    text: &str,
    load: &dyn Fn(&str) -> Result<String, ParseError>,
) -> Result<CountFile, ParseError> {
    let lines = content_lines(text);
    let &(ln, l) = lines.first().ok_or_else(|| err(0, "empty count table"))?;
    let (key, v) = key_value(ln, l)?;
    if key != "k" {
        return Err(err(ln, "count table must start with `k: <int>`"));
    }
    let k: usize = v.parse().map_err(|_| err(ln, format!("bad k {:?}", v)))?;
    let &(ln, l) = lines.get(1).ok_or_else(|| err(ln, "missing pattern line"))?;
    let (key, v) = key_value(ln, l)?;
    let pattern = match (key, SignPattern::parse(v)) {
        ("pattern", Some(p)) if p.len() == 3 * k => p,
        _ => return Err(err(ln, format!("expected `pattern:` with {} signs from + and -", 3 * k))),
    };
    let mut pos = 2;
    let mut family = None;
    if let Some(&(ln, l)) = lines.get(2) {
        if let Some(f) = l.strip_prefix("family:") {
            let f = f.trim();
            if f.is_empty() {
                return Err(err(ln, "empty family path"));
            }
            family = Some(f.to_string());
            pos = 3;
        }
    }
    let entries = read_count_entries(&lines, pos, load)?;
    for (i, (g, _)) in entries.iter().enumerate() {
        if g.k() != k {
            return Err(err(0, format!("count entry {} has k = {}, table has k = {}", i + 1, g.k(), k)));
        }
    }
    Ok(CountFile { table: FlowCountTable { k, pattern, entries }, family })
}

pub fn write_degenerate_table(w: &DegenerateCountTable) -> String {
    let mut out = String::from("degenerate\n");
    write_count_entries(&mut out, &w.entries);
    out
}

pub fn parse_degenerate_table(text: &str) -> Result<DegenerateCountTable, ParseError> {
    let lines = content_lines(text);
    match lines.first() {
        Some(&(_, "degenerate")) => {}
        Some(&(ln, _)) => return Err(err(ln, "degenerate table must start with `degenerate`")),
        None => return Err(err(0, "empty degenerate table")),
    }
    Ok(DegenerateCountTable { entries: read_count_entries(&lines, 1, &no_files)? })
}

/// `sign_W`, then `z_anomaly:` and optionally `mu_k:`, each followed by a
/// diagram sum.
pub fn write_anomaly(a: &AnomalyData) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "sign_W: {}", a.sign_w);
    out.push_str("z_anomaly:\n");
    for l in write_diagram_sum(&a.z_anom).lines() {
        let _ = writeln!(out, "  {}", l);
    }
    if let Some(mu) = &a.mu_k {
        out.push_str("mu_k:\n");
        for l in write_diagram_sum(mu).lines() {
            let _ = writeln!(out, "  {}", l);
        }
    }
    out
}

pub fn parse_anomaly(text: &str) -> Result<AnomalyData, ParseError> {
    let lines = content_lines(text);
    let &(ln, l) = lines.first().ok_or_else(|| err(0, "empty anomaly file"))?;
    let (k, v) = key_value(ln, l)?;
    if k != "sign_W" {
        return Err(err(ln, "anomaly file must start with `sign_W: <int>`"));
    }
    let sign_w: i64 = v.parse().map_err(|_| err(ln, format!("bad sign_W {:?}", v)))?;
    let z_at = match lines.get(1) {
        Some(&(_, "z_anomaly:")) => 1,
        Some(&(ln, _)) => return Err(err(ln, "expected `z_anomaly:`")),
        None => return Err(err(ln, "missing `z_anomaly:`")),
    };
    let mu_at = lines.iter().position(|&(_, l)| l == "mu_k:");
    let z_end = mu_at.unwrap_or(lines.len());
    let z_anom = parse_diagram_lines(&lines[z_at + 1..z_end])?;
    let mu_k = match mu_at {
        Some(i) => Some(parse_diagram_lines(&lines[i + 1..])?),
        None => None,
    };
    Ok(AnomalyData { z_anom, mu_k, sign_w })
}

/// Paths of the complex and optional propagator for each edge label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyManifest {
    pub entries: Vec<(String, Option<String>)>,
}

pub fn write_family(f: &FamilyManifest) -> String {
    let mut out = String::new();
    for (i, (c, g)) in f.entries.iter().enumerate() {
        let _ = writeln!(out, "complex {}: {}", i + 1, c);
        if let Some(g) = g {
            let _ = writeln!(out, "propagator {}: {}", i + 1, g);
        }
    }
    out
}

pub fn parse_family(text: &str) -> Result<FamilyManifest, ParseError> {
    let mut complexes: Vec<Option<String>> = Vec::new();
    let mut props: Vec<(usize, usize, String)> = Vec::new();
    for (ln, l) in content_lines(text) {
        let (k, v) = key_value(ln, l)?;
        if v.is_empty() {
            return Err(err(ln, "empty path"));
        }
        let (kind, idx) = k
            .split_once(' ')
            .ok_or_else(|| err(ln, format!("expected `complex <i>` or `propagator <i>`, found {:?}", k)))?;
        let i: usize = idx.trim().parse().map_err(|_| err(ln, format!("bad label {:?}", idx)))?;
        if i == 0 {
            return Err(err(ln, "labels start at 1"));
        }
        match kind {
            "complex" => {
                if complexes.len() < i {
                    complexes.resize(i, None);
                }
                if complexes[i - 1].replace(v.to_string()).is_some() {
                    return Err(err(ln, format!("complex {} given twice", i)));
                }
            }
            "propagator" => props.push((ln, i, v.to_string())),
            _ => return Err(err(ln, format!("unknown entry {:?}", kind))),
        }
    }
    let mut entries: Vec<(String, Option<String>)> = Vec::with_capacity(complexes.len());
    for (i, c) in complexes.into_iter().enumerate() {
        entries.push((c.ok_or_else(|| err(0, format!("complex {} is missing", i + 1)))?, None));
    }
    for (ln, i, p) in props {
        let slot = entries.get_mut(i - 1).ok_or_else(|| err(ln, format!("propagator {} has no complex", i)))?;
        if slot.1.replace(p).is_some() {
            return Err(err(ln, format!("propagator {} given twice", i)));
        }
    }
    Ok(FamilyManifest { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{random, random_acyclic_complex, rng};

    const COMPLEX: &str = "\
# the interval
generators[0]: q
generators[1]: p
generators[2]:
generators[3]:
boundary[1]:
  -1 + t
boundary[2]:
boundary[3]:
";

    #[test]
    fn complex_text() {
        let c = parse_complex(COMPLEX).unwrap();
        assert_eq!(c.dims(), [1, 1, 0, 0]);
        assert_eq!(write_complex(&c), COMPLEX.lines().skip(1).map(|l| format!("{}\n", l)).collect::<String>());
    }

    #[test]
    fn located_errors() {
        let bad = COMPLEX.replace("-1 + t", "-1 + t^");
        let e = parse_complex(&bad).unwrap_err();
        assert!(e.location.starts_with("line 7"), "{}", e);
        let e = parse_complex(&COMPLEX.replace("generators[2]:", "generators[5]:")).unwrap_err();
        assert_eq!(e.location, "line 4");
    }

    #[test]
    fn round_trips() {
        let mut r = rng(11);
        for seed in 0..10 {
            let (c, g) = random_acyclic_complex(seed, random::feasible_sizes(&mut r, 3), 2).unwrap();
            let text = write_complex(&c);
            assert_eq!(parse_complex(&text).unwrap(), c);
            let pt = write_propagator(&c, &g);
            let (gens, e) = parse_propagator(&pt).unwrap();
            assert_eq!((&gens, &e), (c.all_generators(), g.as_endo()));
            let cg = random::colored_cgraph(&mut r, 1 + seed as usize % 2, 2);
            let gt = write_cgraph(&cg.graph, Some(&cg.colors));
            assert_eq!(parse_cgraph(&gt).unwrap(), (cg.graph.clone(), Some(cg.colors.clone())));
            let s = random::diagram_sum(&mut r, 1, 2, 3);
            let st = write_diagram_sum(&s);
            let back = parse_diagram_sum(&st).unwrap();
            assert_eq!(back, s);
            assert_eq!(write_diagram_sum(&back), st);
            let t = CountFile { table: random::count_table(&mut r, 1, 2), family: Some("fam.txt".into()) };
            assert_eq!(parse_count_table(&write_count_table(&t)).unwrap(), t);
            let a = random::anomaly(&mut r, 1);
            assert_eq!(write_anomaly(&parse_anomaly(&write_anomaly(&a)).unwrap()), write_anomaly(&a));
        }
    }

    #[test]
    fn vertex_line_mismatch() {
        let text = "k: 1\nvertex 1: 1 2 3\nvertex 2: 2 1 3\nedge 1: compact 1.0 2.0\nedge 2: compact 1.1 2.1\nedge 3: compact 1.2 2.2\n";
        let e = parse_cgraph(text).unwrap_err();
        assert_eq!(e.location, "line 3");
        let gap = "k: 1\nvertex 1: 1 2 3\nvertex 2: 1 2 3\nedge 1: compact 1.0 2.0\nedge 2: compact 1.1 2.1\n";
        assert!(parse_cgraph(gap).unwrap_err().msg.contains("3 is missing"));
    }
}
