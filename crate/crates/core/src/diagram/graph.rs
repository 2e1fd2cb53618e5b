//! Vertex-oriented, edge-oriented trivalent multigraphs.
//!
//! Each vertex has three slots `0, 1, 2`; their cyclic order is the vertex
//! orientation. Edge `e` joins its tail half-edge `ends[e][0]` to its head
//! half-edge `ends[e][1]`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::GraphError;

/// `(vertex, slot)`.
pub type HalfEdge = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    nv: usize,
    ends: Vec<[HalfEdge; 2]>,
    /// `slots[v][s] = (edge, end)`.
    slots: Vec<[(usize, usize); 3]>,
}

/// Isomorphism class of the underlying unoriented multigraph: the smallest
/// sorted edge list over all vertex relabelings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SkeletonCode {
    pub nv: usize,
    pub edges: Vec<(usize, usize)>,
}

impl fmt::Display for SkeletonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|(a, b)| format!("{}-{}", a, b)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// An isomorphism `G -> H`, carrying vertex `v` to `vmap[v]` and edge `e` to
/// `emap[e]`, reversing the edge when `flip[e]`. `sign` is the product of the
/// parities of the induced slot permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iso {
    pub vmap: Vec<usize>,
    pub emap: Vec<usize>,
    pub flip: Vec<bool>,
    pub sign: i32,
}

fn parity3(p: [usize; 3]) -> i32 {
    let mut inv = 0;
    for i in 0..3 {
        for j in i + 1..3 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Graph {
    pub fn new(nv: usize, ends: Vec<[HalfEdge; 2]>) -> Result<Self, GraphError> {
        let mut slots: Vec<[Option<(usize, usize)>; 3]> = vec![[None; 3]; nv];
        for (e, pair) in ends.iter().enumerate() {
            for (end, &(v, s)) in pair.iter().enumerate() {
                if v >= nv {
                    return Err(GraphError::VertexRange(v));
                }
                if s >= 3 || slots[v][s].is_some() {
                    return Err(GraphError::SlotReused { vertex: v, slot: s });
                }
                slots[v][s] = Some((e, end));
            }
        }
        let mut full = Vec::with_capacity(nv);
        for (v, sl) in slots.iter().enumerate() {
            let found = sl.iter().filter(|x| x.is_some()).count();
            if found != 3 {
                return Err(GraphError::NotTrivalent { vertex: v, found });
            }
            full.push([sl[0].unwrap(), sl[1].unwrap(), sl[2].unwrap()]);
        }
        Ok(Graph { nv, ends, slots: full })
    }

    /// Builds a graph from oriented edges `(tail, head)`, filling each
    /// vertex's slots in order of `(edge index, end)`.
    pub fn from_edge_list(nv: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut next = vec![0usize; nv];
        let mut ends = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            let mut pair = [(0, 0); 2];
            for (end, v) in [a, b].into_iter().enumerate() {
                if v >= nv {
                    return Err(GraphError::VertexRange(v));
                }
                if next[v] >= 3 {
                    return Err(GraphError::NotTrivalent { vertex: v, found: next[v] + 1 });
                }
                pair[end] = (v, next[v]);
                next[v] += 1;
            }
            ends.push(pair);
        }
        Graph::new(nv, ends)
    }

    pub fn num_vertices(&self) -> usize {
        self.nv
    }

    pub fn num_edges(&self) -> usize {
        self.ends.len()
    }

    pub fn ends(&self, e: usize) -> [HalfEdge; 2] {
        self.ends[e]
    }

    pub fn all_ends(&self) -> &[[HalfEdge; 2]] {
        &self.ends
    }

    pub fn tail(&self, e: usize) -> usize {
        self.ends[e][0].0
    }

    pub fn head(&self, e: usize) -> usize {
        self.ends[e][1].0
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.tail(e) == self.head(e)
    }

    /// `(edge, end)` occupying each slot of `v`.
    pub fn slots(&self, v: usize) -> [(usize, usize); 3] {
        self.slots[v]
    }

    /// Multiplicity matrix; a loop counts once on the diagonal.
    fn adjacency(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.nv]; self.nv];
        for e in 0..self.ends.len() {
            let (a, b) = (self.tail(e), self.head(e));
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        m
    }

    fn relabeled_edges(&self, p: &[usize]) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = (0..self.ends.len())
            .map(|e| {
                let (a, b) = (p[self.tail(e)], p[self.head(e)]);
                (a.min(b), a.max(b))
            })
            .collect();
        v.sort_unstable();
        v
    }

    pub fn code(&self) -> SkeletonCode {
        let mut best: Option<Vec<(usize, usize)>> = None;
        for_each_permutation(self.nv, &mut |p| {
            let v = self.relabeled_edges(p);
            if best.as_ref().map_or(true, |b| v < *b) {
                best = Some(v);
            }
        });
        SkeletonCode { nv: self.nv, edges: best.unwrap_or_default() }
    }

    pub fn is_connected(&self) -> bool {
        self.nv == 0 || self.components().iter().all(|&c| c == 0)
    }

    /// Component index of every vertex, numbered in order of smallest vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.nv];
        let mut n = 0;
        for s in 0..self.nv {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = n;
            while let Some(v) = stack.pop() {
                for (e, _) in self.slots[v] {
                    for w in [self.tail(e), self.head(e)] {
                        if comp[w] == usize::MAX {
                            comp[w] = n;
                            stack.push(w);
                        }
                    }
                }
            }
            n += 1;
        }
        comp
    }

    /// Edges whose removal increases the number of components.
    pub fn bridges(&self) -> Vec<usize> {
        let base = self.components().into_iter().max().map_or(0, |m| m + 1);
        (0..self.ends.len())
            .filter(|&e| !self.is_loop(e))
            .filter(|&e| {
                let mut comp = vec![usize::MAX; self.nv];
                let mut n = 0;
                for s in 0..self.nv {
                    if comp[s] != usize::MAX {
                        continue;
                    }
                    let mut stack = vec![s];
                    comp[s] = n;
                    while let Some(v) = stack.pop() {
                        for (f, _) in self.slots[v] {
                            if f == e {
                                continue;
                            }
                            for w in [self.tail(f), self.head(f)] {
                                if comp[w] == usize::MAX {
                                    comp[w] = n;
                                    stack.push(w);
                                }
                            }
                        }
                    }
                    n += 1;
                }
                n > base
            })
            .collect()
    }

    /// Breadth-first spanning forest: every non-root vertex, in visiting
    /// order, with the edge to its parent. Roots are the smallest vertex of
    /// each component; edges are scanned in index order.
    pub fn spanning_forest(&self) -> Vec<(usize, usize)> {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.nv];
        for e in 0..self.ends.len() {
            if !self.is_loop(e) {
                incident[self.tail(e)].push(e);
                incident[self.head(e)].push(e);
            }
        }
        let mut seen = vec![false; self.nv];
        let mut out = Vec::new();
        for root in 0..self.nv {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &e in &incident[v] {
                    let w = if self.tail(e) == v { self.head(e) } else { self.tail(e) };
                    if !seen[w] {
                        seen[w] = true;
                        out.push((w, e));
                        queue.push_back(w);
                    }
                }
            }
        }
        out
    }

    /// All isomorphisms `self -> other` of vertex-oriented graphs up to the
    /// orientation data recorded in [`Iso`].
    pub fn isomorphisms(&self, other: &Graph) -> Vec<Iso> {
        let mut out = Vec::new();
        self.search_isos(other, &mut |iso| {
            out.push(iso);
            true
        });
        out
    }

    pub fn first_isomorphism(&self, other: &Graph) -> Option<Iso> {
        let mut found = None;
        self.search_isos(other, &mut |iso| {
            found = Some(iso);
            false
        });
        found
    }

    /// Calls `f` on isomorphisms until it returns `false`.
    fn search_isos(&self, other: &Graph, f: &mut dyn FnMut(Iso) -> bool) {
        if self.nv != other.nv || self.ends.len() != other.ends.len() {
            return;
        }
        let a = self.adjacency();
        let b = other.adjacency();
        let n = self.nv;
        let mut vmap = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let mut go = true;
        self.assign_vertex(0, &a, &b, &mut vmap, &mut used, other, f, &mut go);
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_vertex(
        &self,
        i: usize,
        a: &[Vec<u8>],
        b: &[Vec<u8>],
        vmap: &mut Vec<usize>,
        used: &mut Vec<bool>,
        other: &Graph,
        f: &mut dyn FnMut(Iso) -> bool,
        go: &mut bool,
    ) {
        if !*go {
            return;
        }
        if i == self.nv {
            self.expand_edges(vmap, other, f, go);
            return;
        }
        for w in 0..self.nv {
            if used[w] {
                continue;
            }
            let ok = (0..=i).all(|j| {
                let wj = if j == i { w } else { vmap[j] };
                a[i][j] == b[w][wj]
            });
            if !ok {
                continue;
            }
            vmap[i] = w;
            used[w] = true;
            self.assign_vertex(i + 1, a, b, vmap, used, other, f, go);
            used[w] = false;
            vmap[i] = usize::MAX;
            if !*go {
                return;
            }
        }
    }

    /// Enumerates edge bijections compatible with `vmap`: permutations of
    /// each parallel class, and both orientations of each loop.
    fn expand_edges(&self, vmap: &[usize], other: &Graph, f: &mut dyn FnMut(Iso) -> bool, go: &mut bool) {
        let key = |g: &Graph, e: usize, m: Option<&[usize]>| {
            let (x, y) = match m {
                Some(m) => (m[g.tail(e)], m[g.head(e)]),
                None => (g.tail(e), g.head(e)),
            };
            (x.min(y), x.max(y))
        };
        let mut classes: HashMap<(usize, usize), (Vec<usize>, Vec<usize>)> = HashMap::new();
        for e in 0..self.ends.len() {
            classes.entry(key(self, e, Some(vmap))).or_default().0.push(e);
        }
        for e in 0..other.ends.len() {
            classes.entry(key(other, e, None)).or_default().1.push(e);
        }
        let mut groups: Vec<(Vec<usize>, Vec<usize>)> = classes.into_values().collect();
        groups.sort();
        let ne = self.ends.len();
        let mut emap = vec![usize::MAX; ne];
        let mut flip = vec![false; ne];
        self.expand_group(0, &groups, vmap, other, &mut emap, &mut flip, f, go);
    }

    #[allow(clippy::too_many_arguments)]
    fn expand_group(
        &self,
        gi: usize,
        groups: &[(Vec<usize>, Vec<usize>)],
        vmap: &[usize],
        other: &Graph,
        emap: &mut Vec<usize>,
        flip: &mut Vec<bool>,
        f: &mut dyn FnMut(Iso) -> bool,
        go: &mut bool,
    ) {
        if !*go {
            return;
        }
        if gi == groups.len() {
            let sign = self.iso_sign(vmap, emap, flip, other);
            *go = f(Iso { vmap: vmap.to_vec(), emap: emap.clone(), flip: flip.clone(), sign });
            return;
        }
        let (src, dst) = &groups[gi];
        if src.len() != dst.len() {
            return;
        }
        let mut order: Vec<usize> = dst.clone();
        permutations_of(&mut order, 0, &mut |perm| {
            if !*go {
                return;
            }
            for (k, &e) in src.iter().enumerate() {
                emap[e] = perm[k];
            }
            let loops: Vec<usize> = src.iter().copied().filter(|&e| self.is_loop(e)).collect();
            let fixed: Vec<usize> = src.iter().copied().filter(|&e| !self.is_loop(e)).collect();
            for &e in &fixed {
                flip[e] = other.tail(emap[e]) != vmap[self.tail(e)];
            }
            let nl = loops.len();
            for mask in 0..(1u32 << nl) {
                for (j, &e) in loops.iter().enumerate() {
                    flip[e] = mask >> j & 1 == 1;
                }
                self.expand_group(gi + 1, groups, vmap, other, emap, flip, f, go);
                if !*go {
                    return;
                }
            }
        });
    }

    fn iso_sign(&self, vmap: &[usize], emap: &[usize], flip: &[bool], other: &Graph) -> i32 {
        let mut sign = 1;
        for v in 0..self.nv {
            let mut p = [0usize; 3];
            for (s, &(e, end)) in self.slots[v].iter().enumerate() {
                let end2 = if flip[e] { 1 - end } else { end };
                let (w, s2) = other.ends[emap[e]][end2];
                debug_assert_eq!(w, vmap[v]);
                p[s] = s2;
            }
            sign *= parity3(p);
        }
        sign
    }

    /// The graph with vertices renamed by `vmap` and edges by `emap`.
    pub fn relabel(&self, vmap: &[usize], emap: &[usize]) -> Graph {
        let mut ends = vec![[(0, 0); 2]; self.ends.len()];
        for (e, pair) in self.ends.iter().enumerate() {
            ends[emap[e]] = [(vmap[pair[0].0], pair[0].1), (vmap[pair[1].0], pair[1].1)];
        }
        Graph::new(self.nv, ends).expect("relabeling preserves trivalence")
    }

    /// Reverses edge `e` without touching colors.
    pub fn reversed_edge(&self, e: usize) -> Graph {
        let mut ends = self.ends.clone();
        ends[e].swap(0, 1);
        Graph::new(self.nv, ends).expect("reversal preserves trivalence")
    }

    /// Exchanges two slots at `v`, reversing its orientation.
    pub fn swapped_slots(&self, v: usize, a: usize, b: usize) -> Graph {
        let mut ends = self.ends.clone();
        for pair in ends.iter_mut() {
            for h in pair.iter_mut() {
                if h.0 == v && h.1 == a {
                    h.1 = b;
                } else if h.0 == v && h.1 == b {
                    h.1 = a;
                }
            }
        }
        Graph::new(self.nv, ends).expect("slot swap preserves trivalence")
    }
}

/// Visits every permutation of `0..n` (as a map `i -> p[i]`).
pub(crate) fn for_each_permutation(n: usize, f: &mut dyn FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    permutations_of(&mut p, 0, &mut |q| f(q));
}

fn permutations_of(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations_of(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Representative graph, automorphisms and gauge data of one skeleton.
#[derive(Debug)]
pub struct Skeleton {
    pub code: SkeletonCode,
    pub rep: Graph,
    pub auts: Vec<Iso>,
    pub bridged: bool,
    pub forest: Vec<(usize, usize)>,
    /// Orbit index of every edge under the automorphism group.
    pub edge_orbit: Vec<usize>,
}

impl SkeletonCode {
    /// Vertices `0..nv`, edges in code order oriented from the smaller
    /// endpoint, slots filled in order of `(edge index, end)`.
    pub fn representative(&self) -> Graph {
        Graph::from_edge_list(self.nv, &self.edges).expect("codes describe trivalent graphs")
    }
}

/// Cached skeleton data for `code`.
pub fn skeleton(code: &SkeletonCode) -> Arc<Skeleton> {
    static CACHE: OnceLock<Mutex<HashMap<SkeletonCode, Arc<Skeleton>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().unwrap().get(code) {
        return s.clone();
    }
    let rep = code.representative();
    let auts = rep.isomorphisms(&rep);
    let ne = rep.num_edges();
    let mut edge_orbit: Vec<usize> = (0..ne).collect();
    // union-find over automorphism images
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for a in &auts {
        for e in 0..ne {
            let (x, y) = (find(&mut edge_orbit, e), find(&mut edge_orbit, a.emap[e]));
            if x != y {
                edge_orbit[x.max(y)] = x.min(y);
            }
        }
    }
    for e in 0..ne {
        edge_orbit[e] = find(&mut edge_orbit, e);
    }
    let s = Arc::new(Skeleton {
        code: code.clone(),
        bridged: !rep.bridges().is_empty(),
        forest: rep.spanning_forest(),
        rep,
        auts,
        edge_orbit,
    });
    cache.lock().unwrap().insert(code.clone(), s.clone());
    s
}

/// Every connected trivalent multigraph with `2k` vertices (loops and
/// multiple edges allowed), one per isomorphism class, sorted by code.
pub fn all_skeletons(k: usize) -> Result<Vec<SkeletonCode>, GraphError> {
    if k == 0 || k > 3 {
        return Err(GraphError::TooLarge(k));
    }
    let nv = 2 * k;
    let mut deg = vec![0usize; nv];
    let mut edges = Vec::new();
    let mut found = std::collections::BTreeSet::new();
    grow(nv, &mut deg, &mut edges, &mut found);
    Ok(found.into_iter().collect())
}

/// Adds edges as a sorted list `(a, b)`, `a <= b`; the first unsaturated
/// vertex is always the next `a`, so every edge multiset is produced once.
fn grow(
    nv: usize,
    deg: &mut Vec<usize>,
    edges: &mut Vec<(usize, usize)>,
    found: &mut std::collections::BTreeSet<SkeletonCode>,
) {
    let Some(a) = (0..nv).find(|&v| deg[v] < 3) else {
        let g = Graph::from_edge_list(nv, edges).expect("degrees are 3");
        if g.is_connected() {
            found.insert(g.code());
        }
        return;
    };
    let start = match edges.last() {
        Some(&(x, y)) if x == a => y,
        _ => a,
    };
    for b in start..nv {
        let fits = if a == b { deg[a] + 2 <= 3 } else { deg[b] < 3 };
        if !fits {
            continue;
        }
        deg[a] += 1;
        deg[b] += 1;
        edges.push((a, b));
        grow(nv, deg, edges, found);
        edges.pop();
        deg[a] -= 1;
        deg[b] -= 1;
    }
}
