//! Directed multigraphs with named vertices and arcs.
//!
//! Vertices and arcs are addressed by dense indices internally; ids are kept
//! for serialization and for the canonical composite names of derived graphs.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

pub type Matrix = Array2<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcData {
    pub id: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<String>,
    arcs: Vec<ArcData>,
    vindex: HashMap<String, usize>,
    aindex: HashMap<String, usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arcs == other.arcs
    }
}

impl Eq for Graph {}

/// A path given by its initial vertex and its arcs; length 0 paths are vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub arcs: Vec<usize>,
}

impl Path {
    pub fn vertex(v: usize) -> Self {
        Path { start: v, arcs: Vec::new() }
    }

    pub fn from_arcs(g: &Graph, arcs: Vec<usize>) -> Self {
        assert!(!arcs.is_empty());
        Path { start: g.source(arcs[0]), arcs }
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn end(&self, g: &Graph) -> usize {
        match self.arcs.last() {
            Some(&a) => g.target(a),
            None => self.start,
        }
    }

    /// Subpath starting after `pos` arcs, of `len` arcs.
    pub fn sub(&self, g: &Graph, pos: usize, len: usize) -> Path {
        let arcs = self.arcs[pos..pos + len].to_vec();
        if arcs.is_empty() {
            let v = if pos == 0 { self.start } else { g.target(self.arcs[pos - 1]) };
            Path::vertex(v)
        } else {
            Path::from_arcs(g, arcs)
        }
    }

    pub fn id(&self, g: &Graph) -> String {
        if self.arcs.is_empty() {
            g.vertex_id(self.start).to_string()
        } else {
            join_ids(self.arcs.iter().map(|&a| g.arc_id(a)))
        }
    }
}

/// Canonical name of a word: plain concatenation when every part is a single
/// character, otherwise parts joined with `~`.
pub fn join_ids<I, S>(parts: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let parts: Vec<S> = parts.into_iter().collect();
    if parts.iter().all(|p| p.as_ref().chars().count() == 1) {
        parts.iter().map(|p| p.as_ref()).collect()
    } else {
        parts.iter().map(|p| p.as_ref()).collect::<Vec<_>>().join("~")
    }
}

/// Canonical name of a finite set: sorted members in braces.
pub fn set_id<I, S>(members: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut v: Vec<String> = members.into_iter().map(|s| s.as_ref().to_string()).collect();
    v.sort();
    format!("{{{}}}", v.join(","))
}

pub fn pair_id(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

impl Graph {
    pub fn new(vertices: Vec<String>, arcs: Vec<(String, usize, usize)>) -> Result<Self> {
        let mut vindex = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i).is_some() {
                return input(format!("duplicate vertex id {v:?}"));
            }
        }
        let mut aindex = HashMap::with_capacity(arcs.len());
        let mut out = vec![Vec::new(); vertices.len()];
        let mut inc = vec![Vec::new(); vertices.len()];
        let mut data = Vec::with_capacity(arcs.len());
        for (i, (id, from, to)) in arcs.into_iter().enumerate() {
            if from >= vertices.len() || to >= vertices.len() {
                return input(format!("arc {id:?} has an undeclared endpoint"));
            }
            if aindex.insert(id.clone(), i).is_some() {
                return input(format!("duplicate arc id {id:?}"));
            }
            out[from].push(i);
            inc[to].push(i);
            data.push(ArcData { id, from, to });
        }
        Ok(Graph { vertices, arcs: data, vindex, aindex, out, inc })
    }

    pub fn from_named(vertices: &[&str], arcs: &[(&str, &str, &str)]) -> Result<Self> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let idx: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut list = Vec::new();
        for (id, from, to) in arcs {
            let (Some(&f), Some(&t)) = (idx.get(from), idx.get(to)) else {
                return input(format!("arc {id:?} has an undeclared endpoint"));
            };
            list.push((id.to_string(), f, t));
        }
        Graph::new(vs, list)
    }

    /// One-vertex graph with one loop per symbol.
    pub fn full_shift<S: AsRef<str>>(alphabet: &[S]) -> Result<Self> {
        Graph::new(
            vec!["v".to_string()],
            alphabet.iter().map(|a| (a.as_ref().to_string(), 0, 0)).collect(),
        )
    }

    pub fn empty() -> Self {
        Graph::new(Vec::new(), Vec::new()).unwrap()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn arc_id(&self, a: usize) -> &str {
        &self.arcs[a].id
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[ArcData] {
        &self.arcs
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vindex.get(id).copied()
    }

    pub fn arc_index(&self, id: &str) -> Option<usize> {
        self.aindex.get(id).copied()
    }

    pub fn source(&self, a: usize) -> usize {
        self.arcs[a].from
    }

    pub fn target(&self, a: usize) -> usize {
        self.arcs[a].to
    }

    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_nondegenerate(&self) -> bool {
        (0..self.num_vertices()).all(|v| !self.out[v].is_empty() && !self.inc[v].is_empty())
    }

    pub fn is_full_shift(&self) -> bool {
        self.num_vertices() == 1
    }

    pub fn is_path(&self, arcs: &[usize]) -> bool {
        arcs.windows(2).all(|w| self.target(w[0]) == self.source(w[1]))
    }

    /// Same ids with every arc reversed.
    pub fn reversed(&self) -> Graph {
        let arcs = self.arcs.iter().map(|a| (a.id.clone(), a.to, a.from)).collect();
        Graph::new(self.vertices.clone(), arcs).unwrap()
    }

    /// Induced subgraph on the kept vertices and arcs, preserving order and ids.
    pub fn subgraph(&self, keep_v: &[bool], keep_a: &[bool]) -> Graph {
        let mut remap = vec![usize::MAX; self.num_vertices()];
        let mut vs = Vec::new();
        for (v, &k) in keep_v.iter().enumerate() {
            if k {
                remap[v] = vs.len();
                vs.push(self.vertices[v].clone());
            }
        }
        let arcs = self
            .arcs
            .iter()
            .enumerate()
            .filter(|(a, d)| keep_a[*a] && keep_v[d.from] && keep_v[d.to])
            .map(|(_, d)| (d.id.clone(), remap[d.from], remap[d.to]))
            .collect();
        Graph::new(vs, arcs).unwrap()
    }

    /// Masks of the vertices and arcs that lie on bi-infinite paths.
    pub fn trim_masks(&self) -> (Vec<bool>, Vec<bool>) {
        let nv = self.num_vertices();
        let mut alive_v = vec![true; nv];
        let mut alive_a = vec![true; self.num_arcs()];
        let mut indeg: Vec<usize> = (0..nv).map(|v| self.inc[v].len()).collect();
        let mut outdeg: Vec<usize> = (0..nv).map(|v| self.out[v].len()).collect();
        let mut stack: Vec<usize> = (0..nv).filter(|&v| indeg[v] == 0 || outdeg[v] == 0).collect();
        while let Some(v) = stack.pop() {
            if !alive_v[v] {
                continue;
            }
            alive_v[v] = false;
            for &a in &self.out[v] {
                if alive_a[a] {
                    alive_a[a] = false;
                    let w = self.target(a);
                    indeg[w] -= 1;
                    if indeg[w] == 0 && alive_v[w] {
                        stack.push(w);
                    }
                }
            }
            for &a in &self.inc[v] {
                if alive_a[a] {
                    alive_a[a] = false;
                    let w = self.source(a);
                    outdeg[w] -= 1;
                    if outdeg[w] == 0 && alive_v[w] {
                        stack.push(w);
                    }
                }
            }
        }
        (alive_v, alive_a)
    }

    /// Maximal nondegenerate subgraph.
    pub fn trim(&self) -> Graph {
        let (kv, ka) = self.trim_masks();
        self.subgraph(&kv, &ka)
    }

    /// Strongly connected components as lists of vertex indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut pg = petgraph::Graph::<(), ()>::with_capacity(self.num_vertices(), self.num_arcs());
        let nodes: Vec<_> = (0..self.num_vertices()).map(|_| pg.add_node(())).collect();
        for a in &self.arcs {
            pg.add_edge(nodes[a.from], nodes[a.to], ());
        }
        petgraph::algo::tarjan_scc(&pg)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                c.sort_unstable();
                c
            })
            .collect()
    }

    /// Nonempty, nondegenerate and strongly connected after trimming.
    pub fn is_irreducible(&self) -> bool {
        let t = self.trim();
        !t.is_empty() && t.components().len() == 1
    }

    pub fn adjacency(&self) -> Matrix {
        let n = self.num_vertices();
        let mut m = Matrix::zeros((n, n));
        for a in &self.arcs {
            m[[a.from, a.to]] += 1;
        }
        m
    }

    /// V×A matrix with a 1 where the vertex is the initial vertex of the arc.
    pub fn incidence_left(&self) -> Matrix {
        let mut m = Matrix::zeros((self.num_vertices(), self.num_arcs()));
        for (i, a) in self.arcs.iter().enumerate() {
            m[[a.from, i]] = 1;
        }
        m
    }

    /// A×V matrix with a 1 where the vertex is the terminal vertex of the arc.
    pub fn incidence_right(&self) -> Matrix {
        let mut m = Matrix::zeros((self.num_arcs(), self.num_vertices()));
        for (i, a) in self.arcs.iter().enumerate() {
            m[[i, a.to]] = 1;
        }
        m
    }

    /// All paths of the given length in lexicographic arc order.
    pub fn paths(&self, len: usize) -> Vec<Path> {
        if len == 0 {
            return (0..self.num_vertices()).map(Path::vertex).collect();
        }
        let mut result = Vec::new();
        let mut cur = Vec::with_capacity(len);
        for a in 0..self.num_arcs() {
            cur.push(a);
            self.extend_paths(&mut cur, len, &mut result);
            cur.pop();
        }
        result
    }

    fn extend_paths(&self, cur: &mut Vec<usize>, len: usize, result: &mut Vec<Path>) {
        if cur.len() == len {
            result.push(Path::from_arcs(self, cur.clone()));
            return;
        }
        let last = *cur.last().unwrap();
        for &a in &self.out[self.target(last)] {
            cur.push(a);
            self.extend_paths(cur, len, result);
            cur.pop();
        }
    }

    /// Closed paths of the given positive length, i.e. periodic points listed
    /// by one period starting at every phase.
    pub fn closed_paths(&self, len: usize) -> Vec<Vec<usize>> {
        assert!(len > 0);
        self.paths(len)
            .into_iter()
            .filter(|p| p.end(self) == p.start)
            .map(|p| p.arcs)
            .collect()
    }

    pub fn to_dot(&self, name: &str) -> String {
        self.to_dot_labeled(name, |_| None)
    }

    /// Graphviz text; `label` may attach an extra label to each arc.
    pub fn to_dot_labeled(&self, name: &str, label: impl Fn(usize) -> Option<String>) -> String {
        let mut s = String::new();
        writeln!(s, "digraph {} {{", dot_quote(name)).unwrap();
        for v in &self.vertices {
            writeln!(s, "  {};", dot_quote(v)).unwrap();
        }
        for (i, a) in self.arcs.iter().enumerate() {
            let text = match label(i) {
                Some(l) => format!("{} / {}", a.id, l),
                None => a.id.clone(),
            };
            writeln!(
                s,
                "  {} -> {} [label={}];",
                dot_quote(&self.vertices[a.from]),
                dot_quote(&self.vertices[a.to]),
                dot_quote(&text)
            )
            .unwrap();
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson::Explicit {
            vertices: self.vertices.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|a| ArcJson {
                    id: a.id.clone(),
                    from: self.vertices[a.from].clone(),
                    to: self.vertices[a.to].clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Self> {
        match j {
            GraphJson::Full { full_alphabet } => {
                if full_alphabet.is_empty() {
                    return input("empty alphabet");
                }
                Graph::full_shift(full_alphabet)
            }
            GraphJson::Explicit { vertices, arcs } => {
                let idx: HashMap<&str, usize> =
                    vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
                let mut list = Vec::with_capacity(arcs.len());
                for a in arcs {
                    let (Some(&f), Some(&t)) = (idx.get(a.from.as_str()), idx.get(a.to.as_str()))
                    else {
                        return input(format!("arc {:?} has an undeclared endpoint", a.id));
                    };
                    list.push((a.id.clone(), f, t));
                }
                Graph::new(vertices.clone(), list)
            }
        }
    }

    /// Ids must not contain the path separator used by rule tables.
    pub fn check_ids(&self) -> Result<()> {
        for id in self.vertices.iter().chain(self.arcs.iter().map(|a| &a.id)) {
            if id.is_empty() || id.contains('.') {
                return input(format!("id {id:?} is empty or contains '.'"));
            }
        }
        Ok(())
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArcJson {
    pub id: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum GraphJson {
    Full { full_alphabet: Vec<String> },
    Explicit { vertices: Vec<String>, arcs: Vec<ArcJson> },
}

/// The higher-block graph together with the words naming its arcs and vertices.
#[derive(Clone, Debug)]
pub struct HigherBlock {
    pub graph: Graph,
    pub order: usize,
    pub arc_words: Vec<Path>,
    pub vertex_words: Vec<Path>,
    arc_lookup: HashMap<Vec<usize>, usize>,
    vertex_lookup: HashMap<Path, usize>,
}

impl HigherBlock {
    pub fn arc_of(&self, word: &[usize]) -> Option<usize> {
        self.arc_lookup.get(word).copied()
    }

    pub fn vertex_of(&self, word: &Path) -> Option<usize> {
        self.vertex_lookup.get(word).copied()
    }
}

/// G^[n]: arcs are the paths of length n, vertices the paths of length n-1.
pub fn higher_block(g: &Graph, n: usize) -> Result<HigherBlock> {
    if n == 0 {
        return input("higher block order must be positive");
    }
    if !g.is_nondegenerate() {
        return input("higher block graph needs a nondegenerate graph");
    }
    let arc_words = g.paths(n);
    let vertex_words = g.paths(n - 1);
    let vertex_lookup: HashMap<Path, usize> =
        vertex_words.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let mut arcs = Vec::with_capacity(arc_words.len());
    for w in &arc_words {
        let from = vertex_lookup[&w.sub(g, 0, n - 1)];
        let to = vertex_lookup[&w.sub(g, 1, n - 1)];
        arcs.push((w.id(g), from, to));
    }
    let vertices = vertex_words.iter().map(|p| p.id(g)).collect();
    let graph = Graph::new(vertices, arcs)?;
    let arc_lookup = arc_words.iter().enumerate().map(|(i, p)| (p.arcs.clone(), i)).collect();
    Ok(HigherBlock { graph, order: n, arc_words, vertex_words, arc_lookup, vertex_lookup })
}

pub fn higher_block_graph(g: &Graph, n: usize) -> Result<Graph> {
    Ok(higher_block(g, n)?.graph)
}

/// The s-th power graph: arcs are the paths of length s, vertices are kept.
#[derive(Clone, Debug)]
pub struct PowerGraph {
    pub graph: Graph,
    pub words: Vec<Path>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl PowerGraph {
    pub fn arc_of(&self, word: &[usize]) -> Option<usize> {
        self.lookup.get(word).copied()
    }
}

pub fn power_graph(g: &Graph, s: usize) -> Result<PowerGraph> {
    if s == 0 {
        return input("power order must be positive");
    }
    let words = g.paths(s);
    let arcs = words.iter().map(|w| (w.id(g), w.start, w.end(g))).collect();
    let graph = Graph::new(g.vertex_ids().to_vec(), arcs)?;
    let lookup = words.iter().enumerate().map(|(i, w)| (w.arcs.clone(), i)).collect();
    Ok(PowerGraph { graph, words, lookup })
}

/// Perron root of a nonnegative square matrix.
///
/// Each strongly connected block is handled by power iteration on `A + I`
/// with Collatz–Wielandt brackets; the shift by `I` removes periodicity.
pub fn spectral_radius(m: &Matrix) -> f64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix expected");
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            assert!(m[[i, j]] >= 0, "nonnegative matrix expected");
            if m[[i, j]] > 0 {
                arcs.push((format!("{i}>{j}"), i, j));
            }
        }
    }
    let g = Graph::new((0..n).map(|i| i.to_string()).collect(), arcs).unwrap();
    let mut best = 0.0f64;
    for comp in g.components() {
        let r = block_radius(m, &comp);
        if r > best {
            best = r;
        }
    }
    best
}

const POWER_TOL: f64 = 1e-12;
const POWER_CAP: usize = 100_000;

fn block_radius(m: &Matrix, comp: &[usize]) -> f64 {
    if comp.len() == 1 {
        return m[[comp[0], comp[0]]] as f64;
    }
    let k = comp.len();
    let sub: Vec<Vec<f64>> =
        comp.iter().map(|&i| comp.iter().map(|&j| m[[i, j]] as f64).collect()).collect();
    let mut x = vec![1.0f64; k];
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for _ in 0..POWER_CAP {
        let y: Vec<f64> =
            (0..k).map(|i| x[i] + (0..k).map(|j| sub[i][j] * x[j]).sum::<f64>()).collect();
        lo = f64::INFINITY;
        hi = 0.0;
        for i in 0..k {
            let q = y[i] / x[i];
            lo = lo.min(q);
            hi = hi.max(q);
        }
        let top = y.iter().cloned().fold(0.0, f64::max);
        x = y.iter().map(|v| v / top).collect();
        if hi - lo < POWER_TOL * hi.max(1.0) {
            break;
        }
    }
    (lo + hi) / 2.0 - 1.0
}

/// Set of vertex pairs reachable from `seeds` along pairs of arcs that the
/// `step` callback admits, in breadth-first order.
pub(crate) fn reach<S, F>(seeds: impl IntoIterator<Item = S>, mut step: F) -> Vec<S>
where
    S: Clone + Eq + std::hash::Hash,
    F: FnMut(&S) -> Vec<S>,
{
    let mut seen: HashSet<S> = HashSet::new();
    let mut order = Vec::new();
    for s in seeds {
        if seen.insert(s.clone()) {
            order.push(s);
        }
    }
    let mut i = 0;
    while i < order.len() {
        let next = step(&order[i]);
        for s in next {
            if seen.insert(s.clone()) {
                order.push(s);
            }
        }
        i += 1;
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn ex918_graph() -> Graph {
        Graph::from_named(
            &["1", "2"],
            &[("a", "1", "1"), ("b", "1", "1"), ("c", "1", "2"), ("d", "2", "1"), ("e", "2", "2")],
        )
        .unwrap()
    }

    #[test]
    fn de_bruijn_from_full_shift() {
        let g = Graph::full_shift(&["0", "1"]).unwrap();
        let h = higher_block_graph(&g, 2).unwrap();
        assert_eq!(h.vertex_ids(), &["0", "1"]);
        let ids: Vec<&str> = h.arcs().iter().map(|a| a.id.as_str()).collect();
        assert_eq!(ids, ["00", "01", "10", "11"]);
        assert!(h.is_nondegenerate());
    }

    #[test]
    fn order_one_is_identity() {
        let g = ex918_graph();
        assert_eq!(higher_block_graph(&g, 1).unwrap(), g);
    }

    #[test]
    fn ex918_second_order() {
        let h = higher_block_graph(&ex918_graph(), 2).unwrap();
        assert_eq!(h.num_vertices(), 5);
        let mut ids: Vec<&str> = h.arcs().iter().map(|a| a.id.as_str()).collect();
        ids.sort();
        let mut want = ["aa", "ab", "ac", "ba", "bb", "bc", "ce", "cd", "da", "db", "dc", "ee", "ed"];
        want.sort();
        assert_eq!(ids, want);
    }

    #[test]
    fn multi_char_ids_are_separated() {
        let g = Graph::full_shift(&["x0", "x1"]).unwrap();
        let h = higher_block_graph(&g, 2).unwrap();
        assert_eq!(h.arc_id(1), "x0~x1");
    }

    #[test]
    fn trim_examples() {
        let g = ex918_graph();
        assert_eq!(g.trim(), g);
        let single = Graph::from_named(&["u", "v"], &[("x", "u", "v")]).unwrap();
        assert!(single.trim().is_empty());
        let lp = Graph::from_named(&["u", "v"], &[("l", "u", "u"), ("x", "u", "v")]).unwrap();
        let t = lp.trim();
        assert_eq!(t.vertex_ids(), &["u"]);
        assert_eq!(t.num_arcs(), 1);
        assert_eq!(t.arc_id(0), "l");
    }

    #[test]
    fn perron_roots() {
        let close = |a: f64, b: f64| (a - b).abs() < 1e-9;
        assert!(close(spectral_radius(&ndarray::arr2(&[[2]])), 2.0));
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(close(spectral_radius(&ndarray::arr2(&[[1, 1], [1, 0]])), golden));
        assert!(close(spectral_radius(&ex918_graph().adjacency()), golden * golden));
        assert_eq!(spectral_radius(&Matrix::zeros((3, 3))), 0.0);
        // period two
        assert!(close(spectral_radius(&ndarray::arr2(&[[0, 2], [2, 0]])), 2.0));
        // reducible
        assert!(close(spectral_radius(&ndarray::arr2(&[[1, 1], [0, 3]])), 3.0));
    }

    #[test]
    fn incidence_identities() {
        let g = ex918_graph();
        let l = g.incidence_left();
        let r = g.incidence_right();
        assert_eq!(l.dot(&r), g.adjacency());
        assert_eq!(r.dot(&l), higher_block_graph(&g, 2).unwrap().adjacency());
    }
}
