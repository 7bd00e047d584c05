//! Local rules on Markov shifts and the rule algebra.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{input, precondition, Result};
use crate::graph::{higher_block, power_graph, Graph, GraphJson, HigherBlock, Path};
use crate::hom::{image_covers_target, GraphHom};

/// A map from the length-(N+1) paths of the source graph to arcs of the
/// target graph, with the window split as memory m and anticipation n.
#[derive(Clone, Debug)]
pub struct LocalRule {
    source: Graph,
    target: Graph,
    memory: usize,
    anticipation: usize,
    window: Arc<HigherBlock>,
    table: Vec<usize>,
}

impl LocalRule {
    /// Builds a rule by evaluating `f` on every window word.
    pub fn new(
        source: &Graph,
        target: &Graph,
        memory: usize,
        anticipation: usize,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<Self> {
        let window = Arc::new(window_of(source, memory + anticipation + 1)?);
        if !target.is_nondegenerate() {
            return input("target graph must be nondegenerate");
        }
        let table = window.arc_words.iter().map(|w| f(&w.arcs)).collect();
        Self::from_parts(source.clone(), target.clone(), memory, anticipation, window, table)
    }

    fn from_parts(
        source: Graph,
        target: Graph,
        memory: usize,
        anticipation: usize,
        window: Arc<HigherBlock>,
        table: Vec<usize>,
    ) -> Result<Self> {
        let r = LocalRule { source, target, memory, anticipation, window, table };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        if self.table.iter().any(|&b| b >= self.target.num_arcs()) {
            return input("rule value is not an arc of the target graph");
        }
        let w = &self.window.graph;
        for v in 0..w.num_vertices() {
            let ends = w.in_arcs(v).iter().map(|&a| self.target.target(self.table[a]));
            let starts = w.out_arcs(v).iter().map(|&a| self.target.source(self.table[a]));
            let mut all = ends.chain(starts);
            let first = all.next();
            if let Some(x) = first {
                if all.any(|y| y != x) {
                    let word = self.window.vertex_words[v].id(&self.source);
                    return input(format!("images around {word:?} do not form a path in the target graph"));
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn anticipation(&self) -> usize {
        self.anticipation
    }

    /// N, one less than the window size.
    pub fn span(&self) -> usize {
        self.memory + self.anticipation
    }

    pub fn window(&self) -> &HigherBlock {
        &self.window
    }

    pub fn window_words(&self) -> &[Path] {
        &self.window.arc_words
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn eval(&self, word: &[usize]) -> usize {
        let i = self.window.arc_of(word).expect("window word is a path");
        self.table[i]
    }

    /// Image of a path of length at least N: a path of length `len - N`
    /// in the target graph, or the forced target vertex when `len == N`.
    pub fn image(&self, p: &Path) -> Path {
        let n = self.span();
        assert!(p.len() >= n);
        if p.len() == n {
            let v = self.window.vertex_of(p).expect("path of length N");
            return Path::vertex(self.vertex_image(v));
        }
        let arcs = (0..p.len() - n).map(|j| self.eval(&p.arcs[j..j + n + 1])).collect();
        Path::from_arcs(&self.target, arcs)
    }

    /// Forced image of a vertex of the window graph.
    pub fn vertex_image(&self, v: usize) -> usize {
        let w = &self.window.graph;
        match w.out_arcs(v).first() {
            Some(&a) => self.target.source(self.table[a]),
            None => self.target.target(self.table[w.in_arcs(v)[0]]),
        }
    }

    /// The homomorphism q_f from the window graph G^[N+1] to the target graph.
    pub fn as_graph_hom(&self) -> GraphHom {
        let vertex_map = (0..self.window.graph.num_vertices()).map(|v| self.vertex_image(v)).collect();
        GraphHom::new(self.window.graph.clone(), self.target.clone(), self.table.clone(), vertex_map)
            .expect("valid rule gives a homomorphism")
    }

    /// Same table read with a different memory/anticipation split.
    pub fn retype(&self, memory: usize, anticipation: usize) -> Result<Self> {
        if memory + anticipation != self.span() {
            return input("retyping must keep the window size");
        }
        Ok(LocalRule { memory, anticipation, ..self.clone() })
    }

    /// g(a_{-left} … a_{N+right}) = f(a_0 … a_N).
    pub fn pad(&self, left: usize, right: usize) -> Self {
        if left == 0 && right == 0 {
            return self.clone();
        }
        let n = self.span();
        LocalRule::new(&self.source, &self.target, self.memory + left, self.anticipation + right, |w| {
            self.eval(&w[left..left + n + 1])
        })
        .expect("padding a valid rule")
    }

    /// Largest t ≤ N such that the value depends only on the last N+1-t arcs.
    pub fn left_independence(&self) -> usize {
        self.independence(true)
    }

    /// Largest t ≤ N such that the value depends only on the first N+1-t arcs.
    pub fn right_independence(&self) -> usize {
        self.independence(false)
    }

    fn independence(&self, left: bool) -> usize {
        let n = self.span();
        let mut best = 0;
        for t in 1..=n {
            let mut seen: HashMap<&[usize], usize> = HashMap::new();
            let ok = self.window.arc_words.iter().zip(&self.table).all(|(w, &v)| {
                let key = if left { &w.arcs[t..] } else { &w.arcs[..n + 1 - t] };
                *seen.entry(key).or_insert(v) == v
            });
            if !ok {
                break;
            }
            best = t;
        }
        best
    }

    /// Drops `left` leading and `right` trailing coordinates the rule ignores.
    pub fn strip(&self, left: usize, right: usize) -> Result<Self> {
        if left > self.memory || right > self.anticipation {
            return precondition("stripping beyond memory or anticipation");
        }
        if left + right > 0 && (self.left_independence() < left || self.right_independence() < right) {
            return precondition("stripped coordinates are not redundant");
        }
        let n = self.span();
        let keep = n + 1 - left - right;
        let mut table: HashMap<&[usize], usize> = HashMap::new();
        for (w, &v) in self.window.arc_words.iter().zip(&self.table) {
            table.insert(&w.arcs[left..left + keep], v);
        }
        LocalRule::new(&self.source, &self.target, self.memory - left, self.anticipation - right, |w| table[w])
    }

    /// Canonical form: maximal redundancy stripped inside the memory and
    /// anticipation, with the amounts removed on each side.
    pub fn canonical(&self) -> (Self, usize, usize) {
        let tl = self.left_independence().min(self.memory);
        let a = self.strip(tl, 0).expect("left strip");
        let tr = a.right_independence().min(a.anticipation);
        let b = a.strip(0, tr).expect("right strip");
        (b, tl, tr)
    }

    /// Whether two rules define the same block map.
    pub fn same_map(&self, other: &Self) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let m = self.memory.max(other.memory);
        let n = self.anticipation.max(other.anticipation);
        let a = self.pad(m - self.memory, n - self.anticipation);
        let b = other.pad(m - other.memory, n - other.anticipation);
        a.table == b.table
    }

    /// The mirror rule on the reversed graphs.
    pub fn reversed(&self) -> Self {
        let src = self.source.reversed();
        let tgt = self.target.reversed();
        LocalRule::new(&src, &tgt, self.anticipation, self.memory, |w| {
            let rev: Vec<usize> = w.iter().rev().copied().collect();
            self.eval(&rev)
        })
        .expect("mirror of a valid rule")
    }

    pub fn to_json(&self) -> RuleJson {
        let map = self
            .window
            .arc_words
            .iter()
            .zip(&self.table)
            .map(|(w, &v)| {
                let key: Vec<&str> = w.arcs.iter().map(|&a| self.source.arc_id(a)).collect();
                (key.join("."), self.target.arc_id(v).to_string())
            })
            .collect();
        RuleJson {
            source_graph: graph_json(&self.source),
            target_graph: graph_json(&self.target),
            memory: self.memory,
            anticipation: self.anticipation,
            map,
        }
    }

    pub fn from_json(j: &RuleJson) -> Result<Self> {
        let source = Graph::from_json(&j.source_graph)?;
        let target = Graph::from_json(&j.target_graph)?;
        source.check_ids()?;
        target.check_ids()?;
        if !source.is_nondegenerate() || !target.is_nondegenerate() {
            return input("defining graphs must be nondegenerate");
        }
        let window = window_of(&source, j.memory + j.anticipation + 1)?;
        if j.map.len() != window.arc_words.len() {
            return input(format!(
                "rule table has {} entries but the source has {} windows",
                j.map.len(),
                window.arc_words.len()
            ));
        }
        let mut table = Vec::with_capacity(window.arc_words.len());
        for w in &window.arc_words {
            let key: Vec<&str> = w.arcs.iter().map(|&a| source.arc_id(a)).collect();
            let key = key.join(".");
            let Some(v) = j.map.get(&key) else {
                return input(format!("rule table misses window {key:?}"));
            };
            let Some(b) = target.arc_index(v) else {
                return input(format!("value {v:?} is not an arc of the target graph"));
            };
            table.push(b);
        }
        Self::from_parts(source, target, j.memory, j.anticipation, Arc::new(window), table)
    }
}

fn window_of(source: &Graph, size: usize) -> Result<HigherBlock> {
    if !source.is_nondegenerate() {
        return input("source graph must be nondegenerate");
    }
    higher_block(source, size)
}

fn graph_json(g: &Graph) -> GraphJson {
    if g.num_vertices() == 1 && g.arcs().iter().all(|a| a.from == 0 && a.to == 0) && g.vertex_id(0) == "v" {
        GraphJson::Full { full_alphabet: g.arcs().iter().map(|a| a.id.clone()).collect() }
    } else {
        g.to_json()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RuleJson {
    pub source_graph: GraphJson,
    pub target_graph: GraphJson,
    pub memory: usize,
    pub anticipation: usize,
    pub map: BTreeMap<String, String>,
}

/// The rule gf: apply f along the word, then g to the resulting path.
pub fn compose(f: &LocalRule, g: &LocalRule) -> Result<LocalRule> {
    if f.target != g.source {
        return input("composition needs the target of f to be the source of g");
    }
    let (nf, ng) = (f.span(), g.span());
    LocalRule::new(&f.source, &g.target, f.memory + g.memory, f.anticipation + g.anticipation, |w| {
        let mid: Vec<usize> = (0..=ng).map(|j| f.eval(&w[j..j + nf + 1])).collect();
        g.eval(&mid)
    })
}

/// The rule of the order-s higher-block map between G^[s] and H^[s].
pub fn higher_block_rule(r: &LocalRule, s: usize) -> Result<LocalRule> {
    let sb = higher_block(&r.source, s)?;
    let tb = higher_block(&r.target, s)?;
    let n = r.span();
    LocalRule::new(&sb.graph, &tb.graph, r.memory, r.anticipation, |w| {
        let mut base = sb.arc_words[w[0]].arcs.clone();
        for &c in &w[1..] {
            base.push(*sb.arc_words[c].arcs.last().unwrap());
        }
        let img: Vec<usize> = (0..s).map(|j| r.eval(&base[j..j + n + 1])).collect();
        tb.arc_of(&img).expect("image block")
    })
}

/// An endomorphism of a Markov shift with its surjectivity flag.
#[derive(Clone, Debug)]
pub struct Endomorphism {
    rule: LocalRule,
    onto: bool,
}

impl Endomorphism {
    pub fn new(rule: LocalRule) -> Result<Self> {
        if !rule.is_endomorphism() {
            return input("endomorphism needs equal source and target");
        }
        let onto = image_covers_target(&rule.as_graph_hom());
        Ok(Endomorphism { rule, onto })
    }

    pub(crate) fn with_flag(rule: LocalRule, onto: bool) -> Self {
        Endomorphism { rule, onto }
    }

    pub fn rule(&self) -> &LocalRule {
        &self.rule
    }

    pub fn graph(&self) -> &Graph {
        &self.rule.source
    }

    pub fn onto(&self) -> bool {
        self.onto
    }

    pub fn require_onto(&self) -> Result<()> {
        if self.onto {
            Ok(())
        } else {
            precondition("endomorphism is not onto")
        }
    }

    /// φσ^s as the same table with the window re-split.
    pub fn shift_compose(&self, s: i64) -> Self {
        let (m, n) = (self.rule.memory as i64, self.rule.anticipation as i64);
        let left = (s - m).max(0) as usize;
        let right = (-n - s).max(0) as usize;
        let padded = self.rule.pad(left, right);
        let (pm, pn) = (padded.memory as i64, padded.anticipation as i64);
        let rule = padded.retype((pm - s) as usize, (pn + s) as usize).expect("same window");
        Endomorphism { rule, onto: self.onto }
    }

    pub fn power(&self, s: usize) -> Result<Self> {
        if s == 0 {
            return input("power must be positive");
        }
        let mut acc = self.rule.clone();
        for _ in 1..s {
            acc = compose(&acc, &self.rule)?;
        }
        Ok(Endomorphism { rule: acc, onto: self.onto })
    }

    pub fn higher_block(&self, s: usize) -> Result<Self> {
        Ok(Endomorphism { rule: higher_block_rule(&self.rule, s)?, onto: self.onto })
    }

    /// The endomorphism of the s-th power shift on grouped coordinates.
    pub fn power_system(&self, s: usize) -> Result<Self> {
        if s == 0 {
            return input("power order must be positive");
        }
        let (m, n) = (self.rule.memory, self.rule.anticipation);
        let padded = self.rule.pad((s - m % s) % s, (s - n % s) % s);
        let pg = power_graph(&self.rule.source, s)?;
        let big_n = padded.span();
        let rule = LocalRule::new(&pg.graph, &pg.graph, padded.memory / s, padded.anticipation / s, |w| {
            let base: Vec<usize> = w.iter().flat_map(|&c| pg.words[c].arcs.iter().copied()).collect();
            let img: Vec<usize> = (0..s).map(|j| padded.eval(&base[j..j + big_n + 1])).collect();
            pg.arc_of(&img).expect("image block")
        })?;
        Ok(Endomorphism { rule, onto: self.onto })
    }

    pub fn reversed(&self) -> Self {
        Endomorphism { rule: self.rule.reversed(), onto: self.onto }
    }

    /// Image of a periodic point given by one period of arcs.
    pub fn apply_periodic(&self, period: &[usize]) -> Vec<usize> {
        apply_periodic(&self.rule, period)
    }
}

/// φ applied to the periodic point with the given period, positions aligned
/// so that output coordinate j uses inputs j-m … j+n.
pub fn apply_periodic(r: &LocalRule, period: &[usize]) -> Vec<usize> {
    let p = period.len() as i64;
    let (m, n) = (r.memory as i64, r.anticipation as i64);
    (0..p)
        .map(|j| {
            let w: Vec<usize> = (j - m..=j + n).map(|i| period[i.rem_euclid(p) as usize]).collect();
            r.eval(&w)
        })
        .collect()
}

/// Rules on full shifts given by a function of symbol indices.
pub fn full_shift_rule(
    alphabet: &[&str],
    memory: usize,
    anticipation: usize,
    f: impl Fn(&[usize]) -> usize,
) -> Result<LocalRule> {
    let g = Graph::full_shift(alphabet)?;
    LocalRule::new(&g, &g, memory, anticipation, f)
}

pub fn identity_rule(g: &Graph) -> LocalRule {
    LocalRule::new(g, g, 0, 0, |w| w[0]).expect("identity")
}
