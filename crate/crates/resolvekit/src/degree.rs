//! Strict redundancy and mergibility scans and the degree quadruple.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rule::{Endomorphism, LocalRule};

/// An integer or minus infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    NegInf,
    Fin(i64),
}

impl Ext {
    pub fn finite(self) -> Option<i64> {
        match self {
            Ext::Fin(x) => Some(x),
            Ext::NegInf => None,
        }
    }
}

impl Add for Ext {
    type Output = Ext;
    fn add(self, o: Ext) -> Ext {
        match (self, o) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            _ => Ext::NegInf,
        }
    }
}

impl Add<i64> for Ext {
    type Output = Ext;
    fn add(self, o: i64) -> Ext {
        self + Ext::Fin(o)
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Fin(x) => write!(f, "{x}"),
            Ext::NegInf => write!(f, "-inf"),
        }
    }
}

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ext::Fin(x) => s.serialize_i64(*x),
            Ext::NegInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Ext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => {
                n.as_i64().map(Ext::Fin).ok_or_else(|| serde::de::Error::custom("integer expected"))
            }
            serde_json::Value::String(s) if s == "-inf" => Ok(Ext::NegInf),
            _ => Err(serde::de::Error::custom("integer or \"-inf\" expected")),
        }
    }
}

/// Two arc words (ids of the source graph) certifying a failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordPair {
    pub first: Vec<String>,
    pub second: Vec<String>,
}

fn word_ids(r: &LocalRule, arcs: &[usize]) -> Vec<String> {
    arcs.iter().map(|&a| r.source().arc_id(a).to_string()).collect()
}

fn reversed_pair(p: WordPair) -> WordPair {
    let rev = |mut v: Vec<String>| {
        v.reverse();
        v
    };
    WordPair { first: rev(p.first), second: rev(p.second) }
}

/// Strict left redundancy I with a pair of windows showing I+1 fails.
pub fn left_redundancy(r: &LocalRule) -> Result<(usize, Option<WordPair>)> {
    let n = r.span();
    let t = r.left_independence();
    let words = r.window_words();
    let table = r.table();
    if t < n {
        // two windows sharing a terminal subpath of length N-t with different values
        let mut seen: HashMap<&[usize], usize> = HashMap::new();
        for (i, w) in words.iter().enumerate() {
            let key = &w.arcs[t + 1..];
            match seen.get(key) {
                Some(&j) if table[j] != table[i] => {
                    let pair = WordPair { first: word_ids(r, &words[j].arcs), second: word_ids(r, &w.arcs) };
                    return Ok((t, Some(pair)));
                }
                Some(_) => {}
                None => {
                    seen.insert(key, i);
                }
            }
        }
        return Err(Error::Internal("redundancy scan found no failing pair".into()));
    }
    // The value depends on the last arc only; look for pairs whose terminal
    // vertices meet again after d further steps.
    let g = r.source();
    let nv = g.num_vertices();
    let mut rep: Vec<Option<usize>> = vec![None; nv];
    for (i, w) in words.iter().enumerate() {
        let v = w.end(g);
        match rep[v] {
            Some(j) if table[j] != table[i] => {
                let pair = WordPair { first: word_ids(r, &words[j].arcs), second: word_ids(r, &w.arcs) };
                return Ok((n, Some(pair)));
            }
            Some(_) => {}
            None => rep[v] = Some(i),
        }
    }
    let value = |v: usize| table[rep[v].expect("nondegenerate source")];
    let mut meet: HashSet<(usize, usize)> = (0..nv).map(|v| (v, v)).collect();
    let cap = nv * nv;
    for d in 1..=cap {
        let mut next = HashSet::new();
        for u in 0..nv {
            for v in 0..nv {
                let hit = g.out_arcs(u).iter().any(|&a| {
                    g.out_arcs(v).iter().any(|&b| meet.contains(&(g.target(a), g.target(b))))
                });
                if hit {
                    next.insert((u, v));
                }
            }
        }
        meet = next;
        let mut bad: Vec<&(usize, usize)> = meet.iter().filter(|&&(u, v)| value(u) != value(v)).collect();
        bad.sort();
        if let Some(&&(u, v)) = bad.first() {
            let pair = WordPair {
                first: word_ids(r, &words[rep[u].unwrap()].arcs),
                second: word_ids(r, &words[rep[v].unwrap()].arcs),
            };
            return Ok((n + d, Some(pair)));
        }
    }
    Err(Error::Degenerate(format!(
        "left redundancy exceeds the search cap {}",
        n + 1 + cap
    )))
}

pub fn strict_left_redundancy(r: &LocalRule) -> Result<usize> {
    Ok(left_redundancy(r)?.0)
}

pub fn right_redundancy(r: &LocalRule) -> Result<(usize, Option<WordPair>)> {
    let (j, w) = left_redundancy(&r.reversed())?;
    Ok((j, w.map(reversed_pair)))
}

pub fn strict_right_redundancy(r: &LocalRule) -> Result<usize> {
    Ok(right_redundancy(r)?.0)
}

/// Result of a mergibility scan on one side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mergibility {
    /// Strict degree, or `None` when the rule is not closing on this side.
    pub strict: Option<usize>,
    /// For a finite positive degree: two words with a common start, equal
    /// images and different first windows, one step short of the degree.
    /// When not closing: two such words ending in a repeated state.
    pub witness: Option<WordPair>,
}

/// Strict right mergibility via the pair automaton of q_f.
pub fn right_mergibility(r: &LocalRule) -> Mergibility {
    let h = r.as_graph_hom();
    let w = &h.source;
    let mut by_label: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for a in 0..w.num_arcs() {
        by_label.entry((w.source(a), h.arc_map[a])).or_default().push(a);
    }
    let mut keys: Vec<&(usize, usize)> = by_label.keys().collect();
    keys.sort();
    // split arcs: distinct arcs with a common start and equal label
    let mut seeds: Vec<(usize, usize, usize, usize)> = Vec::new();
    for key in keys {
        let list = &by_label[key];
        for &a in list {
            for &b in list {
                if a != b {
                    seeds.push((a, b, w.target(a), w.target(b)));
                }
            }
        }
    }
    if seeds.is_empty() {
        return Mergibility { strict: Some(0), witness: None };
    }
    // explore the reachable pair states
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut states: Vec<(usize, usize)> = Vec::new();
    let mut succ: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    for &(_, _, x, y) in &seeds {
        if !index.contains_key(&(x, y)) {
            index.insert((x, y), states.len());
            states.push((x, y));
        }
    }
    let mut i = 0;
    while i < states.len() {
        let (x, y) = states[i];
        let mut out = Vec::new();
        for &a in w.out_arcs(x) {
            if let Some(list) = by_label.get(&(y, h.arc_map[a])) {
                for &b in list {
                    let s = (w.target(a), w.target(b));
                    let j = *index.entry(s).or_insert_with(|| {
                        states.push(s);
                        states.len() - 1
                    });
                    out.push((a, b, j));
                }
            }
        }
        succ.push(out);
        i += 1;
    }
    // longest path by depth-first search; a back edge means a cycle
    let n = states.len();
    let mut color = vec![0u8; n];
    let mut longest = vec![0usize; n];
    let mut best_next: Vec<Option<usize>> = vec![None; n];
    let mut cycle_at: Option<(Vec<usize>, usize)> = None;
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        let mut on_path: Vec<usize> = vec![root];
        color[root] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < succ[v].len() {
                let e = *next;
                *next += 1;
                let u = succ[v][e].2;
                match color[u] {
                    0 => {
                        color[u] = 1;
                        stack.push((u, 0));
                        on_path.push(u);
                    }
                    1 => {
                        if cycle_at.is_none() {
                            cycle_at = Some((on_path.clone(), e));
                        }
                    }
                    _ => {}
                }
                if cycle_at.is_some() {
                    break;
                }
            } else {
                for (e, &(_, _, u)) in succ[v].iter().enumerate() {
                    if best_next[v].is_none() || longest[u] + 1 > longest[v] {
                        longest[v] = longest[u] + 1;
                        best_next[v] = Some(e);
                    }
                }
                color[v] = 2;
                stack.pop();
                on_path.pop();
            }
        }
        if cycle_at.is_some() {
            break;
        }
    }
    let base = |wa: usize| -> usize { *r.window_words()[wa].arcs.last().unwrap() };
    let start_word = |v: usize| -> Vec<usize> { r.window().vertex_words[v].arcs.clone() };
    if let Some((path, last_edge)) = cycle_at {
        // seed leading to path[0], then the edges along path, then the closing edge
        let root = path[0];
        let &(a, b, x, y) = seeds.iter().find(|s| index[&(s.2, s.3)] == root).expect("root is a seed target");
        debug_assert_eq!(index[&(x, y)], root);
        let mut first = start_word(w.source(a));
        let mut second = first.clone();
        first.push(base(a));
        second.push(base(b));
        for win in path.windows(2) {
            let e = succ[win[0]].iter().find(|e| e.2 == win[1]).unwrap();
            first.push(base(e.0));
            second.push(base(e.1));
        }
        let last = succ[*path.last().unwrap()][last_edge];
        first.push(base(last.0));
        second.push(base(last.1));
        return Mergibility {
            strict: None,
            witness: Some(WordPair { first: word_ids(r, &first), second: word_ids(r, &second) }),
        };
    }
    let (best_seed, _) = seeds
        .iter()
        .enumerate()
        .map(|(i, s)| (i, longest[index[&(s.2, s.3)]]))
        .max_by_key(|&(i, l)| (l, std::cmp::Reverse(i)))
        .unwrap();
    let (a, b, x, y) = seeds[best_seed];
    let k = 1 + longest[index[&(x, y)]];
    let mut first = start_word(w.source(a));
    let mut second = first.clone();
    first.push(base(a));
    second.push(base(b));
    let mut v = index[&(x, y)];
    while let Some(e) = best_next[v] {
        let (c, d, u) = succ[v][e];
        first.push(base(c));
        second.push(base(d));
        v = u;
    }
    Mergibility {
        strict: Some(k),
        witness: Some(WordPair { first: word_ids(r, &first), second: word_ids(r, &second) }),
    }
}

pub fn left_mergibility(r: &LocalRule) -> Mergibility {
    let m = right_mergibility(&r.reversed());
    Mergibility { strict: m.strict, witness: m.witness.map(reversed_pair) }
}

pub fn strict_right_mergibility(r: &LocalRule) -> Option<usize> {
    right_mergibility(r).strict
}

pub fn strict_left_mergibility(r: &LocalRule) -> Option<usize> {
    left_mergibility(r).strict
}

pub fn decide_right_closing(r: &LocalRule) -> (bool, Option<WordPair>) {
    let m = right_mergibility(r);
    match m.strict {
        Some(_) => (true, None),
        None => (false, m.witness),
    }
}

pub fn decide_left_closing(r: &LocalRule) -> (bool, Option<WordPair>) {
    let m = left_mergibility(r);
    match m.strict {
        Some(_) => (true, None),
        None => (false, m.witness),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    #[serde(rename = "I")]
    pub i: Option<WordPair>,
    #[serde(rename = "J")]
    pub j: Option<WordPair>,
    pub k: Option<WordPair>,
    pub l: Option<WordPair>,
}

/// The four degrees of an endomorphism with the strict scans behind them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub memory: usize,
    pub anticipation: usize,
    #[serde(rename = "I")]
    pub i: usize,
    #[serde(rename = "J")]
    pub j: usize,
    pub k: Ext,
    pub l: Ext,
    #[serde(rename = "P_L")]
    pub p_l: i64,
    #[serde(rename = "P_R")]
    pub p_r: i64,
    #[serde(rename = "Q_R")]
    pub q_r: Ext,
    #[serde(rename = "Q_L")]
    pub q_l: Ext,
    pub right_closing: bool,
    pub left_closing: bool,
    /// Coordinates removed on the left and right before the mergibility scans.
    pub canonical_strip: (usize, usize),
    pub witnesses: Witnesses,
}

impl DegreeReport {
    pub fn quadruple(&self) -> (i64, i64, Ext, Ext) {
        (self.p_l, self.p_r, self.q_r, self.q_l)
    }

    /// max(-P_L, -Q_R); `None` when not right-closing.
    pub fn c_right(&self) -> Option<i64> {
        self.q_r.finite().map(|q| (-self.p_l).max(-q))
    }

    /// min(P_R, Q_L); `None` when not left-closing.
    pub fn c_left(&self) -> Option<i64> {
        self.q_l.finite().map(|q| self.p_r.min(q))
    }
}

/// Degrees of the block map of a rule, independent of its padding.
pub fn rule_degrees(r: &LocalRule) -> Result<DegreeReport> {
    let (i, wi) = left_redundancy(r)?;
    let (j, wj) = right_redundancy(r)?;
    let (c, tl, tr) = r.canonical();
    let km = right_mergibility(&c);
    let lm = left_mergibility(&c);
    let (m, n) = (r.memory() as i64, r.anticipation() as i64);
    let k = km.strict.map(|k| Ext::Fin((k + tr) as i64)).unwrap_or(Ext::NegInf);
    let l = lm.strict.map(|l| Ext::Fin((l + tl) as i64)).unwrap_or(Ext::NegInf);
    let q_r = match k {
        Ext::Fin(k) => Ext::Fin(n - k),
        Ext::NegInf => Ext::NegInf,
    };
    let q_l = match l {
        Ext::Fin(l) => Ext::Fin(m - l),
        Ext::NegInf => Ext::NegInf,
    };
    Ok(DegreeReport {
        memory: r.memory(),
        anticipation: r.anticipation(),
        i,
        j,
        k,
        l,
        p_l: i as i64 - m,
        p_r: j as i64 - n,
        q_r,
        q_l,
        right_closing: km.strict.is_some(),
        left_closing: lm.strict.is_some(),
        canonical_strip: (tl, tr),
        witnesses: Witnesses { i: wi, j: wj, k: km.witness, l: lm.witness },
    })
}

pub fn degrees(e: &Endomorphism) -> Result<DegreeReport> {
    rule_degrees(e.rule())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::{full_shift_rule, identity_rule};
    use crate::graph::Graph;
    use crate::samples;

    #[test]
    fn shift_rule_degrees() {
        let r = full_shift_rule(&["0", "1"], 0, 1, |w| w[1]).unwrap();
        let d = rule_degrees(&r).unwrap();
        assert_eq!((d.i, d.j, d.k, d.l), (1, 0, Ext::Fin(0), Ext::Fin(1)));
        assert_eq!(d.quadruple(), (1, -1, Ext::Fin(1), Ext::Fin(-1)));
    }

    #[test]
    fn identity_degrees() {
        let g = Graph::full_shift(&["0", "1"]).unwrap();
        let d = rule_degrees(&identity_rule(&g)).unwrap();
        assert_eq!(d.quadruple(), (0, 0, Ext::Fin(0), Ext::Fin(0)));
    }

    #[test]
    fn non_closing_rule() {
        let r = full_shift_rule(&["0", "1"], 0, 2, |w| w[0] ^ (w[1] & w[2])).unwrap();
        let (closing, witness) = decide_right_closing(&r);
        assert!(!closing);
        let w = witness.unwrap();
        assert_ne!(w.first, w.second);
        assert!(decide_left_closing(&r).0);
    }

    #[test]
    fn xor_is_closing_both_ways() {
        let r = full_shift_rule(&["0", "1"], 0, 1, |w| w[0] ^ w[1]).unwrap();
        assert_eq!(strict_right_mergibility(&r), Some(0));
        assert_eq!(strict_left_mergibility(&r), Some(0));
    }

    #[test]
    fn constant_rule_is_degenerate() {
        let r = full_shift_rule(&["0", "1"], 0, 1, |_| 0).unwrap();
        assert!(matches!(strict_left_redundancy(&r), Err(Error::Degenerate(_))));
    }

    #[test]
    fn two_vertex_rule_degrees() {
        let d = rule_degrees(&samples::two_vertex_rule()).unwrap();
        assert_eq!((d.i, d.j, d.k, d.l), (0, 0, Ext::Fin(1), Ext::Fin(1)));
        assert_eq!(d.quadruple(), (0, -1, Ext::Fin(0), Ext::Fin(-1)));
    }

    #[test]
    fn flip_rules_degrees() {
        for r in [samples::flip_involution(), samples::flip_complement()] {
            let d = rule_degrees(&r).unwrap();
            assert_eq!((d.i, d.j, d.k, d.l), (0, 0, Ext::Fin(4), Ext::Fin(2)));
            assert_eq!(d.quadruple(), (-1, -2, Ext::Fin(-2), Ext::Fin(-1)));
        }
    }

    #[test]
    fn ext_order_and_json() {
        assert!(Ext::NegInf < Ext::Fin(-100));
        assert_eq!(serde_json::to_string(&Ext::NegInf).unwrap(), "\"-inf\"");
        assert_eq!(serde_json::from_str::<Ext>("-3").unwrap(), Ext::Fin(-3));
    }
}
