//! Rule generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use resolvekit::graph::Graph;
use resolvekit::rule::{compose, full_shift_rule, identity_rule, Endomorphism, LocalRule};

pub const ALPHABETS: [&[&str]; 2] = [&["0", "1"], &["0", "1", "2"]];

pub fn alphabet(k: usize) -> &'static [&'static str] {
    ALPHABETS[k - 2]
}

/// Every base-k word of the given length, first letter most significant.
pub fn words(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

fn index_of(k: usize, w: &[usize]) -> usize {
    w.iter().fold(0, |acc, &a| acc * k + a)
}

/// The rule on the full k-shift with the given table, indexed by window word.
pub fn table_rule(k: usize, m: usize, n: usize, table: &[usize]) -> LocalRule {
    full_shift_rule(alphabet(k), m, n, |w| table[index_of(k, w)]).expect("table rule")
}

pub fn is_onto(r: &LocalRule) -> bool {
    Endomorphism::new(r.clone()).map(|e| e.onto()).unwrap_or(false)
}

/// All onto rules of the full 2-shift with window at most `max_n + 1`, in
/// every (m, n) split.
pub fn binary_onto_corpus(max_n: usize) -> Vec<(String, LocalRule)> {
    let mut out = Vec::new();
    for big_n in 0..=max_n {
        let size = 1usize << (big_n + 1);
        for code in 0u32..(1u32 << size) {
            let table: Vec<usize> = (0..size).map(|i| ((code >> i) & 1) as usize).collect();
            let base = table_rule(2, 0, big_n, &table);
            if !is_onto(&base) {
                continue;
            }
            for m in 0..=big_n {
                let r = base.retype(m, big_n - m).expect("same window");
                out.push((format!("N{big_n}-{code:0w$x}-m{m}", w = size / 4 + 1), r));
            }
        }
    }
    out
}

fn random_perm<R: Rng>(rng: &mut R, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    p.shuffle(rng);
    p
}

/// Permutive in the first or the last coordinate, hence onto.
pub fn permutive_rule<R: Rng>(rng: &mut R, k: usize, m: usize, n: usize) -> LocalRule {
    let big_n = m + n;
    let sigma = random_perm(rng, k);
    let inner: Vec<usize> = (0..k.pow(big_n as u32)).map(|_| rng.gen_range(0..k)).collect();
    let left = rng.gen_bool(0.5);
    full_shift_rule(alphabet(k), m, n, |w| {
        if big_n == 0 {
            return sigma[w[0]];
        }
        if left {
            (sigma[w[0]] + inner[index_of(k, &w[1..])]) % k
        } else {
            (inner[index_of(k, &w[..big_n])] + sigma[w[big_n]]) % k
        }
    })
    .expect("permutive rule")
}

/// Flips the symbol at the memory position in a fixed context whose
/// letters cannot be changed by the flip; an involution when accepted.
pub fn marker_rule<R: Rng>(rng: &mut R, m: usize, n: usize) -> Option<LocalRule> {
    let big_n = m + n;
    let pattern: Vec<Option<usize>> = (0..=big_n)
        .map(|i| if i == m { None } else if rng.gen_bool(0.7) { Some(rng.gen_range(0..2)) } else { None })
        .collect();
    let r = full_shift_rule(alphabet(2), m, n, |w| {
        let hit = pattern.iter().zip(w).all(|(p, &a)| p.is_none_or(|x| x == a));
        if hit {
            1 - w[m]
        } else {
            w[m]
        }
    })
    .ok()?;
    let sq = compose(&r, &r).ok()?;
    sq.same_map(&identity_rule(r.source())).then_some(r)
}

/// A random onto rule with the given alphabet size and split.
pub fn random_onto_rule<R: Rng>(rng: &mut R, k: usize, m: usize, n: usize) -> LocalRule {
    let big_n = m + n;
    let choice = rng.gen_range(0..4);
    if choice == 0 && k == 2 && big_n >= 2 {
        for _ in 0..20 {
            if let Some(r) = marker_rule(rng, m, n) {
                return r;
            }
        }
    }
    if choice == 1 && k.pow(big_n as u32 + 1) <= 16 {
        for _ in 0..200 {
            let table: Vec<usize> = (0..k.pow(big_n as u32 + 1)).map(|_| rng.gen_range(0..k)).collect();
            let r = table_rule(k, m, n, &table);
            if is_onto(&r) {
                return r;
            }
        }
    }
    if choice == 2 && big_n >= 1 {
        // composite of two permutive rules, permutive on neither end in general
        let m1 = rng.gen_range(0..=m);
        let n1 = rng.gen_range(0..=n);
        let (m2, n2) = (m - m1, n - n1);
        let a = permutive_rule(rng, k, m1, n1);
        let b = permutive_rule(rng, k, m2, n2);
        return compose(&a, &b).expect("same shift");
    }
    permutive_rule(rng, k, m, n)
}

/// (k, m, n) with at most `max_windows` windows and N ≤ 3.
pub fn random_shape<R: Rng>(rng: &mut R, max_windows: usize) -> (usize, usize, usize) {
    loop {
        let k: usize = rng.gen_range(2..=3);
        let big_n = rng.gen_range(0..=3usize);
        if k.pow(big_n as u32 + 1) > max_windows {
            continue;
        }
        let m = rng.gen_range(0..=big_n);
        return (k, m, big_n - m);
    }
}

// ---- brute-force oracles ---------------------------------------------------

/// Calls `visit` on every path of the given positive length, depth first.
pub fn for_each_path(g: &Graph, len: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    fn go(g: &Graph, len: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == len {
            return visit(cur);
        }
        let next: &[usize] = match cur.last() {
            Some(&a) => g.out_arcs(g.target(a)),
            None => &[],
        };
        let arcs: Vec<usize> = if cur.is_empty() { (0..g.num_arcs()).collect() } else { next.to_vec() };
        for a in arcs {
            cur.push(a);
            let keep = go(g, len, cur, visit);
            cur.pop();
            if !keep {
                return false;
            }
        }
        true
    }
    go(g, len, &mut Vec::with_capacity(len), &mut visit)
}

/// Dense lookup of a rule by window code.
struct Dense {
    base: u128,
    span: usize,
    values: Vec<usize>,
}

impl Dense {
    fn new(r: &LocalRule) -> Self {
        let base = r.source().num_arcs() as u128;
        let mut values = vec![usize::MAX; (base as usize).pow(r.span() as u32 + 1)];
        for (w, &v) in r.window_words().iter().zip(r.table()) {
            values[code(base, &w.arcs) as usize] = v;
        }
        Dense { base, span: r.span(), values }
    }

    fn eval(&self, w: &[usize]) -> usize {
        self.values[code(self.base, w) as usize]
    }

    fn image_code(&self, p: &[usize]) -> u128 {
        (0..p.len() - self.span).fold(0, |acc, j| acc * self.base + self.eval(&p[j..j + self.span + 1]) as u128)
    }
}

fn image(r: &LocalRule, p: &[usize]) -> Vec<usize> {
    let n = r.span();
    (0..p.len() - n).map(|j| r.eval(&p[j..j + n + 1])).collect()
}

fn code(base: u128, w: &[usize]) -> u128 {
    w.iter().fold(0, |acc, &a| acc * base + a as u128)
}

/// Whether f(w1) = f(w2) for all windows extended to paths of length
/// max(N+1, I) that agree after their first I arcs and end together.
fn left_redundant(r: &LocalRule, d: &Dense, i: usize) -> bool {
    let n = r.span();
    let g = r.source();
    let len = i.max(n + 1);
    let mut seen: HashMap<(u128, usize), usize> = HashMap::new();
    for_each_path(g, len, |p| {
        let key = (code(d.base, &p[i..]), g.target(p[len - 1]));
        let v = d.eval(&p[..n + 1]);
        *seen.entry(key).or_insert(v) == v
    })
}

fn right_redundant(r: &LocalRule, d: &Dense, j: usize) -> bool {
    let n = r.span();
    let g = r.source();
    let len = j.max(n + 1);
    let mut seen: HashMap<(u128, usize), usize> = HashMap::new();
    for_each_path(g, len, |p| {
        let key = (code(d.base, &p[..len - j]), g.source(p[0]));
        let v = d.eval(&p[len - n - 1..]);
        *seen.entry(key).or_insert(v) == v
    })
}

/// Largest redundancy up to N+1+|V|², or None past that cap.
pub fn oracle_left_redundancy(r: &LocalRule) -> Option<usize> {
    let d = Dense::new(r);
    let cap = r.span() + 1 + r.source().num_vertices().pow(2);
    (1..=cap).find(|&i| !left_redundant(r, &d, i)).map(|i| i - 1)
}

pub fn oracle_right_redundancy(r: &LocalRule) -> Option<usize> {
    let d = Dense::new(r);
    let cap = r.span() + 1 + r.source().num_vertices().pow(2);
    (1..=cap).find(|&j| !right_redundant(r, &d, j)).map(|j| j - 1)
}

/// Whether any two paths of length N+1+k with a common initial N-word and
/// a common image agree in arc N+1.
fn right_mergible(r: &LocalRule, d: &Dense, k: usize) -> bool {
    let n = r.span();
    let g = r.source();
    let mut seen: HashMap<(usize, u128, u128), usize> = HashMap::new();
    for_each_path(g, n + 1 + k, |p| {
        let key = (g.source(p[0]), code(d.base, &p[..n]), d.image_code(p));
        *seen.entry(key).or_insert(p[n]) == p[n]
    })
}

/// Least k up to |V_{G^[N+1]}|² with the right mergibility property.
pub fn oracle_right_mergibility(r: &LocalRule) -> Option<usize> {
    let d = Dense::new(r);
    let windows_vertices = if r.span() == 0 { r.source().num_vertices() } else { r.source().paths(r.span()).len() };
    (0..=windows_vertices.pow(2)).find(|&k| right_mergible(r, &d, k))
}

pub fn oracle_left_mergibility(r: &LocalRule) -> Option<usize> {
    oracle_right_mergibility(&r.reversed())
}

/// Distinct space-time patterns of width `w` over `steps` rows for a rule
/// of the full shift.
pub fn space_time_blocks(r: &LocalRule, w: usize, steps: usize) -> usize {
    let k = r.source().num_arcs();
    let n = r.span();
    let mut set = std::collections::HashSet::new();
    for x in words(k, w + (steps - 1) * n) {
        let mut rows = vec![x];
        for _ in 1..steps {
            let prev = rows.last().unwrap();
            rows.push(image(r, prev));
        }
        let pattern: Vec<Vec<usize>> = rows
            .iter()
            .enumerate()
            .map(|(t, row)| {
                let off = (steps - 1 - t) * r.memory();
                row[off..off + w].to_vec()
            })
            .collect();
        set.insert(pattern);
    }
    set.len()
}

/// Preimages of the periodic point y among points of period `len`.
pub fn periodic_preimages(e: &Endomorphism, y: &[usize], len: usize) -> usize {
    let k = e.graph().num_arcs();
    words(k, len)
        .into_iter()
        .filter(|x| {
            let img = e.apply_periodic(x);
            img.iter().enumerate().all(|(i, &b)| b == y[i % y.len()])
        })
        .count()
}
