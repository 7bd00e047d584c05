//! Constructions: Hedlund multipliers, the bipermutation splice of a
//! left-closing and a right-closing rule, and dual higher-block
//! endomorphisms.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::degree::{degrees, strict_left_mergibility, strict_right_mergibility, Ext};
use crate::error::{input, internal, precondition, Result};
use crate::graph::{join_ids, Graph};
use crate::hom::{CompatibleFamily, Side};
use crate::rule::{Endomorphism, LocalRule};

/// Sizes (R, L) of the maximal right and left compatible sets of q_f.
pub fn hedlund_multipliers(r: &LocalRule) -> Result<(usize, usize)> {
    if !r.is_endomorphism() || !r.source().is_full_shift() {
        return precondition("multipliers need an endomorphism of a full shift");
    }
    Endomorphism::new(r.clone())?.require_onto()?;
    let q = r.as_graph_hom();
    let size = |side: Side| -> Result<usize> {
        let fam = CompatibleFamily::of(&q, side);
        let sizes: BTreeSet<usize> = fam.maximal.iter().map(Vec::len).collect();
        match (sizes.len(), sizes.first()) {
            (1, Some(&s)) => Ok(s),
            _ => internal(format!("maximal compatible sets of unequal sizes {sizes:?}")),
        }
    };
    Ok((size(Side::Right)?, size(Side::Left)?))
}

/// A map A×A → A injective in each argument, stored by symbol index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipermutation {
    alphabet: Vec<String>,
    table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BipermutationJson {
    pub alphabet: Vec<String>,
    /// `table[a][b]` is the value at (a, b).
    pub table: Vec<Vec<String>>,
}

impl Bipermutation {
    pub fn new(alphabet: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = alphabet.len();
        if n == 0 || table.len() != n || table.iter().any(|row| row.len() != n) {
            return input("bipermutation table must be |A| x |A|");
        }
        for i in 0..n {
            let row: BTreeSet<usize> = table[i].iter().copied().collect();
            let col: BTreeSet<usize> = (0..n).map(|j| table[j][i]).collect();
            if row.len() != n || col.len() != n || row.iter().any(|&x| x >= n) {
                return input(format!("table is not injective in each argument at {}", alphabet[i]));
            }
        }
        Ok(Bipermutation { alphabet, table })
    }

    /// (a + b) mod |A| over the given alphabet.
    pub fn cyclic(alphabet: &[&str]) -> Self {
        let n = alphabet.len();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Bipermutation { alphabet: alphabet.iter().map(|s| s.to_string()).collect(), table }
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn apply(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn to_json(&self) -> BipermutationJson {
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|&x| self.alphabet[x].clone()).collect())
            .collect();
        BipermutationJson { alphabet: self.alphabet.clone(), table }
    }

    pub fn from_json(j: &BipermutationJson) -> Result<Self> {
        let index = |s: &String| match j.alphabet.iter().position(|a| a == s) {
            Some(i) => Ok(i),
            None => input(format!("symbol {s:?} is not in the alphabet")),
        };
        let table = j
            .table
            .iter()
            .map(|row| row.iter().map(index).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(j.alphabet.clone(), table)
    }
}

/// What the splice guarantees, each entry recomputed on the output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpliceCertificate {
    /// Strict right mergibility of f and of g.
    pub right_mergibility: usize,
    /// Strict left mergibility of f' and of g.
    pub left_mergibility: usize,
    pub q_sum: i64,
    /// R(g) = R(f).
    pub right_multiplier: usize,
    /// L(g) = L(f').
    pub left_multiplier: usize,
    /// Number of preimages of every point.
    pub fiber_count: u64,
}

#[derive(Clone, Debug)]
pub struct Splice {
    pub endomorphism: Endomorphism,
    pub certificate: SpliceCertificate,
}

/// g(a_1 … a_{N+N'-t+1}) = π(f'(prefix of length N'+1), f(suffix of length N+1)),
/// a (0, N+N'-t)-type rule.
pub fn bipermutation_construct(fprime: &LocalRule, f: &LocalRule, t: i64, pi: &Bipermutation) -> Result<Splice> {
    let g0 = f.source();
    if !g0.is_full_shift() || !f.is_endomorphism() || !fprime.is_endomorphism() || fprime.source() != g0 {
        return precondition("both rules must be endomorphisms of the same full shift");
    }
    let ids: Vec<String> = (0..g0.num_arcs()).map(|a| g0.arc_id(a).to_string()).collect();
    if ids != pi.alphabet {
        return input("bipermutation alphabet differs from the shift alphabet");
    }
    let Some(k) = strict_right_mergibility(f) else {
        return precondition("f is not right-closing");
    };
    let Some(lp) = strict_left_mergibility(fprime) else {
        return precondition("f' is not left-closing");
    };
    let (n, np) = (f.span() as i64, fprime.span() as i64);
    let bound = (n - k as i64).min(np - lp as i64);
    if t < 0 || t >= bound {
        return precondition(format!("need 0 <= t < {bound}, got t = {t}"));
    }
    let (r_f, _) = hedlund_multipliers(f)?;
    let (_, l_fp) = hedlund_multipliers(fprime)?;
    let span = (n + np - t) as usize;
    let (n, np) = (n as usize, np as usize);
    let rule = LocalRule::new(g0, g0, 0, span, |w| {
        pi.apply(fprime.eval(&w[..np + 1]), f.eval(&w[span - n..]))
    })?;
    let e = Endomorphism::new(rule)?;

    let cert_k = strict_right_mergibility(e.rule());
    let cert_l = strict_left_mergibility(e.rule());
    if cert_k != Some(k) || cert_l != Some(lp) {
        return internal(format!("splice mergibility ({cert_k:?}, {cert_l:?}) differs from ({k}, {lp})"));
    }
    let d = degrees(&e)?;
    let q_sum = match (d.q_r, d.q_l) {
        (Ext::Fin(a), Ext::Fin(b)) => a + b,
        _ => return internal("splice is not closing"),
    };
    let expected = span as i64 - k as i64 - lp as i64;
    if q_sum != expected || q_sum <= 0 {
        return internal(format!("Q_R + Q_L = {q_sum}, expected {expected} > 0"));
    }
    let (r_g, l_g) = hedlund_multipliers(e.rule())?;
    if (r_g, l_g) != (r_f, l_fp) {
        return internal(format!("multipliers ({r_g}, {l_g}) differ from ({r_f}, {l_fp})"));
    }
    let total = (g0.num_arcs() as u64).pow(span as u32);
    let denom = (r_f * l_fp) as u64;
    if total % denom != 0 {
        return internal(format!("{denom} does not divide {total}"));
    }
    let certificate = SpliceCertificate {
        right_mergibility: k,
        left_mergibility: lp,
        q_sum,
        right_multiplier: r_f,
        left_multiplier: l_fp,
        fiber_count: total / denom,
    };
    Ok(Splice { endomorphism: e, certificate })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberCheck {
    pub fiber_count: u64,
    /// c · L · R = |A|^N.
    pub formula_holds: bool,
    /// Largest period of the points checked.
    pub max_period: usize,
    /// Periodic points whose preimage count differs from c, by one period.
    pub failures: Vec<String>,
}

impl FiberCheck {
    pub fn holds(&self) -> bool {
        self.formula_holds && self.failures.is_empty()
    }
}

fn lcm_upto(c: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (1..=c).fold(1, |acc, x| acc / gcd(acc, x) * x)
}

type Mat = Vec<Vec<u128>>;

fn mat_mul(a: &Mat, b: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut out = vec![vec![0u128; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = out[i][j].checked_add(a[i][k].checked_mul(b[k][j])?)?;
            }
        }
    }
    Some(out)
}

fn mat_pow(m: &Mat, mut e: u64) -> Option<Mat> {
    let n = m.len();
    let mut acc: Mat = (0..n).map(|i| (0..n).map(|j| u128::from(i == j)).collect()).collect();
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base)?;
        }
    }
    Some(acc)
}

/// Checks that every periodic point of period at most `max_period` has
/// exactly `c` preimages, and that c · L · R = |A|^N.
///
/// The fiber of a point of period p is finite and permuted by σ^p, so all
/// of its members have periods dividing p · lcm(1..c). Those preimages are
/// counted as the trace of the p-step transfer matrix raised to lcm(1..c).
pub fn verify_fiber_count(e: &Endomorphism, c: u64, max_period: usize) -> Result<FiberCheck> {
    let r = e.rule();
    let g = e.graph();
    if !g.is_full_shift() {
        return precondition("fiber counts are checked on full shifts only");
    }
    e.require_onto()?;
    let (rm, lm) = hedlund_multipliers(r)?;
    let total = (g.num_arcs() as u64).pow(r.span() as u32);
    let formula_holds = c * (rm * lm) as u64 == total;

    // transfer matrices between window-graph vertices, one per output symbol
    let w = &r.window().graph;
    let nv = w.num_vertices();
    let mut by_symbol: Vec<Mat> = vec![vec![vec![0; nv]; nv]; g.num_arcs()];
    for a in 0..w.num_arcs() {
        by_symbol[r.table()[a]][w.source(a)][w.target(a)] += 1;
    }
    let exponent = lcm_upto(c);
    let mut failures = Vec::new();
    for p in 1..=max_period {
        for y in g.closed_paths(p) {
            let mut m = by_symbol[y[0]].clone();
            for &b in &y[1..] {
                m = mat_mul(&m, &by_symbol[b]).expect("small transfer product");
            }
            let Some(mp) = mat_pow(&m, exponent) else {
                return internal("transfer matrix power overflowed");
            };
            let count: u128 = (0..nv).map(|i| mp[i][i]).sum();
            if count != c as u128 {
                failures.push(periodic_id(g, &y));
            }
        }
    }
    Ok(FiberCheck { fiber_count: c, formula_holds, max_period, failures })
}

fn periodic_id(g: &Graph, arcs: &[usize]) -> String {
    join_ids(arcs.iter().map(|&a| g.arc_id(a)))
}

/// φ^[*s] presented on the graph of realized column words.
#[derive(Clone, Debug)]
pub struct DualBlock {
    pub order: usize,
    /// Column symbols, each listing the arcs of rows 0..s from the top.
    pub columns: Vec<Vec<usize>>,
    /// Length of the column words forming the arcs of the presentation.
    pub block: usize,
    pub endomorphism: Endomorphism,
}

fn column_id(g: &Graph, col: &[usize]) -> String {
    col.iter().map(|&a| g.arc_id(a)).collect::<Vec<_>>().join("|")
}

/// The dual higher-block endomorphism of order s.
///
/// Points of the column shift are the stacks (x, φx, …, φ^{s-1}x). A row
/// constraint spans N+1 columns, so the column shift is presented by its
/// (N+1)-block graph (2-block when N = 0). The transported rule keeps the
/// (m, n)-type: rows 1..s move up and the new bottom row is f applied to the
/// old bottom row. For s = 1 the input is returned unchanged.
pub fn dual_block_endo(e: &Endomorphism, s: usize) -> Result<DualBlock> {
    let r = e.rule();
    let g = e.graph();
    if s == 0 {
        return input("order must be positive");
    }
    if s == 1 {
        let columns = (0..g.num_arcs()).map(|a| vec![a]).collect();
        return Ok(DualBlock { order: 1, columns, block: 1, endomorphism: e.clone() });
    }
    let (m, nn) = (r.memory(), r.span());
    let block = nn.max(1) + 1;

    // realized column words of length `block`
    let mut words: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    for p in g.paths(block + (s - 1) * nn) {
        let mut rows = vec![p.arcs];
        for _ in 1..s {
            let prev = rows.last().unwrap();
            let next = (0..prev.len() - nn).map(|j| r.eval(&prev[j..j + nn + 1])).collect();
            rows.push(next);
        }
        let word = (0..block)
            .map(|i| (0..s).map(|row| rows[row][i + (s - 1 - row) * m]).collect())
            .collect();
        words.insert(word);
    }
    let columns: Vec<Vec<usize>> = words
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let col_index: BTreeMap<&Vec<usize>, usize> = columns.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let col_ids: Vec<String> = columns.iter().map(|c| column_id(g, c)).collect();
    let encode = |w: &[Vec<usize>]| -> Vec<usize> { w.iter().map(|c| col_index[c]).collect() };
    let coded: Vec<Vec<usize>> = words.iter().map(|w| encode(w)).collect();

    let vertices: BTreeSet<Vec<usize>> =
        coded.iter().flat_map(|w| [w[..block - 1].to_vec(), w[1..].to_vec()]).collect();
    let vertex_list: Vec<Vec<usize>> = vertices.into_iter().collect();
    let vertex_index: BTreeMap<&Vec<usize>, usize> = vertex_list.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let name = |w: &[usize]| join_ids(w.iter().map(|&c| col_ids[c].as_str()));
    let arcs = coded
        .iter()
        .map(|w| {
            (name(w), vertex_index[&w[..block - 1].to_vec()], vertex_index[&w[1..].to_vec()])
        })
        .collect();
    let d = Graph::new(vertex_list.iter().map(|v| name(v)).collect(), arcs)?;
    if !d.is_nondegenerate() {
        return internal("column presentation has a dead end");
    }
    let arc_of: BTreeMap<&Vec<usize>, usize> = coded.iter().enumerate().map(|(i, w)| (w, i)).collect();

    let rule = LocalRule::new(&d, &d, m, r.anticipation(), |win| {
        let mut base: Vec<usize> = coded[win[0]].clone();
        base.extend(win[1..].iter().map(|&a| coded[a][block - 1]));
        let out: Vec<usize> = (0..block)
            .map(|i| {
                let old = &columns[base[m + i]];
                let bottom: Vec<usize> = base[i..i + nn + 1].iter().map(|&c| columns[c][s - 1]).collect();
                let mut col = old[1..].to_vec();
                col.push(r.eval(&bottom));
                col_index[&col]
            })
            .collect();
        arc_of[&out]
    })?;
    let endomorphism = Endomorphism::with_flag(rule, e.onto());
    Ok(DualBlock { order: s, columns, block, endomorphism })
}
