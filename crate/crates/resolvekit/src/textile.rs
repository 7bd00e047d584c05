//! Textile systems over Markov shifts: duals, resolving classes, the
//! onesided and two-sided resolving constructions and the expansiveness
//! decision read off the dual.

use std::collections::BTreeMap;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::degree::{degrees, DegreeReport, Ext};
use crate::error::{input, internal, precondition, Result};
use crate::graph::{higher_block, Graph, GraphJson, HigherBlock, Matrix};
use crate::hom::{decide_injective, GraphHom, Injectivity};
use crate::kitchens::{merged_windows, MergedWindows};
use crate::rule::{apply_periodic, higher_block_rule, Endomorphism, LocalRule};

/// A pair of homomorphisms p, q: Γ → G.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TextileSystem {
    pub p: GraphHom,
    pub q: GraphHom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub p_left: bool,
    pub p_right: bool,
    pub q_left: bool,
    pub q_right: bool,
    pub weak_p_left: bool,
    pub weak_p_right: bool,
    pub weak_q_left: bool,
    pub weak_q_right: bool,
}

impl Classification {
    pub fn lr(&self) -> bool {
        self.p_left && self.q_right
    }
    pub fn rl(&self) -> bool {
        self.p_right && self.q_left
    }
    pub fn ll(&self) -> bool {
        self.p_left && self.q_left
    }
    pub fn rr(&self) -> bool {
        self.p_right && self.q_right
    }
    pub fn q_biresolving(&self) -> bool {
        self.q_left && self.q_right
    }
    pub fn weak_lr(&self) -> bool {
        self.weak_p_left && self.weak_q_right
    }
    pub fn weak_rl(&self) -> bool {
        self.weak_p_right && self.weak_q_left
    }
    pub fn weak_q_biresolving(&self) -> bool {
        self.weak_q_left && self.weak_q_right
    }
}

impl TextileSystem {
    pub fn new(p: GraphHom, q: GraphHom) -> Result<Self> {
        if p.source != q.source || p.target != q.target {
            return input("p and q must share source and target");
        }
        Ok(TextileSystem { p, q })
    }

    pub fn gamma(&self) -> &Graph {
        &self.p.source
    }

    pub fn base(&self) -> &Graph {
        &self.p.target
    }

    /// Γ* has the arcs of G as vertices and the arcs of Γ as arcs, α going
    /// from p(α) to q(α); G* has the vertices of G and the vertices of Γ.
    pub fn dual(&self) -> TextileSystem {
        let (gm, g) = (self.gamma(), self.base());
        let gamma_star = Graph::new(
            g.arcs().iter().map(|a| a.id.clone()).collect(),
            (0..gm.num_arcs()).map(|a| (gm.arc_id(a).to_string(), self.p.arc_map[a], self.q.arc_map[a])).collect(),
        )
        .expect("dual graph");
        let base_star = Graph::new(
            g.vertex_ids().to_vec(),
            (0..gm.num_vertices())
                .map(|v| (gm.vertex_id(v).to_string(), self.p.vertex_map[v], self.q.vertex_map[v]))
                .collect(),
        )
        .expect("dual base graph");
        let p = GraphHom {
            source: gamma_star.clone(),
            target: base_star.clone(),
            arc_map: (0..gm.num_arcs()).map(|a| gm.source(a)).collect(),
            vertex_map: (0..g.num_arcs()).map(|a| g.source(a)).collect(),
        };
        let q = GraphHom {
            source: gamma_star,
            target: base_star,
            arc_map: (0..gm.num_arcs()).map(|a| gm.target(a)).collect(),
            vertex_map: (0..g.num_arcs()).map(|a| g.target(a)).collect(),
        };
        debug_assert!(GraphHom::new(p.source.clone(), p.target.clone(), p.arc_map.clone(), p.vertex_map.clone()).is_ok());
        TextileSystem { p, q }
    }

    pub fn classification(&self) -> Classification {
        Classification {
            p_left: self.p.is_left_resolving(),
            p_right: self.p.is_right_resolving(),
            q_left: self.q.is_left_resolving(),
            q_right: self.q.is_right_resolving(),
            weak_p_left: self.p.is_weakly_left_resolving(),
            weak_p_right: self.p.is_weakly_right_resolving(),
            weak_q_left: self.q.is_weakly_left_resolving(),
            weak_q_right: self.q.is_weakly_right_resolving(),
        }
    }

    pub fn to_json(&self) -> TextileJson {
        TextileJson {
            gamma: self.gamma().to_json(),
            base: self.base().to_json(),
            p: hom_json(&self.p),
            q: hom_json(&self.q),
            classification: self.classification(),
        }
    }
}

/// Whether the p-side code X_Γ → X_G is one-to-one.
pub fn decide_xi_injective(t: &TextileSystem) -> Injectivity {
    decide_injective(&t.p)
}

/// Whether the q-side code X_Γ → X_G is one-to-one.
pub fn decide_eta_injective(t: &TextileSystem) -> Injectivity {
    decide_injective(&t.q)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomJson {
    pub arcs: BTreeMap<String, String>,
    pub vertices: BTreeMap<String, String>,
}

fn hom_json(h: &GraphHom) -> HomJson {
    HomJson {
        arcs: (0..h.source.num_arcs())
            .map(|a| (h.source.arc_id(a).to_string(), h.target.arc_id(h.arc_map[a]).to_string()))
            .collect(),
        vertices: (0..h.source.num_vertices())
            .map(|v| (h.source.vertex_id(v).to_string(), h.target.vertex_id(h.vertex_map[v]).to_string()))
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TextileJson {
    pub gamma: GraphJson,
    pub base: GraphJson,
    pub p: HomJson,
    pub q: HomJson,
    pub classification: Classification,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Lr,
    Rl,
    Qbi,
}

/// A constructed textile with the endomorphism of G^[t] it should carry.
#[derive(Clone, Debug)]
pub struct BuiltTextile {
    pub kind: Kind,
    pub textile: TextileSystem,
    /// The higher-block order t of the base graph.
    pub order: usize,
    pub shift: i64,
    pub transported: LocalRule,
    pub degrees: DegreeReport,
}

fn require_hypotheses(e: &Endomorphism) -> Result<()> {
    e.require_onto()?;
    if !e.graph().is_irreducible() && !decide_injective(&e.rule().as_graph_hom()).injective {
        return precondition("graph is reducible and the endomorphism is not one-to-one");
    }
    Ok(())
}

/// p on the merged-window graph: the subword at `offset` of length t.
fn offset_projection(r: &LocalRule, mw: &MergedWindows, offset: usize) -> Result<GraphHom> {
    let g = r.source();
    let tb: &HigherBlock = &mw.target_blocks;
    let t = tb.order;
    let arc_map = mw
        .arc_words
        .iter()
        .map(|w| tb.arc_of(&w.arcs[offset..offset + t]).expect("subword is a block"))
        .collect();
    let vertex_map = mw
        .vertex_members
        .iter()
        .map(|m| tb.vertex_of(&m[0].sub(g, offset, t - 1)).expect("subword is a block"))
        .collect();
    GraphHom::new(mw.hom.source.clone(), tb.graph.clone(), arc_map, vertex_map)
}

fn describe(d: &DegreeReport) -> String {
    format!("degrees (P_L, P_R, Q_R, Q_L) = ({}, {}, {}, {})", d.p_l, d.p_r, d.q_r, d.q_l)
}

/// The onesided 1-1 LR textile carrying φ^[k+1]; needs P_L ≥ 0 and Q_R ≥ 0.
pub fn build_lr_textile(e: &Endomorphism) -> Result<BuiltTextile> {
    require_hypotheses(e)?;
    let d = degrees(e)?;
    if d.p_l < 0 || d.q_r < Ext::Fin(0) {
        return precondition(format!("LR construction needs P_L >= 0 and Q_R >= 0; {}", describe(&d)));
    }
    let r = e.rule().strip(e.rule().memory(), 0)?;
    let k = crate::degree::strict_right_mergibility(&r).expect("closing");
    let mw = merged_windows(&r, 0, k, (false, true))?;
    let p = offset_projection(&r, &mw, 0)?;
    let textile = TextileSystem::new(p, mw.hom.clone())?;
    let c = textile.classification();
    if !c.weak_lr() || (e.graph().is_irreducible() && !c.lr()) {
        return internal("constructed textile is not LR");
    }
    let transported = higher_block_rule(&r, k + 1)?;
    Ok(BuiltTextile { kind: Kind::Lr, textile, order: k + 1, shift: 0, transported, degrees: d })
}

/// The onesided 1-1 RL textile carrying φ^[l+1]; needs P_R ≥ 0 and Q_L ≥ 0.
pub fn build_rl_textile(e: &Endomorphism) -> Result<BuiltTextile> {
    require_hypotheses(e)?;
    let d = degrees(e)?;
    if d.p_r < 0 || d.q_l < Ext::Fin(0) {
        return precondition(format!("RL construction needs P_R >= 0 and Q_L >= 0; {}", describe(&d)));
    }
    let r = e.rule().strip(0, e.rule().anticipation())?;
    let l = crate::degree::strict_left_mergibility(&r).expect("closing");
    let mw = merged_windows(&r, l, 0, (true, false))?;
    let p = offset_projection(&r, &mw, r.span())?;
    let textile = TextileSystem::new(p, mw.hom.clone())?;
    let c = textile.classification();
    if !c.weak_rl() || (e.graph().is_irreducible() && !c.rl()) {
        return internal("constructed textile is not RL");
    }
    let transported = higher_block_rule(&r, l + 1)?;
    Ok(BuiltTextile { kind: Kind::Rl, textile, order: l + 1, shift: 0, transported, degrees: d })
}

/// The q-biresolving textile T_s carrying (φσ^s)^[k+l+1], for
/// -Q_R ≤ s ≤ Q_L.
pub fn build_qbiresolving_textile(e: &Endomorphism, s: i64) -> Result<BuiltTextile> {
    e.require_onto()?;
    if !e.graph().is_irreducible() {
        return precondition("two-sided construction needs an irreducible graph");
    }
    let d = degrees(e)?;
    let (Ext::Fin(qr), Ext::Fin(ql)) = (d.q_r, d.q_l) else {
        return precondition(format!("rule is not closing on both sides; {}", describe(&d)));
    };
    if qr + ql < 0 || s < -qr || s > ql {
        return precondition(format!("shift {s} lies outside [{}, {}]; {}", -qr, ql, describe(&d)));
    }
    let r = e.rule();
    let (m, n) = (r.memory() as i64, r.anticipation() as i64);
    let (k, l) = ((n - qr) as usize, (m - ql) as usize);
    let mw = merged_windows(r, l, k, (true, true))?;
    let p = offset_projection(r, &mw, (m - s) as usize)?;
    let textile = TextileSystem::new(p, mw.hom.clone())?;
    let c = textile.classification();
    if !c.q_biresolving() {
        return internal("constructed textile is not q-biresolving");
    }
    if !textile.dual().classification().ll() {
        return internal("dual of the two-sided textile is not LL");
    }
    let transported = higher_block_rule(e.shift_compose(s).rule(), k + l + 1)?;
    Ok(BuiltTextile { kind: Kind::Qbi, textile, order: k + l + 1, shift: s, transported, degrees: d })
}

/// Compares η∘ξ⁻¹ with the transported block map on every periodic point
/// of period at most `max_period`.
pub fn check_transport(b: &BuiltTextile, g: &Graph, max_period: usize) -> Result<()> {
    let tb = higher_block(g, b.order)?;
    let t = &b.textile;
    let gm = t.gamma();
    for period in 1..=max_period {
        for cyc in g.closed_paths(period) {
            let point: Vec<usize> = (0..period)
                .map(|j| {
                    let w: Vec<usize> = (0..b.order).map(|i| cyc[(j + i) % period]).collect();
                    tb.arc_of(&w).expect("block of a closed path")
                })
                .collect();
            let expected = apply_periodic(&b.transported, &point);
            let mut lifts = 0;
            // depth-first search for Γ-cycles with p-label `point`
            for start in (0..gm.num_arcs()).filter(|&a| t.p.arc_map[a] == point[0]) {
                let mut stack = vec![(vec![start], 0usize)];
                while let Some((path, _)) = stack.pop() {
                    if path.len() == period {
                        if gm.target(*path.last().unwrap()) == gm.source(start) {
                            lifts += 1;
                            let label: Vec<usize> = path.iter().map(|&a| t.q.arc_map[a]).collect();
                            if label != expected {
                                return internal(format!("transport mismatch on a point of period {period}"));
                            }
                        }
                        continue;
                    }
                    let v = gm.target(*path.last().unwrap());
                    for &a in gm.out_arcs(v) {
                        if t.p.arc_map[a] == point[path.len()] {
                            let mut next = path.clone();
                            next.push(a);
                            stack.push((next, 0));
                        }
                    }
                }
            }
            if lifts == 0 {
                return internal(format!("periodic point of period {period} has no lift"));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Situation {
    Expansive,
    LeftOnly,
    RightOnly,
    Neither,
}

impl Situation {
    pub fn from_sides(left: bool, right: bool) -> Self {
        match (left, right) {
            (true, true) => Situation::Expansive,
            (true, false) => Situation::LeftOnly,
            (false, true) => Situation::RightOnly,
            (false, false) => Situation::Neither,
        }
    }

    pub fn left(self) -> bool {
        matches!(self, Situation::Expansive | Situation::LeftOnly)
    }

    pub fn right(self) -> bool {
        matches!(self, Situation::Expansive | Situation::RightOnly)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpansivenessReport {
    pub shift: i64,
    pub branch: Kind,
    pub situation: Situation,
    pub left_expansive: bool,
    pub right_expansive: bool,
    /// Two distinct dual rows with equal p*-images, when not left-expansive.
    pub left_witness: Option<(Vec<String>, Vec<String>)>,
    /// Two distinct dual rows with equal q*-images, when not right-expansive.
    pub right_witness: Option<(Vec<String>, Vec<String>)>,
}

/// Decides the expansiveness situation of φσ^s from the dual of a textile
/// carrying it: s ≥ max(-P_L, -Q_R) uses the LR construction,
/// s ≤ min(P_R, Q_L) the RL one, and -Q_R ≤ s ≤ Q_L the two-sided one.
pub fn expansiveness_situation(e: &Endomorphism, s: i64) -> Result<ExpansivenessReport> {
    let d = degrees(e)?;
    let es = e.shift_compose(s);
    let built = if d.c_right().is_some_and(|c| s >= c) {
        build_lr_textile(&es)?
    } else if d.c_left().is_some_and(|c| s <= c) {
        build_rl_textile(&es)?
    } else if matches!((d.q_r, d.q_l), (Ext::Fin(a), Ext::Fin(b)) if -a <= s && s <= b) {
        build_qbiresolving_textile(e, s)?
    } else {
        return precondition(format!("shift {s} is undecided by this artifact; {}", describe(&d)));
    };
    let dual = built.textile.dual();
    let (xi, eta) = (decide_xi_injective(&dual), decide_eta_injective(&dual));
    Ok(ExpansivenessReport {
        shift: s,
        branch: built.kind,
        situation: Situation::from_sides(xi.injective, eta.injective),
        left_expansive: xi.injective,
        right_expansive: eta.injective,
        left_witness: xi.witness,
        right_witness: eta.witness,
    })
}

fn matrix_graph(ids: &[String], m: &Matrix) -> Graph {
    let mut arcs = Vec::new();
    for ((u, v), &c) in m.indexed_iter() {
        for _ in 0..c {
            arcs.push((format!("k{}", arcs.len()), u, v));
        }
    }
    Graph::new(ids.to_vec(), arcs).expect("graph from matrix")
}

/// A graph K on the vertices of G with L_G M_H = M_K L_G and
/// M_H R_G = R_G M_K, for H on the vertices of G^[t] commuting with G^[t].
pub fn commuting_graph_k(g: &Graph, h: &Graph, t: usize) -> Result<Graph> {
    let gt = higher_block(g, t)?.graph;
    if h.num_vertices() != gt.num_vertices() {
        return input("H must live on the vertices of the higher-block graph");
    }
    let mh = h.adjacency();
    let mgt = gt.adjacency();
    if mh.dot(&mgt) != mgt.dot(&mh) {
        return precondition("H does not commute with the higher-block graph");
    }
    let mut cur = mh;
    for level in (1..t).rev() {
        let base = higher_block(g, level)?.graph;
        cur = collapse_step(&base, &cur)?;
    }
    let k = matrix_graph(g.vertex_ids(), &cur);
    let (mk, mg) = (k.adjacency(), g.adjacency());
    if mk.dot(&mg) != mg.dot(&mk) {
        return internal("K does not commute with G");
    }
    Ok(k)
}

/// One reduction from B^[2] to B.
fn collapse_step(b: &Graph, mh: &Matrix) -> Result<Matrix> {
    let (l, r) = (b.incidence_left(), b.incidence_right());
    let prod = mh.dot(&r.dot(&l));
    let nv = b.num_vertices();
    let mut k = Array2::<i64>::zeros((nv, nv));
    for u in 0..nv {
        for v in 0..nv {
            let a = b.in_arcs(u)[0];
            let c = b.out_arcs(v)[0];
            k[[u, v]] = prod[[a, c]];
            for &a2 in b.in_arcs(u) {
                for &c2 in b.out_arcs(v) {
                    if prod[[a2, c2]] != k[[u, v]] {
                        return precondition("row or column classes are inconsistent");
                    }
                }
            }
        }
    }
    if l.dot(mh) != k.dot(&l) || mh.dot(&r) != r.dot(&k) {
        return internal("rectangle identities fail for K");
    }
    Ok(k)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntropyReport {
    pub shift: i64,
    /// log of the Perron root of the dual base graph.
    pub dual_entropy: f64,
    /// Number of arcs of the one-vertex K-graph on a full shift, if built.
    pub k_arcs: Option<usize>,
}

/// Entropy of φσ^s read from the dual base graph of the textile carrying it,
/// with the K-graph count on full shifts when an LR textile is used.
pub fn entropy_checks(e: &Endomorphism, s: i64) -> Result<EntropyReport> {
    let d = degrees(e)?;
    let es = e.shift_compose(s);
    let built = if d.c_right().is_some_and(|c| s >= c) {
        build_lr_textile(&es)?
    } else if matches!((d.q_r, d.q_l), (Ext::Fin(a), Ext::Fin(b)) if -a <= s && s <= b) {
        build_qbiresolving_textile(e, s)?
    } else {
        return precondition(format!("no construction carries shift {s}; {}", describe(&d)));
    };
    let dual = built.textile.dual();
    let gstar = dual.base();
    let dual_entropy = crate::graph::spectral_radius(&gstar.adjacency()).ln();
    let k_arcs = if built.kind == Kind::Lr && e.graph().is_full_shift() {
        let k = commuting_graph_k(e.graph(), gstar, built.order)?;
        Some(k.num_arcs())
    } else {
        None
    };
    Ok(EntropyReport { shift: s, dual_entropy, k_arcs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn endo(r: LocalRule) -> Endomorphism {
        Endomorphism::new(r).unwrap()
    }

    #[test]
    fn dual_is_an_involution() {
        let g = Graph::full_shift(&["0", "1"]).unwrap();
        let t = TextileSystem::new(GraphHom::identity(&g), GraphHom::identity(&g)).unwrap();
        let d = t.dual();
        assert_eq!(d.base().num_vertices(), 1);
        assert_eq!(d.dual(), t);
        let b = build_lr_textile(&endo(samples::two_vertex_rule())).unwrap();
        assert_eq!(b.textile.dual().dual(), b.textile);
    }

    #[test]
    fn collapsing_parallel_arcs_is_not_injective() {
        let g = Graph::from_named(&["u"], &[("a", "u", "u"), ("b", "u", "u")]).unwrap();
        let q = GraphHom::new(g.clone(), g.clone(), vec![0, 0], vec![0]).unwrap();
        let t = TextileSystem::new(GraphHom::identity(&g), q).unwrap();
        assert!(decide_xi_injective(&t).injective);
        assert!(!decide_eta_injective(&t).injective);
    }

    #[test]
    fn lr_textiles_transport() {
        for r in [samples::full_identity(), samples::shift(), samples::two_vertex_rule(), samples::double_xor()] {
            let e = endo(r);
            let b = build_lr_textile(&e).unwrap();
            assert!(b.textile.classification().lr());
            check_transport(&b, e.graph(), 6).unwrap();
        }
    }

    #[test]
    fn rl_textile_of_shifted_rule() {
        let e = endo(samples::two_vertex_rule()).shift_compose(-1);
        let b = build_rl_textile(&e).unwrap();
        assert!(b.textile.classification().rl());
        check_transport(&b, e.graph(), 6).unwrap();
    }

    #[test]
    fn two_sided_textiles() {
        let e = endo(samples::double_xor());
        for s in -2..=0 {
            let b = build_qbiresolving_textile(&e, s).unwrap();
            check_transport(&b, e.graph(), 6).unwrap();
        }
        assert!(build_qbiresolving_textile(&e, 1).is_err());
        assert!(build_qbiresolving_textile(&endo(samples::two_vertex_rule()), 0).is_err());
    }

    #[test]
    fn situations() {
        let e = endo(samples::two_vertex_rule());
        assert_eq!(expansiveness_situation(&e, 0).unwrap().situation, Situation::Neither);
        let f = endo(samples::flip_complement());
        assert!(!expansiveness_situation(&f, 2).unwrap().left_expansive);
        let x = endo(samples::double_xor());
        assert_eq!(expansiveness_situation(&x, -1).unwrap().situation, Situation::Expansive);
        let sh = endo(samples::shift());
        assert_eq!(expansiveness_situation(&sh, 0).unwrap().situation, Situation::Expansive);
        let id = endo(samples::full_identity());
        assert_eq!(expansiveness_situation(&id, 0).unwrap().situation, Situation::Neither);
    }

    #[test]
    fn k_graph_examples() {
        let g = Graph::full_shift(&["0", "1"]).unwrap();
        let h = Graph::from_named(
            &["0", "1"],
            &[("a", "0", "0"), ("b", "0", "0"), ("c", "0", "1"), ("d", "1", "0"), ("e", "1", "1"), ("f", "1", "1")],
        )
        .unwrap();
        let k = commuting_graph_k(&g, &h, 2).unwrap();
        assert_eq!((k.num_vertices(), k.num_arcs()), (1, 3));
        let gt = higher_block(&g, 3).unwrap().graph;
        assert_eq!(commuting_graph_k(&g, &gt, 3).unwrap().adjacency(), g.adjacency());
        let r = entropy_checks(&endo(samples::double_xor()), 0).unwrap();
        assert!((r.dual_entropy - 4f64.ln()).abs() < 1e-9);
    }
}
