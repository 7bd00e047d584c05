//! Graph-homomorphisms, resolving predicates and compatible-set constructions.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{input, Result};
use crate::graph::{higher_block, pair_id, set_id, Graph, HigherBlock, Path};

/// Arc map plus vertex map between two graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphHom {
    pub source: Graph,
    pub target: Graph,
    pub arc_map: Vec<usize>,
    pub vertex_map: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

impl GraphHom {
    pub fn new(source: Graph, target: Graph, arc_map: Vec<usize>, vertex_map: Vec<usize>) -> Result<Self> {
        if arc_map.len() != source.num_arcs() || vertex_map.len() != source.num_vertices() {
            return input("homomorphism maps do not cover the source graph");
        }
        for (a, &b) in arc_map.iter().enumerate() {
            if b >= target.num_arcs() {
                return input("arc image out of range");
            }
            if vertex_map[source.source(a)] != target.source(b) || vertex_map[source.target(a)] != target.target(b) {
                return input(format!("arc {} breaks the incidence square", source.arc_id(a)));
            }
        }
        if vertex_map.iter().any(|&v| v >= target.num_vertices()) {
            return input("vertex image out of range");
        }
        Ok(GraphHom { source, target, arc_map, vertex_map })
    }

    pub fn identity(g: &Graph) -> Self {
        GraphHom {
            source: g.clone(),
            target: g.clone(),
            arc_map: (0..g.num_arcs()).collect(),
            vertex_map: (0..g.num_vertices()).collect(),
        }
    }

    pub fn reversed(&self) -> Self {
        GraphHom {
            source: self.source.reversed(),
            target: self.target.reversed(),
            arc_map: self.arc_map.clone(),
            vertex_map: self.vertex_map.clone(),
        }
    }

    pub fn image_path(&self, p: &Path) -> Path {
        if p.is_empty() {
            Path::vertex(self.vertex_map[p.start])
        } else {
            Path::from_arcs(&self.target, p.arcs.iter().map(|&a| self.arc_map[a]).collect())
        }
    }

    fn arcs_by_label(&self, side: Side) -> HashMap<(usize, usize), Vec<usize>> {
        let mut m: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for a in 0..self.source.num_arcs() {
            let v = match side {
                Side::Right => self.source.source(a),
                Side::Left => self.source.target(a),
            };
            m.entry((v, self.arc_map[a])).or_default().push(a);
        }
        m
    }

    fn resolving(&self, side: Side, strong: bool) -> bool {
        let m = self.arcs_by_label(side);
        if m.values().any(|v| v.len() > 1) {
            return false;
        }
        if !strong {
            return true;
        }
        for u in 0..self.source.num_vertices() {
            let hv = self.vertex_map[u];
            let labels = match side {
                Side::Right => self.target.out_arcs(hv),
                Side::Left => self.target.in_arcs(hv),
            };
            if labels.iter().any(|&b| !m.contains_key(&(u, b))) {
                return false;
            }
        }
        true
    }

    pub fn is_right_resolving(&self) -> bool {
        self.resolving(Side::Right, true)
    }

    pub fn is_left_resolving(&self) -> bool {
        self.resolving(Side::Left, true)
    }

    pub fn is_weakly_right_resolving(&self) -> bool {
        self.resolving(Side::Right, false)
    }

    pub fn is_weakly_left_resolving(&self) -> bool {
        self.resolving(Side::Left, false)
    }

    pub fn to_dot(&self, name: &str) -> String {
        self.source
            .to_dot_labeled(name, |a| Some(self.target.arc_id(self.arc_map[a]).to_string()))
    }
}

/// Label-synchronized product of two homomorphisms into one graph.
#[derive(Clone, Debug)]
pub struct PairGraph {
    pub graph: Graph,
    pub vertex_pairs: Vec<(usize, usize)>,
    pub arc_pairs: Vec<(usize, usize)>,
}

pub fn fiber_pair_graph(h1: &GraphHom, h2: &GraphHom) -> Result<PairGraph> {
    if h1.target != h2.target {
        return input("fiber product needs a common target graph");
    }
    let (g1, g2) = (&h1.source, &h2.source);
    let mut vertex_pairs = Vec::new();
    let mut vidx = HashMap::new();
    for u1 in 0..g1.num_vertices() {
        for u2 in 0..g2.num_vertices() {
            if h1.vertex_map[u1] == h2.vertex_map[u2] {
                vidx.insert((u1, u2), vertex_pairs.len());
                vertex_pairs.push((u1, u2));
            }
        }
    }
    let mut by_label: HashMap<usize, Vec<usize>> = HashMap::new();
    for a in 0..g2.num_arcs() {
        by_label.entry(h2.arc_map[a]).or_default().push(a);
    }
    let mut arc_pairs = Vec::new();
    let mut arcs = Vec::new();
    for a1 in 0..g1.num_arcs() {
        if let Some(list) = by_label.get(&h1.arc_map[a1]) {
            for &a2 in list {
                let from = vidx[&(g1.source(a1), g2.source(a2))];
                let to = vidx[&(g1.target(a1), g2.target(a2))];
                arcs.push((pair_id(g1.arc_id(a1), g2.arc_id(a2)), from, to));
                arc_pairs.push((a1, a2));
            }
        }
    }
    let vertices = vertex_pairs
        .iter()
        .map(|&(u1, u2)| pair_id(g1.vertex_id(u1), g2.vertex_id(u2)))
        .collect();
    Ok(PairGraph { graph: Graph::new(vertices, arcs)?, vertex_pairs, arc_pairs })
}

/// Outcome of an injectivity decision for the 1-block code of a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Injectivity {
    pub injective: bool,
    /// Two distinct arc words with equal images: a lead-in followed by a cycle.
    pub witness: Option<(Vec<String>, Vec<String>)>,
}

/// Decides whether the 1-block code X_Γ → X_G of `h` is one-to-one.
pub fn decide_injective(h: &GraphHom) -> Injectivity {
    let (kv, ka) = h.source.trim_masks();
    let alive: Vec<usize> = (0..h.source.num_arcs()).filter(|&a| ka[a]).collect();
    let trimmed = restrict(h, &kv, &ka);
    let pg = fiber_pair_graph(&trimmed, &trimmed).expect("same target");
    let (pv, pa) = pg.graph.trim_masks();
    let off = (0..pg.arc_pairs.len()).find(|&i| pa[i] && pg.arc_pairs[i].0 != pg.arc_pairs[i].1);
    let Some(first) = off else {
        return Injectivity { injective: true, witness: None };
    };
    // walk forward inside the trimmed pair graph until a state repeats
    let mut seq = vec![first];
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut state = pg.graph.target(first);
    loop {
        if seen.contains_key(&state) {
            break;
        }
        seen.insert(state, seq.len());
        let next = pg.graph.out_arcs(state).iter().copied().find(|&a| pa[a] && pv[pg.graph.target(a)]);
        let next = next.expect("trimmed pair graph has no dead ends");
        seq.push(next);
        state = pg.graph.target(next);
    }
    let name = |side: usize| -> Vec<String> {
        seq.iter()
            .map(|&i| {
                let (a, b) = pg.arc_pairs[i];
                let x = if side == 0 { a } else { b };
                h.source.arc_id(alive[x]).to_string()
            })
            .collect()
    };
    Injectivity { injective: false, witness: Some((name(0), name(1))) }
}

fn restrict(h: &GraphHom, kv: &[bool], ka: &[bool]) -> GraphHom {
    let source = h.source.subgraph(kv, ka);
    let arc_map = (0..h.source.num_arcs()).filter(|&a| ka[a]).map(|a| h.arc_map[a]).collect();
    let vertex_map = (0..h.source.num_vertices()).filter(|&v| kv[v]).map(|v| h.vertex_map[v]).collect();
    GraphHom { source, target: h.target.clone(), arc_map, vertex_map }
}

/// Whether every path of the target graph is the image of a path of the
/// trimmed source.
pub fn image_covers_target(h: &GraphHom) -> bool {
    let (kv, ka) = h.source.trim_masks();
    let t = restrict(h, &kv, &ka);
    let succ = t.arcs_by_label(Side::Right);
    let mut seeds = Vec::new();
    for v in 0..t.target.num_vertices() {
        let u: Vec<usize> = (0..t.source.num_vertices()).filter(|&u| t.vertex_map[u] == v).collect();
        if u.is_empty() {
            return false;
        }
        seeds.push((v, u));
    }
    let mut stuck = false;
    crate::graph::reach(seeds, |(v, set)| {
        let mut next = Vec::new();
        for &b in t.target.out_arcs(*v) {
            let s = successor(&t.source, &succ, set, b, Side::Right);
            if s.is_empty() {
                stuck = true;
            } else {
                next.push((t.target.target(b), s));
            }
        }
        next
    });
    !stuck
}

fn successor(
    g: &Graph,
    by_label: &HashMap<(usize, usize), Vec<usize>>,
    set: &[usize],
    label: usize,
    side: Side,
) -> Vec<usize> {
    let mut out = Vec::new();
    for &u in set {
        if let Some(arcs) = by_label.get(&(u, label)) {
            for &a in arcs {
                out.push(match side {
                    Side::Right => g.target(a),
                    Side::Left => g.source(a),
                });
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Compatible sets of a homomorphism on one side.
#[derive(Clone, Debug)]
pub struct CompatibleFamily {
    pub side: Side,
    /// Every compatible set (successors of singletons, singletons included).
    pub all: Vec<Vec<usize>>,
    /// The maximal compatible sets.
    pub maximal: Vec<Vec<usize>>,
    /// Maximal sets together with all their nonempty successors.
    pub closure: Vec<Vec<usize>>,
}

impl CompatibleFamily {
    pub fn of(h: &GraphHom, side: Side) -> Self {
        let by_label = h.arcs_by_label(side);
        let step = |set: &Vec<usize>| -> Vec<Vec<usize>> {
            let hv = h.vertex_map[set[0]];
            let labels = match side {
                Side::Right => h.target.out_arcs(hv),
                Side::Left => h.target.in_arcs(hv),
            };
            labels
                .iter()
                .map(|&b| successor(&h.source, &by_label, set, b, side))
                .filter(|s| !s.is_empty())
                .collect()
        };
        let mut all = crate::graph::reach((0..h.source.num_vertices()).map(|u| vec![u]), step);
        all.sort();
        let maximal: Vec<Vec<usize>> = all
            .iter()
            .filter(|s| {
                let hs: HashSet<usize> = s.iter().copied().collect();
                !all.iter().any(|t| t.len() > s.len() && hs.iter().all(|x| t.binary_search(x).is_ok()))
            })
            .cloned()
            .collect();
        let mut closure = crate::graph::reach(maximal.iter().cloned(), step);
        closure.sort();
        CompatibleFamily { side, all, maximal, closure }
    }
}

/// The induced resolver h⁺ (side Right) or h⁻ (side Left).
#[derive(Clone, Debug)]
pub struct Resolver {
    pub hom: GraphHom,
    /// Vertex sets of the original source, aligned with the resolver's vertices.
    pub sets: Vec<Vec<usize>>,
}

pub fn induced_resolver(h: &GraphHom, side: Side) -> Resolver {
    let fam = CompatibleFamily::of(h, side);
    let by_label = h.arcs_by_label(side);
    let name = |s: &Vec<usize>| set_id(s.iter().map(|&u| h.source.vertex_id(u)));
    let mut keyed: Vec<(String, Vec<usize>)> = fam.closure.iter().map(|s| (name(s), s.clone())).collect();
    keyed.sort();
    let index: HashMap<&Vec<usize>, usize> = keyed.iter().enumerate().map(|(i, (_, s))| (s, i)).collect();
    let mut arcs = Vec::new();
    let mut arc_map = Vec::new();
    for (i, (uid, set)) in keyed.iter().enumerate() {
        let hv = h.vertex_map[set[0]];
        let labels = match side {
            Side::Right => h.target.out_arcs(hv),
            Side::Left => h.target.in_arcs(hv),
        };
        for &b in labels {
            let s = successor(&h.source, &by_label, set, b, side);
            if s.is_empty() {
                continue;
            }
            let j = index[&s];
            let bid = h.target.arc_id(b);
            match side {
                Side::Right => arcs.push((pair_id(uid, bid), i, j)),
                Side::Left => arcs.push((pair_id(bid, uid), j, i)),
            }
            arc_map.push(b);
        }
    }
    let vertex_map = keyed.iter().map(|(_, s)| h.vertex_map[s[0]]).collect();
    let graph = Graph::new(keyed.iter().map(|(n, _)| n.clone()).collect(), arcs).unwrap();
    let hom = GraphHom::new(graph, h.target.clone(), arc_map, vertex_map).unwrap();
    Resolver { hom, sets: keyed.into_iter().map(|(_, s)| s).collect() }
}

pub fn induced_right_resolver(h: &GraphHom) -> Resolver {
    induced_resolver(h, Side::Right)
}

pub fn induced_left_resolver(h: &GraphHom) -> Resolver {
    induced_resolver(h, Side::Left)
}

/// h^[s] between the order-s higher-block graphs, with the blocks used.
pub struct HigherBlockHom {
    pub hom: GraphHom,
    pub source_blocks: HigherBlock,
    pub target_blocks: HigherBlock,
}

pub fn higher_block_hom(h: &GraphHom, s: usize) -> Result<HigherBlockHom> {
    let sb = higher_block(&h.source, s)?;
    let tb = higher_block(&h.target, s)?;
    let arc_map = sb
        .arc_words
        .iter()
        .map(|w| tb.arc_of(&h.image_path(w).arcs).expect("image of a path is a path"))
        .collect();
    let vertex_map = sb
        .vertex_words
        .iter()
        .map(|w| tb.vertex_of(&h.image_path(w)).expect("image of a path is a path"))
        .collect();
    let hom = GraphHom::new(sb.graph.clone(), tb.graph.clone(), arc_map, vertex_map)?;
    Ok(HigherBlockHom { hom, source_blocks: sb, target_blocks: tb })
}

/// Arc triples (source id, target id, label id) of a homomorphism, used for
/// comparisons up to canonical ids.
pub fn labeled_arcs(h: &GraphHom) -> BTreeMap<(String, String, String), usize> {
    let mut m = BTreeMap::new();
    for a in 0..h.source.num_arcs() {
        let key = (
            h.source.vertex_id(h.source.source(a)).to_string(),
            h.source.vertex_id(h.source.target(a)).to_string(),
            h.target.arc_id(h.arc_map[a]).to_string(),
        );
        *m.entry(key).or_insert(0) += 1;
    }
    m
}
