//! Merged-window graphs of a mergible rule and their comparison with the
//! subset-construction route.

use std::collections::{BTreeMap, HashMap};

use crate::degree::{strict_left_mergibility, strict_right_mergibility};
use crate::error::{internal, precondition, Result};
use crate::graph::{higher_block, set_id, Graph, HigherBlock, Path};
use crate::hom::{induced_resolver, CompatibleFamily, GraphHom, Resolver, Side};
use crate::rule::LocalRule;

/// G^{-+}_{f;l,k} with the homomorphism into H^[l+k+1].
#[derive(Clone, Debug)]
pub struct MergedWindows {
    pub hom: GraphHom,
    pub left: usize,
    pub right: usize,
    /// Words of length N+k+l forming each vertex class.
    pub vertex_members: Vec<Vec<Path>>,
    /// One word of length N+k+l+1 per arc class.
    pub arc_words: Vec<Path>,
    /// H^[l+k+1], the target of `hom`.
    pub target_blocks: HigherBlock,
}

/// q_f read on words of length N+t: the homomorphism G^[N+t] → H^[t].
pub fn block_hom(r: &LocalRule, t: usize) -> Result<(GraphHom, HigherBlock, HigherBlock)> {
    let n = r.span();
    let sb = higher_block(r.source(), n + t)?;
    let tb = higher_block(r.target(), t)?;
    let arc_map = sb
        .arc_words
        .iter()
        .map(|w| tb.arc_of(&r.image(w).arcs).expect("image word"))
        .collect();
    let vertex_map = sb
        .vertex_words
        .iter()
        .map(|w| tb.vertex_of(&r.image(w)).expect("image word"))
        .collect();
    let hom = GraphHom::new(sb.graph.clone(), tb.graph.clone(), arc_map, vertex_map)?;
    Ok((hom, sb, tb))
}

/// The merged-window graph for left depth `l` and right depth `k`.
pub fn merged_windows(r: &LocalRule, l: usize, k: usize, check: (bool, bool)) -> Result<MergedWindows> {
    let (need_left, need_right) = check;
    if need_right && !matches!(strict_right_mergibility(r), Some(s) if s <= k) {
        return precondition(format!("rule is not {k} right-mergible"));
    }
    if need_left && !matches!(strict_left_mergibility(r), Some(s) if s <= l) {
        return precondition(format!("rule is not {l} left-mergible"));
    }
    let g = r.source();
    let n = r.span();
    let t = k + l + 1;
    let (q, sb, tb) = block_hom(r, t)?;
    // class key: the middle word and the image
    let key = |w: &Path, len: usize, image: usize| -> (Vec<usize>, usize, usize) {
        let mid = w.sub(g, l, len - k - l);
        (mid.arcs, mid.start, image)
    };
    let mut vclass: HashMap<(Vec<usize>, usize, usize), usize> = HashMap::new();
    let mut vertex_members: Vec<Vec<Path>> = Vec::new();
    let mut vertex_of_word = Vec::with_capacity(sb.vertex_words.len());
    for (i, w) in sb.vertex_words.iter().enumerate() {
        let kk = key(w, n + k + l, q.vertex_map[i]);
        let c = *vclass.entry(kk).or_insert_with(|| {
            vertex_members.push(Vec::new());
            vertex_members.len() - 1
        });
        vertex_members[c].push(w.clone());
        vertex_of_word.push(c);
    }
    let mut aclass: HashMap<(Vec<usize>, usize, usize), usize> = HashMap::new();
    let mut arc_members: Vec<Vec<Path>> = Vec::new();
    let mut ends: Vec<(usize, usize)> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    let sg = &sb.graph;
    for (i, w) in sb.arc_words.iter().enumerate() {
        let kk = key(w, n + k + l + 1, q.arc_map[i]);
        let e = (vertex_of_word[sg.source(i)], vertex_of_word[sg.target(i)]);
        match aclass.get(&kk) {
            Some(&c) => {
                if ends[c] != e {
                    return internal(format!("merged arc {} has ambiguous ends", w.id(g)));
                }
                arc_members[c].push(w.clone());
            }
            None => {
                aclass.insert(kk, arc_members.len());
                arc_members.push(vec![w.clone()]);
                ends.push(e);
                labels.push(q.arc_map[i]);
            }
        }
    }
    let vid: Vec<String> = vertex_members.iter().map(|m| set_id(m.iter().map(|p| p.id(g)))).collect();
    let arcs = arc_members
        .iter()
        .zip(&ends)
        .map(|(m, &(a, b))| (set_id(m.iter().map(|p| p.id(g))), a, b))
        .collect();
    let graph = Graph::new(vid, arcs)?;
    let vertex_map = vertex_members
        .iter()
        .map(|m| q.vertex_map[sb.vertex_of(&m[0]).unwrap()])
        .collect();
    let hom = GraphHom::new(graph, tb.graph.clone(), labels, vertex_map)?;
    let arc_words = arc_members.into_iter().map(|mut m| m.swap_remove(0)).collect();
    Ok(MergedWindows { hom, left: l, right: k, vertex_members, arc_words, target_blocks: tb })
}

/// G^+_{f;k}; asserted weakly right-resolving.
pub fn kitchens_plus(r: &LocalRule, k: usize) -> Result<MergedWindows> {
    let m = merged_windows(r, 0, k, (false, true))?;
    if !m.hom.is_weakly_right_resolving() {
        return internal("merged graph is not weakly right-resolving");
    }
    Ok(m)
}

/// G^-_{f;l}; asserted weakly left-resolving.
pub fn kitchens_minus(r: &LocalRule, l: usize) -> Result<MergedWindows> {
    let m = merged_windows(r, l, 0, (true, false))?;
    if !m.hom.is_weakly_left_resolving() {
        return internal("merged graph is not weakly left-resolving");
    }
    Ok(m)
}

/// G^{-+}_{f;l,k}; asserted weakly biresolving.
pub fn kitchens_pm(r: &LocalRule, l: usize, k: usize) -> Result<MergedWindows> {
    let m = merged_windows(r, l, k, (true, true))?;
    if !(m.hom.is_weakly_right_resolving() && m.hom.is_weakly_left_resolving()) {
        return internal("merged graph is not weakly biresolving");
    }
    Ok(m)
}

/// Labeled arcs with every vertex named by the set of words it stands for.
pub type CanonicalArcs = BTreeMap<(String, String, String), usize>;

pub fn canonical_arcs(m: &MergedWindows) -> CanonicalArcs {
    crate::hom::labeled_arcs(&m.hom)
}

/// The subset route: resolvers of q_f^[l+k+1] applied in the given order.
pub fn resolver_route(r: &LocalRule, l: usize, k: usize, order: &[Side]) -> Result<CanonicalArcs> {
    let (q, _, _) = block_hom(r, k + l + 1)?;
    let mut stages: Vec<Resolver> = Vec::new();
    let mut h = q.clone();
    for &side in order {
        let res = induced_resolver(&h, side);
        h = res.hom.clone();
        stages.push(res);
    }
    // flatten each vertex of the last stage down to words of q's source
    let flatten = |v: usize| -> String {
        let mut cur = vec![v];
        for st in stages.iter().rev() {
            let mut next: Vec<usize> = cur.iter().flat_map(|&u| st.sets[u].iter().copied()).collect();
            next.sort_unstable();
            next.dedup();
            cur = next;
        }
        set_id(cur.iter().map(|&u| q.source.vertex_id(u)))
    };
    let names: Vec<String> = (0..h.source.num_vertices()).map(flatten).collect();
    let mut out = BTreeMap::new();
    for a in 0..h.source.num_arcs() {
        let key = (
            names[h.source.source(a)].clone(),
            names[h.source.target(a)].clone(),
            h.target.arc_id(h.arc_map[a]).to_string(),
        );
        *out.entry(key).or_insert(0) += 1;
    }
    Ok(out)
}

/// Whether the right-compatible sets generated by q_f^[k+1] are pairwise
/// disjoint and all maximal.
pub fn compatible_set_disjointness(r: &LocalRule, k: usize) -> Result<bool> {
    if !matches!(strict_right_mergibility(r), Some(s) if s <= k) {
        return precondition(format!("rule is not {k} right-mergible"));
    }
    let (q, _, _) = block_hom(r, k + 1)?;
    let fam = CompatibleFamily::of(&q, Side::Right);
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for (i, s) in fam.closure.iter().enumerate() {
        if !fam.maximal.contains(s) {
            return Ok(false);
        }
        for &u in s {
            if owner.insert(u, i).is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn identity_is_unchanged() {
        let r = samples::full_identity();
        let m = kitchens_pm(&r, 0, 0).unwrap();
        assert_eq!(m.hom.source.num_vertices(), 1);
        assert_eq!(m.hom.source.num_arcs(), 2);
        assert!(m.hom.is_right_resolving() && m.hom.is_left_resolving());
    }

    #[test]
    fn xor_classes_are_singletons() {
        let m = kitchens_plus(&samples::xor(), 0).unwrap();
        assert!(m.vertex_members.iter().all(|c| c.len() == 1));
        assert_eq!((m.hom.source.num_vertices(), m.hom.source.num_arcs()), (2, 4));
    }

    #[test]
    fn two_vertex_rule_routes_agree() {
        let r = samples::two_vertex_rule();
        assert!(kitchens_plus(&r, 0).is_err());
        let p = kitchens_plus(&r, 1).unwrap();
        assert_eq!(canonical_arcs(&p), resolver_route(&r, 0, 1, &[Side::Right]).unwrap());
        let pm = kitchens_pm(&r, 1, 1).unwrap();
        let c = canonical_arcs(&pm);
        assert_eq!(c, resolver_route(&r, 1, 1, &[Side::Right, Side::Left]).unwrap());
        assert_eq!(c, resolver_route(&r, 1, 1, &[Side::Left, Side::Right]).unwrap());
        assert!(compatible_set_disjointness(&r, 1).unwrap());
    }

    #[test]
    fn flip_rule_two_sided() {
        let m = kitchens_pm(&samples::flip_complement(), 2, 4).unwrap();
        assert!(m.hom.is_weakly_right_resolving());
        assert!(compatible_set_disjointness(&samples::flip_involution(), 4).unwrap());
    }
}
