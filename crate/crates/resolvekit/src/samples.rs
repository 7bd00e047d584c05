//! Small named endomorphisms used by tests, the acceptance suite and the CLI.

use crate::graph::Graph;
use crate::rule::{full_shift_rule, identity_rule, LocalRule};

/// Two vertices 1, 2 with arcs a,b: 1→1, c: 1→2, d: 2→1, e: 2→2.
pub fn two_vertex_graph() -> Graph {
    Graph::from_named(
        &["1", "2"],
        &[("a", "1", "1"), ("b", "1", "1"), ("c", "1", "2"), ("d", "2", "1"), ("e", "2", "2")],
    )
    .expect("valid graph")
}

/// A (0,1)-type onto endomorphism of [`two_vertex_graph`] with degrees
/// (0, -1, 0, -1).
pub fn two_vertex_rule() -> LocalRule {
    let g = two_vertex_graph();
    let table = [
        ("aa", "b"),
        ("ab", "c"),
        ("ac", "b"),
        ("ba", "d"),
        ("bb", "e"),
        ("bc", "d"),
        ("ce", "a"),
        ("cd", "a"),
        ("ee", "a"),
        ("ed", "a"),
        ("da", "b"),
        ("db", "c"),
        ("dc", "b"),
    ];
    LocalRule::new(&g, &g, 0, 1, |w| {
        let key: String = w.iter().map(|&a| g.arc_id(a)).collect();
        let (_, v) = table.iter().find(|(k, _)| *k == key).expect("table covers every window");
        g.arc_index(v).unwrap()
    })
    .expect("valid rule")
}

/// The (1,2)-type involution of the full 2-shift flipping the symbol at 0
/// exactly in the contexts 1?01.
pub fn flip_involution() -> LocalRule {
    full_shift_rule(&["0", "1"], 1, 2, |w| if w[0] == 1 && w[2] == 0 && w[3] == 1 { 1 - w[1] } else { w[1] })
        .expect("valid rule")
}

/// [`flip_involution`] followed by the bit complement.
pub fn flip_complement() -> LocalRule {
    full_shift_rule(&["0", "1"], 1, 2, |w| {
        let b = if w[0] == 1 && w[2] == 0 && w[3] == 1 { 1 - w[1] } else { w[1] };
        1 - b
    })
    .expect("valid rule")
}

pub fn bit_complement() -> LocalRule {
    full_shift_rule(&["0", "1"], 0, 0, |w| 1 - w[0]).expect("valid rule")
}

/// The left shift as a (0,1)-type rule.
pub fn shift() -> LocalRule {
    full_shift_rule(&["0", "1"], 0, 1, |w| w[1]).expect("valid rule")
}

/// a0 + a1 mod 2 as a (0,1)-type rule.
pub fn xor() -> LocalRule {
    full_shift_rule(&["0", "1"], 0, 1, |w| w[0] ^ w[1]).expect("valid rule")
}

/// a0 + a2 mod 2 as a (0,2)-type rule.
pub fn double_xor() -> LocalRule {
    full_shift_rule(&["0", "1"], 0, 2, |w| w[0] ^ w[2]).expect("valid rule")
}

pub fn full_identity() -> LocalRule {
    identity_rule(&Graph::full_shift(&["0", "1"]).expect("valid graph"))
}
