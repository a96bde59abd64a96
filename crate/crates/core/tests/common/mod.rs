#![allow(dead_code)]

use markov_growth::{Arc, LabelledGraph};
use proptest::prelude::*;

pub const SYMBOLS: [&str; 2] = ["a", "b"];

/// Graph on `dim` vertices `v0..` over `{a, b}` with start `v0`.
pub fn graph(dim: usize, arcs: &[(usize, usize, usize)]) -> LabelledGraph {
    LabelledGraph::new(
        (0..dim).map(|i| format!("v{i}")).collect(),
        SYMBOLS.iter().map(|s| s.to_string()).collect(),
        arcs.iter()
            .map(|&(tail, head, label)| Arc { tail, head, label })
            .collect(),
        Some(0),
    )
    .unwrap()
}

/// Random graph: every ordered pair (loops included) gets 0, 1 or 2
/// parallel arcs with random labels.
pub fn arb_graph(max_vertices: usize) -> impl Strategy<Value = LabelledGraph> {
    (1..=max_vertices).prop_flat_map(|dim| {
        let mult = prop_oneof![6 => Just(0usize), 3 => Just(1usize), 1 => Just(2usize)];
        (
            Just(dim),
            prop::collection::vec(mult, dim * dim),
            prop::collection::vec(0..2usize, 2 * dim * dim),
        )
            .prop_map(|(dim, mult, labels)| {
                let mut arcs = Vec::new();
                for (i, &m) in mult.iter().enumerate() {
                    for k in 0..m {
                        arcs.push((i / dim, i % dim, labels[2 * i + k]));
                    }
                }
                graph(dim, &arcs)
            })
    })
}

/// Transitive closure by repeated relaxation; `r[u][v]` iff a path of
/// length >= 0 joins them.
pub fn reachability(g: &LabelledGraph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut r = vec![vec![false; n]; n];
    for (v, row) in r.iter_mut().enumerate() {
        row[v] = true;
    }
    for a in g.arcs() {
        r[a.tail][a.head] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}
