//! Shared proptest strategies.

use proptest::prelude::*;

use crate::graph::WeightedGraph;

/// Random connected weighted graph: a random spanning tree plus random
/// extra edges, `1..=max_n` vertices, weights in `2..=max_w`.
pub fn arb_graph(max_n: usize, max_w: u32) -> impl Strategy<Value = WeightedGraph> {
    (1usize..=max_n)
        .prop_flat_map(move |n| {
            let parents = (1..n).map(|v| 0..v).collect::<Vec<_>>();
            let extra = proptest::collection::vec(any::<bool>(), n * n);
            let weights = proptest::collection::vec(2u32..=max_w, n * n);
            (Just(n), parents, extra, weights)
        })
        .prop_map(|(n, parents, extra, weights)| {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if parents[v - 1] == u || extra[u * n + v] {
                        edges.push((u, v, weights[u * n + v]));
                    }
                }
            }
            WeightedGraph::new(n, edges).unwrap()
        })
}

/// Like [`arb_graph`] with a uniformly chosen goal vertex.
pub fn arb_rooted(max_n: usize, max_w: u32) -> impl Strategy<Value = (WeightedGraph, usize)> {
    arb_graph(max_n, max_w).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), 0..n)
    })
}
