mod common;

use pebbling::oracle::{distributions_of_size, minimal_sufficient_oracle, pi_oracle, reachable, reachable_acyclic, ReachOracle};
use pebbling::{Distribution, WeightedGraph};
use proptest::prelude::*;

use common::*;

/// Every assignment of weights 2 and 3 to the edges of `g`.
fn weightings(g: &WeightedGraph) -> Vec<WeightedGraph> {
    let edges: Vec<_> = g.edges().collect();
    (0..1u32 << edges.len())
        .map(|mask| {
            let weighted = edges
                .iter()
                .enumerate()
                .map(|(i, &(u, v, _))| (u, v, 2 + (mask >> i & 1)));
            WeightedGraph::new(g.vertex_count(), weighted).unwrap()
        })
        .collect()
}

#[test]
fn acyclic_multisets_decide_reachability() {
    let mut checked = 0;
    for base in connected_up_to(4) {
        for g in weightings(&base) {
            let n = g.vertex_count();
            for x in 0..n {
                let mut oracle = ReachOracle::new(&g, x, 1);
                for size in 0..=6 {
                    for p in distributions_of_size(n, size) {
                        assert_eq!(
                            reachable_acyclic(&g, &p, x),
                            oracle.reaches(&p),
                            "{g:?} goal {x} distribution {p}"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn pebbling_number_witnesses() {
    for g in connected_up_to(4).iter().flat_map(weightings) {
        let n = g.vertex_count();
        for x in 0..n {
            for t in 1..=2 {
                let m = pi_oracle(&g, x, t) as u32;
                let mut oracle = ReachOracle::new(&g, x, t);
                assert!(distributions_of_size(n, m).all(|p| oracle.reaches(&p)));
                assert!(!distributions_of_size(n, m - 1).all(|p| oracle.reaches(&p)));
            }
        }
    }
}

#[test]
fn sufficient_distributions_dominate_a_minimal_one() {
    for g in connected_up_to(4) {
        let n = g.vertex_count();
        for x in 0..n {
            let minimal = minimal_sufficient_oracle(&g, x);
            let mut oracle = ReachOracle::new(&g, x, 1);
            for p in &minimal {
                assert!(oracle.reaches(p));
            }
            for size in 0..=8 {
                for p in distributions_of_size(n, size) {
                    let covered = minimal.iter().any(|b| b.le(&p));
                    assert_eq!(covered, oracle.reaches(&p), "{g:?} goal {x} distribution {p}");
                }
            }
        }
    }
}

fn graph_and_pair() -> impl Strategy<Value = (WeightedGraph, usize, Distribution, Distribution)> {
    (1usize..=5)
        .prop_flat_map(|n| {
            let graphs = connected_graphs(n);
            (
                proptest::sample::select(graphs),
                0..n,
                proptest::collection::vec(0u32..5, n),
                proptest::collection::vec(0u32..3, n),
            )
        })
        .prop_map(|(g, x, low, extra)| {
            let high: Vec<u32> = low.iter().zip(&extra).map(|(a, b)| a + b).collect();
            (g, x, Distribution::new(low), Distribution::new(high))
        })
}

proptest! {
    #[test]
    fn reachability_is_monotone((g, x, low, high) in graph_and_pair()) {
        if reachable(&g, &low, x, 1) {
            prop_assert!(reachable(&g, &high, x, 1));
        }
        if reachable(&g, &low, x, 2) {
            prop_assert!(reachable(&g, &high, x, 2));
        }
    }
}
