#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use pebbling::io::decode_graph6;
use pebbling::WeightedGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// graph6 lines of every connected graph on `n` vertices (up to isomorphism).
pub fn connected_lines(n: usize) -> Vec<String> {
    let text = std::fs::read_to_string(data_path(&format!("connected_{n}.g6"))).unwrap();
    text.lines().map(str::to_owned).collect()
}

pub fn connected_graphs(n: usize) -> Vec<WeightedGraph> {
    connected_lines(n).iter().map(|l| decode_graph6(l).unwrap()).collect()
}

/// All connected graphs with `1..=max_n` vertices.
pub fn connected_up_to(max_n: usize) -> Vec<WeightedGraph> {
    (1..=max_n).flat_map(connected_graphs).collect()
}

/// Published frequency of each pebbling number among connected graphs.
pub fn known_spectrum(n: usize) -> BTreeMap<u64, u64> {
    let rows: &[(u64, u64)] = match n {
        1 => &[(1, 1)],
        2 => &[(2, 1)],
        3 => &[(3, 1), (4, 1)],
        4 => &[(4, 3), (5, 2), (8, 1)],
        5 => &[(5, 10), (6, 5), (8, 2), (9, 3), (16, 1)],
        6 => &[(6, 45), (7, 15), (8, 13), (9, 16), (10, 13), (11, 1), (16, 4), (17, 4), (32, 1)],
        7 => &[
            (7, 322),
            (8, 113),
            (9, 125),
            (10, 129),
            (11, 68),
            (12, 4),
            (16, 23),
            (17, 35),
            (18, 22),
            (19, 2),
            (32, 4),
            (33, 5),
            (64, 1),
        ],
        8 => &[
            (8, 4494),
            (9, 1658),
            (10, 1870),
            (11, 1425),
            (12, 478),
            (13, 26),
            (14, 1),
            (16, 190),
            (17, 341),
            (18, 333),
            (19, 148),
            (20, 15),
            (32, 36),
            (33, 52),
            (34, 34),
            (35, 3),
            (64, 6),
            (65, 6),
            (128, 1),
        ],
        _ => panic!("no reference spectrum for {n} vertices"),
    };
    rows.iter().copied().collect()
}

/// Three spikes and a pendant path of length two on vertex 3; goal 0.
pub fn spider() -> WeightedGraph {
    WeightedGraph::unweighted(6, [(0, 3), (1, 3), (2, 3), (3, 4), (4, 5)]).unwrap()
}

/// Path 0-1-2-3-4-5 and the 5-cycle 3-6-7-8-9 sharing vertex 3.
pub fn path_and_cycle() -> WeightedGraph {
    WeightedGraph::unweighted(
        10,
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (6, 7), (7, 8), (8, 9), (9, 3)],
    )
    .unwrap()
}

/// Pendant goal 0 on a triangle 1-2-3.
pub fn kite() -> WeightedGraph {
    WeightedGraph::unweighted(4, [(0, 1), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// Triangle with one heavy edge 0-2 of weight 5.
pub fn heavy_triangle() -> WeightedGraph {
    WeightedGraph::new(3, [(0, 1, 2), (0, 2, 5), (1, 2, 2)]).unwrap()
}

pub fn cycle(k: usize) -> WeightedGraph {
    WeightedGraph::unweighted(k, (0..k).map(|i| (i, (i + 1) % k))).unwrap()
}

/// Hub 4 joined to the 4-cycle 0-1-2-3; the rim vertices have degree 3.
pub fn wheel5() -> WeightedGraph {
    WeightedGraph::unweighted(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4), (2, 4), (3, 4)]).unwrap()
}

/// `K_7` without the edge 0-1.
pub fn k7_minus_edge() -> WeightedGraph {
    let edges = (0..7).flat_map(|u| (u + 1..7).map(move |v| (u, v)));
    WeightedGraph::unweighted(7, edges.filter(|&e| e != (0, 1))).unwrap()
}

pub fn petersen() -> WeightedGraph {
    decode_graph6("IheA@GUAo").unwrap()
}

/// The 8-vertex Lemke graph.
pub fn lemke() -> WeightedGraph {
    decode_graph6("G?bDrw").unwrap()
}

/// Seeded random connected weighted graphs: a random spanning tree plus
/// random extra edges, weights drawn from `weights`.
pub fn random_weighted(count: usize, max_n: usize, weights: std::ops::RangeInclusive<u32>, seed: u64) -> Vec<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let mut edges = Vec::new();
            for v in 1..n {
                let parent = rng.gen_range(0..v);
                for u in 0..v {
                    if u == parent || rng.gen_bool(0.4) {
                        edges.push((u, v, rng.gen_range(weights.clone())));
                    }
                }
            }
            WeightedGraph::new(n, edges).unwrap()
        })
        .collect()
}
