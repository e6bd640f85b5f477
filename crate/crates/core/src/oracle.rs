//! Brute-force ground truth for small instances.
//!
//! Nothing here shares logic with the reduction rewrites or the
//! barely-sufficient search; it exists to check them. Every query is an
//! exhaustive search, so keep instances to a handful of vertices.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::graph::{Distribution, Move, MoveMultiset, PebbleFunction, Vertex, WeightedGraph};

/// Memoized `t`-reachability of a fixed goal, keyed by full distribution.
///
/// Every move strictly lowers the pebble count (weights are at least 2),
/// so the depth-first search terminates.
pub struct ReachOracle<'g> {
    graph: &'g WeightedGraph,
    goal: Vertex,
    t: u32,
    memo: HashMap<Vec<u32>, bool>,
}

impl<'g> ReachOracle<'g> {
    pub fn new(graph: &'g WeightedGraph, goal: Vertex, t: u32) -> Self {
        assert!(goal < graph.vertex_count(), "goal out of range");
        assert!(t >= 1, "t must be positive");
        ReachOracle {
            graph,
            goal,
            t,
            memo: HashMap::new(),
        }
    }

    pub fn reaches(&mut self, p: &Distribution) -> bool {
        let mut counts = p.counts().to_vec();
        self.search(&mut counts)
    }

    fn search(&mut self, p: &mut Vec<u32>) -> bool {
        if p[self.goal] >= self.t {
            return true;
        }
        if let Some(&known) = self.memo.get(p.as_slice()) {
            return known;
        }
        let mut found = false;
        'outer: for v in 0..p.len() {
            for (u, w) in self.graph.neighbors(v) {
                if p[v] >= w {
                    p[v] -= w;
                    p[u] += 1;
                    let hit = self.search(p);
                    p[v] += w;
                    p[u] -= 1;
                    if hit {
                        found = true;
                        break 'outer;
                    }
                }
            }
        }
        self.memo.insert(p.clone(), found);
        found
    }

    /// Every `t`-insufficient distribution, found by growing the
    /// downward-closed insufficient set one pebble at a time from the
    /// empty distribution.
    pub fn insufficient_region(&mut self) -> HashSet<Distribution> {
        let n = self.graph.vertex_count();
        let empty = Distribution::zeros(n);
        let mut region = HashSet::new();
        let mut seen = HashSet::new();
        seen.insert(empty.clone());
        region.insert(empty.clone());
        let mut stack = vec![empty];
        while let Some(p) = stack.pop() {
            for v in 0..n {
                let q = p.with(v, p[v] + 1);
                if seen.insert(q.clone()) && !self.reaches(&q) {
                    region.insert(q.clone());
                    stack.push(q);
                }
            }
        }
        region
    }
}

/// True iff some executable pebbling sequence puts `t` pebbles on `goal`.
pub fn reachable(g: &WeightedGraph, p: &Distribution, goal: Vertex, t: u32) -> bool {
    ReachOracle::new(g, goal, t).reaches(p)
}

/// True iff some acyclic move multiset `R` has `p_R >= 0` and
/// `p_R(goal) >= 1`.
///
/// Enumerates every multiset whose total pebble loss stays below `|p|`
/// (a multiset losing `|p|` or more pebbles leaves nothing on the goal).
pub fn reachable_acyclic(g: &WeightedGraph, p: &Distribution, goal: Vertex) -> bool {
    let arcs: Vec<(Move, u32)> = g
        .arcs()
        .map(|m| (m, g.weight(m.from, m.to).unwrap()))
        .collect();
    let mut search = MultisetSearch {
        g,
        goal,
        arcs: &arcs,
        counts: vec![0; arcs.len()],
        current: PebbleFunction::from(p).counts().to_vec(),
    };
    search.run(0, p.size().saturating_sub(1))
}

/// Depth-first enumeration of move counts per arc, keeping `p_R` up to
/// date as counts change.
struct MultisetSearch<'a> {
    g: &'a WeightedGraph,
    goal: Vertex,
    arcs: &'a [(Move, u32)],
    counts: Vec<u32>,
    current: Vec<i64>,
}

impl MultisetSearch<'_> {
    fn run(&mut self, index: usize, budget: u64) -> bool {
        if index == self.arcs.len() {
            return self.current[self.goal] >= 1
                && self.current.iter().all(|&c| c >= 0)
                && self.multiset().is_acyclic();
        }
        let (mv, w) = self.arcs[index];
        let loss = w as u64 - 1;
        let mut found = self.run(index + 1, budget);
        let mut used = 0;
        while !found && (used + 1) * loss <= budget {
            used += 1;
            self.counts[index] += 1;
            self.current[mv.from] -= w as i64;
            self.current[mv.to] += 1;
            found = self.run(index + 1, budget - used * loss);
        }
        self.current[mv.from] += used as i64 * w as i64;
        self.current[mv.to] -= used as i64;
        self.counts[index] = 0;
        found
    }

    fn multiset(&self) -> MoveMultiset {
        let mut s = MoveMultiset::new();
        for (&(mv, _), &c) in self.arcs.iter().zip(&self.counts) {
            s.add(self.g, mv, c).expect("arcs come from the graph");
        }
        s
    }
}

/// Least `m` such that every distribution of `m` pebbles `t`-reaches `goal`.
///
/// The insufficient set is downward closed, so it contains distributions
/// of every size below its maximum; the answer is that maximum plus one.
pub fn pi_oracle(g: &WeightedGraph, goal: Vertex, t: u32) -> u64 {
    let mut oracle = ReachOracle::new(g, goal, t);
    oracle
        .insufficient_region()
        .iter()
        .map(Distribution::size)
        .max()
        .unwrap_or(0)
        + 1
}

/// The barely sufficient distributions for `goal`: sufficient, and
/// insufficient after removing any single pebble.
///
/// Each one is an insufficient distribution plus one pebble, so the
/// candidates come from the insufficient region.
pub fn minimal_sufficient_oracle(g: &WeightedGraph, goal: Vertex) -> BTreeSet<Distribution> {
    let mut oracle = ReachOracle::new(g, goal, 1);
    let region = oracle.insufficient_region();
    let pi = region.iter().map(Distribution::size).max().unwrap_or(0) + 1;
    let bound = pi - 1 + g.max_weight().max(1) as u64;
    let n = g.vertex_count();
    let mut out = BTreeSet::new();
    for q in &region {
        for v in 0..n {
            let p = q.with(v, q[v] + 1);
            if out.contains(&p) || !oracle.reaches(&p) {
                continue;
            }
            let minimal = p.support().all(|w| !oracle.reaches(&p.with(w, p[w] - 1)));
            if minimal {
                assert!(p.size() <= bound, "barely sufficient {p} exceeds size bound {bound}");
                out.insert(p);
            }
        }
    }
    out
}

/// All distributions of exactly `size` pebbles on `n` vertices, in
/// lexicographically decreasing order.
pub fn distributions_of_size(n: usize, size: u32) -> impl Iterator<Item = Distribution> {
    let mut next = if n == 0 {
        None
    } else {
        let mut first = vec![0; n];
        first[0] = size;
        Some(first)
    };
    std::iter::from_fn(move || {
        let current = next.take()?;
        // Advance: move one pebble from the last nonzero position (before
        // the final slot) to its right neighbour, collecting the tail.
        let mut c = current.clone();
        let last = n - 1;
        let tail = c[last];
        c[last] = 0;
        if let Some(i) = (0..last).rev().find(|&i| c[i] > 0) {
            c[i] -= 1;
            c[i + 1] = tail + 1;
            next = Some(c);
        }
        Some(Distribution::new(current))
    })
}
