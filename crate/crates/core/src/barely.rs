//! Backward enumeration of barely sufficient distributions.
//!
//! Starting from a single pebble on the goal, inverse moves generate every
//! barely sufficient distribution. Each candidate carries the arcs it may
//! still use and the vertices it may no longer feed; the live queue is kept
//! an antichain by discarding candidates that dominate a live entry and
//! deleting live entries that dominate a new candidate.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::graph::{Distribution, Move, Vertex, WeightedGraph};
use crate::reduce::{find_ears, EarKind};

pub const DEFAULT_MAX_QUEUE: usize = 10_000_000;

/// Directed arcs of a graph with at most 64 vertices, stored as one bit
/// mask of allowed tails per head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcSet {
    tails: Vec<u64>,
}

impl ArcSet {
    pub fn all(g: &WeightedGraph) -> Self {
        let tails = (0..g.vertex_count())
            .map(|u| g.neighbors(u).fold(0u64, |mask, (v, _)| mask | 1 << v))
            .collect();
        ArcSet { tails }
    }

    pub fn contains(&self, mv: Move) -> bool {
        self.tails[mv.to] >> mv.from & 1 == 1
    }

    pub fn remove(&mut self, mv: Move) {
        self.tails[mv.to] &= !(1 << mv.from);
    }

    pub fn intersect(&mut self, other: &ArcSet) {
        for (a, b) in self.tails.iter_mut().zip(&other.tails) {
            *a &= b;
        }
    }

    /// Sources `v` of the allowed arcs `(v, to)`, ascending.
    pub fn tails_of(&self, to: Vertex) -> impl Iterator<Item = Vertex> {
        bits(self.tails[to])
    }

    pub fn len(&self) -> usize {
        self.tails.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.tails.iter().all(|&m| m == 0)
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = Vertex> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let v = mask.trailing_zeros() as Vertex;
        mask &= mask - 1;
        Some(v)
    })
}

/// One queue entry `(p, E, W)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateEntry {
    pub dist: Distribution,
    pub allowed_arcs: ArcSet,
    /// Bit mask of vertices that may not send pebbles any more.
    pub forbidden: u64,
    /// Set by the squish filter; the entry is expanded but never output.
    pub excluded_from_output: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub squish_filter: bool,
    pub use_arc_prune: bool,
    pub use_vertex_prune: bool,
    /// Test the vertex losing a pebble (`u`) against the forbidden set
    /// instead of the vertex gaining pebbles. Debug only: this variant
    /// misses barely sufficient distributions.
    pub literal_vertex_rule: bool,
    pub max_queue: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            squish_filter: true,
            use_arc_prune: true,
            use_vertex_prune: true,
            literal_vertex_rule: false,
            max_queue: DEFAULT_MAX_QUEUE,
        }
    }
}

impl EnumerationOptions {
    /// Exact barely sufficient set: no squish filter.
    pub fn unfiltered() -> Self {
        EnumerationOptions {
            squish_filter: false,
            ..Self::default()
        }
    }
}

/// Unweighted open ears of `g` for goal `x`, as vertex paths including
/// both ends.
pub fn squish_paths(g: &WeightedGraph, x: Vertex) -> Vec<Vec<Vertex>> {
    find_ears(g, x)
        .into_iter()
        .filter(|e| e.kind == EarKind::Open && e.unweighted)
        .map(|e| e.path())
        .collect()
}

/// True when the pebbles on every path of `paths` sit on one vertex or on
/// two adjacent vertices of the path.
pub fn squished_on(paths: &[Vec<Vertex>], p: &Distribution) -> bool {
    paths.iter().all(|path| {
        let mut occupied = path.iter().enumerate().filter(|&(_, &v)| p[v] > 0).map(|(i, _)| i);
        match (occupied.next(), occupied.next(), occupied.next()) {
            (_, None, _) => true,
            (Some(i), Some(j), None) => j == i + 1,
            _ => false,
        }
    })
}

pub fn is_squished(g: &WeightedGraph, x: Vertex, p: &Distribution) -> bool {
    squished_on(&squish_paths(g, x), p)
}

/// Work counters of one enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub appended: usize,
    pub expanded: usize,
    pub max_live: usize,
    pub output: usize,
}

/// The barely sufficient distributions of `g` for goal `x` (squished ones
/// plus possibly some further sufficient ones when the squish filter is
/// on), sorted lexicographically.
pub fn enumerate_barely(g: &WeightedGraph, x: Vertex, opts: &EnumerationOptions) -> Result<Vec<Distribution>> {
    enumerate_barely_with_stats(g, x, opts).map(|(out, _)| out)
}

pub fn enumerate_barely_with_stats(
    g: &WeightedGraph,
    x: Vertex,
    opts: &EnumerationOptions,
) -> Result<(Vec<Distribution>, EnumerationStats)> {
    let n = g.vertex_count();
    if x >= n {
        return Err(Error::VertexOutOfRange { vertex: x, n });
    }
    if n > 64 {
        return Err(Error::Domain(format!("{n} vertices exceed the limit of 64")));
    }
    let mut queue = Queue::new(g, x, opts);
    queue.run()?;
    Ok(queue.finish())
}

struct Slot {
    entry: CandidateEntry,
    support: u64,
    alive: bool,
}

struct Queue<'a> {
    g: &'a WeightedGraph,
    opts: &'a EnumerationOptions,
    paths: Vec<Vec<Vertex>>,
    slots: Vec<Slot>,
    index: HashMap<Distribution, usize>,
    /// Live slot ids by distribution size; dead ids are purged lazily.
    by_size: BTreeMap<u64, Vec<usize>>,
    live: usize,
    stats: EnumerationStats,
}

fn support_mask(p: &Distribution) -> u64 {
    p.support().fold(0, |m, v| m | 1 << v)
}

fn dominated_by(small: &Distribution, big: &Distribution) -> bool {
    small.counts().iter().zip(big.counts()).all(|(a, b)| a <= b)
}

impl<'a> Queue<'a> {
    fn new(g: &'a WeightedGraph, x: Vertex, opts: &'a EnumerationOptions) -> Self {
        let paths = if opts.squish_filter {
            squish_paths(g, x)
        } else {
            Vec::new()
        };
        let mut queue = Queue {
            g,
            opts,
            paths,
            slots: Vec::new(),
            index: HashMap::new(),
            by_size: BTreeMap::new(),
            live: 0,
            stats: EnumerationStats::default(),
        };
        let seed = CandidateEntry {
            dist: Distribution::singleton(g.vertex_count(), x),
            allowed_arcs: ArcSet::all(g),
            forbidden: 0,
            excluded_from_output: false,
        };
        queue.append(seed);
        queue
    }

    fn append(&mut self, mut entry: CandidateEntry) {
        entry.excluded_from_output = !squished_on(&self.paths, &entry.dist);
        let id = self.slots.len();
        let size = entry.dist.size();
        self.index.insert(entry.dist.clone(), id);
        self.by_size.entry(size).or_default().push(id);
        self.slots.push(Slot {
            support: support_mask(&entry.dist),
            entry,
            alive: true,
        });
        self.live += 1;
        self.stats.appended += 1;
        self.stats.max_live = self.stats.max_live.max(self.live);
    }

    fn kill(&mut self, id: usize) {
        let slot = &mut self.slots[id];
        if slot.alive {
            slot.alive = false;
            self.live -= 1;
            self.index.remove(&slot.entry.dist);
        }
    }

    fn run(&mut self) -> Result<()> {
        let mut next = 0;
        while next < self.slots.len() {
            if self.slots[next].alive {
                self.expand(next)?;
                if self.slots[next].entry.excluded_from_output {
                    self.kill(next);
                }
            }
            next += 1;
        }
        Ok(())
    }

    fn expand(&mut self, id: usize) -> Result<()> {
        self.stats.expanded += 1;
        let CandidateEntry {
            dist: p,
            allowed_arcs: arcs,
            forbidden,
            ..
        } = self.slots[id].entry.clone();
        let full = (!self.opts.use_arc_prune).then(|| ArcSet::all(self.g));
        let usable = full.as_ref().unwrap_or(&arcs);

        for u in p.support().collect::<Vec<_>>() {
            for v in usable.tails_of(u).collect::<Vec<_>>() {
                if self.opts.use_vertex_prune {
                    let tested = if self.opts.literal_vertex_rule { u } else { v };
                    if forbidden >> tested & 1 == 1 {
                        continue;
                    }
                }
                let mv = Move::new(v, u);
                let q = p.apply_inverse_move(self.g, mv)?;
                let mut f = arcs.clone();
                if self.opts.use_arc_prune {
                    f.remove(mv.reversed());
                }
                self.offer(CandidateEntry {
                    dist: q,
                    allowed_arcs: f,
                    forbidden: forbidden | 1 << u,
                    excluded_from_output: false,
                })?;
            }
        }
        Ok(())
    }

    fn offer(&mut self, candidate: CandidateEntry) -> Result<()> {
        if let Some(&same) = self.index.get(&candidate.dist) {
            let entry = &mut self.slots[same].entry;
            entry.allowed_arcs.intersect(&candidate.allowed_arcs);
            entry.forbidden &= candidate.forbidden;
            return Ok(());
        }
        let size = candidate.dist.size();
        let support = support_mask(&candidate.dist);

        for (_, ids) in self.by_size.range_mut(..size) {
            let slots = &self.slots;
            ids.retain(|&i| slots[i].alive);
            let below = ids.iter().any(|&i| {
                let s = &slots[i];
                s.support & !support == 0 && dominated_by(&s.entry.dist, &candidate.dist)
            });
            if below {
                return Ok(());
            }
        }

        let mut above = Vec::new();
        for (_, ids) in self.by_size.range_mut(size + 1..) {
            let slots = &self.slots;
            ids.retain(|&i| slots[i].alive);
            above.extend(ids.iter().copied().filter(|&i| {
                let s = &slots[i];
                support & !s.support == 0 && dominated_by(&candidate.dist, &s.entry.dist)
            }));
        }
        for i in above {
            self.kill(i);
        }

        if self.slots.len() >= self.opts.max_queue {
            return Err(Error::ResourceCap {
                limit: self.opts.max_queue,
                processed: self.stats.expanded,
                largest: self.by_size.keys().next_back().copied().unwrap_or(0),
            });
        }
        self.append(candidate);
        Ok(())
    }

    fn finish(self) -> (Vec<Distribution>, EnumerationStats) {
        let mut out: Vec<Distribution> = self
            .slots
            .into_iter()
            .filter(|s| s.alive && !s.entry.excluded_from_output)
            .map(|s| s.entry.dist)
            .collect();
        out.sort_unstable();
        let mut stats = self.stats;
        stats.output = out.len();
        (out, stats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{minimal_sufficient_oracle, reachable};
    use crate::testutil::arb_rooted;
    use proptest::prelude::*;

    fn d(v: &[u32]) -> Distribution {
        Distribution::new(v.to_vec())
    }

    fn kite() -> WeightedGraph {
        WeightedGraph::unweighted(4, [(0, 1), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn heavy_triangle() -> WeightedGraph {
        WeightedGraph::new(3, [(0, 1, 2), (0, 2, 5), (1, 2, 2)]).unwrap()
    }

    fn all_variants() -> Vec<EnumerationOptions> {
        let base = EnumerationOptions::unfiltered();
        vec![
            base,
            EnumerationOptions { use_arc_prune: false, ..base },
            EnumerationOptions { use_vertex_prune: false, ..base },
            EnumerationOptions { use_arc_prune: false, use_vertex_prune: false, ..base },
        ]
    }

    #[test]
    fn heavy_triangle_set() {
        let out = enumerate_barely(&heavy_triangle(), 0, &EnumerationOptions::unfiltered()).unwrap();
        assert_eq!(out, vec![d(&[0, 0, 4]), d(&[0, 1, 2]), d(&[0, 2, 0]), d(&[1, 0, 0])]);
    }

    #[test]
    fn kite_set_with_and_without_filter() {
        let expected = vec![
            d(&[0, 0, 0, 4]),
            d(&[0, 0, 2, 2]),
            d(&[0, 0, 4, 0]),
            d(&[0, 1, 0, 2]),
            d(&[0, 1, 2, 0]),
            d(&[0, 2, 0, 0]),
            d(&[1, 0, 0, 0]),
        ];
        for opts in all_variants() {
            assert_eq!(enumerate_barely(&kite(), 0, &opts).unwrap(), expected);
        }
        assert_eq!(enumerate_barely(&kite(), 0, &EnumerationOptions::default()).unwrap(), expected);
    }

    #[test]
    fn single_vertex() {
        let k1 = WeightedGraph::unweighted(1, []).unwrap();
        assert_eq!(enumerate_barely(&k1, 0, &EnumerationOptions::default()).unwrap(), vec![d(&[1])]);
    }

    #[test]
    fn literal_vertex_rule_misses_a_member() {
        let opts = EnumerationOptions {
            literal_vertex_rule: true,
            ..EnumerationOptions::unfiltered()
        };
        let out = enumerate_barely(&heavy_triangle(), 0, &opts).unwrap();
        assert!(!out.contains(&d(&[0, 0, 4])));
    }

    #[test]
    fn queue_cap_is_an_error() {
        let opts = EnumerationOptions {
            max_queue: 3,
            ..EnumerationOptions::unfiltered()
        };
        let err = enumerate_barely(&kite(), 0, &opts).unwrap_err();
        assert!(err.is_resource_cap());
    }

    #[test]
    fn squish_predicate() {
        // Square 3-6-7-8-9-3 with goal 6 leaves the open ear 6-7-8-9-3.
        let g = WeightedGraph::unweighted(
            10,
            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (6, 7), (7, 8), (8, 9), (9, 3)],
        )
        .unwrap();
        let mut p = Distribution::zeros(10);
        p.set(7, 3);
        p.set(8, 1);
        let paths = squish_paths(&g, 6);
        assert!(paths.contains(&vec![3, 9, 8, 7, 6]));
        assert!(squished_on(&paths, &p));
        let mut q = Distribution::zeros(10);
        q.set(7, 1);
        q.set(9, 1);
        assert!(!squished_on(&paths, &q));
        assert!(is_squished(&kite(), 0, &d(&[0, 1, 3, 3])));
    }

    #[test]
    fn weighted_ears_are_not_squished() {
        // The open ear 0-1-2-3 carries a weight-3 edge and is ignored.
        let g = WeightedGraph::new(4, [(0, 1, 2), (1, 2, 3), (2, 3, 2), (0, 3, 2)]).unwrap();
        assert!(squish_paths(&g, 0).is_empty());
        assert!(is_squished(&g, 0, &d(&[0, 1, 0, 1])));
    }

    #[test]
    fn unweighted_sizes_grow_in_queue_order() {
        // With unit losses every child is one pebble larger than its parent,
        // so the growing queue is ordered by size.
        let g = WeightedGraph::unweighted(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]).unwrap();
        let opts = EnumerationOptions::unfiltered();
        let mut queue = Queue::new(&g, 0, &opts);
        queue.run().unwrap();
        let sizes: Vec<u64> = queue.slots.iter().map(|s| s.entry.dist.size()).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_oracle((g, x) in arb_rooted(5, 3)) {
            let expected: Vec<_> = minimal_sufficient_oracle(&g, x).into_iter().collect();
            for opts in all_variants() {
                prop_assert_eq!(&enumerate_barely(&g, x, &opts).unwrap(), &expected);
            }
        }

        #[test]
        fn filtered_output_is_sufficient_and_covers_squished((g, x) in arb_rooted(6, 2)) {
            let exact = enumerate_barely(&g, x, &EnumerationOptions::unfiltered()).unwrap();
            let filtered = enumerate_barely(&g, x, &EnumerationOptions::default()).unwrap();
            let paths = squish_paths(&g, x);
            for p in &filtered {
                prop_assert!(reachable(&g, p, x, 1));
            }
            for p in exact.iter().filter(|p| squished_on(&paths, p)) {
                prop_assert!(filtered.binary_search(p).is_ok());
            }
        }

        #[test]
        fn children_grow_by_loss((g, x) in arb_rooted(5, 4)) {
            let opts = EnumerationOptions::unfiltered();
            let mut queue = Queue::new(&g, x, &opts);
            queue.run().unwrap();
            let root_size = 1;
            for s in &queue.slots {
                prop_assert!(s.entry.dist.size() >= root_size);
                prop_assert_eq!(s.support, support_mask(&s.entry.dist));
            }
            // The live entries form an antichain.
            let live: Vec<_> = queue.slots.iter().filter(|s| s.alive).collect();
            for a in &live {
                for b in &live {
                    if a.entry.dist != b.entry.dist {
                        prop_assert!(!dominated_by(&a.entry.dist, &b.entry.dist));
                    }
                }
            }
        }
    }
}
