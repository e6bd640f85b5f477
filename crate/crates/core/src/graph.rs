//! Weighted graphs, pebble distributions and the pebbling-move calculus.
//!
//! A pebbling move `(v -> u)` across an edge of weight `w` removes `w`
//! pebbles from `v` and adds one pebble to `u`. Its inverse removes one
//! pebble from `u` and adds `w` pebbles to `v`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Weight assumed for edges given without an explicit weight.
pub const DEFAULT_WEIGHT: u32 = 2;

/// Simple connected undirected graph with an integer weight `>= 2` on
/// every edge.
///
/// Stored as a dense weight matrix; `0` marks a missing edge. Graphs in
/// this crate are small (the exact solver is only practical well below
/// a dozen vertices), so the matrix keeps lookups trivial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    n: usize,
    weights: Vec<u32>,
}

impl WeightedGraph {
    /// Builds and validates a weighted graph on vertices `0..n`.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, u32)>,
    {
        let g = Self::build(n, edges)?;
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Builds a graph where every edge has the default weight.
    pub fn unweighted<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Self::new(n, edges.into_iter().map(|(u, v)| (u, v, DEFAULT_WEIGHT)))
    }

    /// Validates everything except connectivity.
    pub(crate) fn build<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, u32)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut g = WeightedGraph {
            n,
            weights: vec![0; n * n],
        };
        for (u, v, w) in edges {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(Error::VertexOutOfRange { vertex, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if w < 2 {
                return Err(Error::WeightTooSmall { u, v, weight: w });
            }
            if g.weights[u * n + v] != 0 {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.weights[u * n + v] = w;
            g.weights[v * n + u] = w;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> Option<u32> {
        if u >= self.n || v >= self.n {
            return None;
        }
        match self.weights[u * self.n + v] {
            0 => None,
            w => Some(w),
        }
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.weight(u, v).is_some()
    }

    /// Neighbors of `v` in ascending order, with the connecting weights.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, u32)> + '_ {
        self.weights[v * self.n..(v + 1) * self.n]
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0)
            .map(|(u, &w)| (u, w))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).count()
    }

    /// Undirected edges `(u, v, w)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, u32)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    /// Both orientations of every edge, sorted by `(from, to)`.
    pub fn arcs(&self) -> impl Iterator<Item = Move> + '_ {
        (0..self.n).flat_map(move |from| self.neighbors(from).map(move |(to, _)| Move { from, to }))
    }

    pub fn max_weight(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    /// True when every edge carries the default weight.
    pub fn is_unweighted(&self) -> bool {
        self.weights.iter().all(|&w| w == 0 || w == DEFAULT_WEIGHT)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for (u, _) in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.n && self.is_connected()
    }

    pub(crate) fn set_weight(&mut self, u: Vertex, v: Vertex, w: u32) {
        self.weights[u * self.n + v] = w;
        self.weights[v * self.n + u] = w;
    }

    /// Appends an isolated vertex and returns its index.
    pub(crate) fn push_vertex(&mut self) -> Vertex {
        let n = self.n + 1;
        let mut weights = vec![0; n * n];
        for u in 0..self.n {
            weights[u * n..u * n + self.n].copy_from_slice(&self.weights[u * self.n..(u + 1) * self.n]);
        }
        self.n = n;
        self.weights = weights;
        n - 1
    }

    /// Deletes the marked vertices and compacts indices. Returns the new
    /// graph and, for every old index, its new index if it survived.
    pub(crate) fn without_vertices(&self, removed: &[bool]) -> (WeightedGraph, Vec<Option<Vertex>>) {
        let mut remap = vec![None; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if !removed[v] {
                remap[v] = Some(next);
                next += 1;
            }
        }
        let m = next;
        let mut weights = vec![0; m * m];
        for (u, v, w) in self.edges() {
            if let (Some(a), Some(b)) = (remap[u], remap[v]) {
                weights[a * m + b] = w;
                weights[b * m + a] = w;
            }
        }
        (WeightedGraph { n: m, weights }, remap)
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    fn edge_weight_for(&self, mv: Move) -> Result<u32> {
        self.check_vertex(mv.from)?;
        self.check_vertex(mv.to)?;
        self.weight(mv.from, mv.to).ok_or(Error::InvalidMove {
            from: mv.from,
            to: mv.to,
        })
    }
}

impl fmt::Debug for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightedGraph(n={}, edges=[", self.n)?;
        for (i, (u, v, w)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if w == DEFAULT_WEIGHT {
                write!(f, "{u}-{v}")?;
            } else {
                write!(f, "{u}-{v}:{w}")?;
            }
        }
        write!(f, "])")
    }
}

/// A directed pebbling move `from -> to`. Also used as an arc of the
/// transition digraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub from: Vertex,
    pub to: Vertex,
}

impl Move {
    pub fn new(from: Vertex, to: Vertex) -> Self {
        Move { from, to }
    }

    pub fn reversed(self) -> Self {
        Move {
            from: self.to,
            to: self.from,
        }
    }
}

/// Result of comparing two distributions in the pointwise partial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// Nonnegative pebble count per vertex.
///
/// `Ord` is the lexicographic order on the count vector; the pebbling
/// partial order is [`Distribution::compare`] / [`Distribution::le`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distribution(Vec<u32>);

impl Distribution {
    pub fn new(counts: Vec<u32>) -> Self {
        Distribution(counts)
    }

    pub fn zeros(n: usize) -> Self {
        Distribution(vec![0; n])
    }

    /// One pebble on `v`, none elsewhere.
    pub fn singleton(n: usize, v: Vertex) -> Self {
        let mut d = Self::zeros(n);
        d.0[v] = 1;
        d
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn into_counts(self) -> Vec<u32> {
        self.0
    }

    /// Total number of pebbles.
    pub fn size(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().enumerate().filter(|(_, &c)| c > 0).map(|(v, _)| v)
    }

    pub fn set(&mut self, v: Vertex, count: u32) {
        self.0[v] = count;
    }

    /// Copy with `count` pebbles on `v`.
    pub fn with(&self, v: Vertex, count: u32) -> Self {
        let mut d = self.clone();
        d.0[v] = count;
        d
    }

    /// Pointwise `self <= other`. Panics on length mismatch.
    pub fn le(&self, other: &Distribution) -> bool {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn compare(&self, other: &Distribution) -> Result<Relation> {
        if self.len() != other.len() {
            return Err(Error::Dimension {
                left: self.len(),
                right: other.len(),
            });
        }
        let mut less = false;
        let mut greater = false;
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.cmp(b) {
                Ordering::Less => less = true,
                Ordering::Greater => greater = true,
                Ordering::Equal => {}
            }
        }
        Ok(match (less, greater) {
            (false, false) => Relation::Equal,
            (true, false) => Relation::Less,
            (false, true) => Relation::Greater,
            (true, true) => Relation::Incomparable,
        })
    }

    /// Applies the inverse of `mv`: one pebble leaves `mv.to` and
    /// `weight(mv)` pebbles arrive on `mv.from`.
    pub fn apply_inverse_move(&self, g: &WeightedGraph, mv: Move) -> Result<Distribution> {
        let w = g.edge_weight_for(mv)?;
        self.check_len(g)?;
        if self.0[mv.to] == 0 {
            return Err(Error::NoPebble {
                from: mv.from,
                to: mv.to,
            });
        }
        let mut d = self.clone();
        d.0[mv.to] -= 1;
        d.0[mv.from] += w;
        Ok(d)
    }

    fn check_len(&self, g: &WeightedGraph) -> Result<()> {
        if self.len() != g.vertex_count() {
            Err(Error::Dimension {
                left: self.len(),
                right: g.vertex_count(),
            })
        } else {
            Ok(())
        }
    }
}

impl Index<Vertex> for Distribution {
    type Output = u32;

    fn index(&self, v: Vertex) -> &u32 {
        &self.0[v]
    }
}

impl From<Vec<u32>> for Distribution {
    fn from(counts: Vec<u32>) -> Self {
        Distribution(counts)
    }
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Integer pebble count per vertex; negative entries are allowed and mark
/// states that no executable sequence can produce.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PebbleFunction(Vec<i64>);

impl PebbleFunction {
    pub fn new(counts: Vec<i64>) -> Self {
        PebbleFunction(counts)
    }

    pub fn counts(&self) -> &[i64] {
        &self.0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn to_distribution(&self) -> Option<Distribution> {
        self.is_nonnegative()
            .then(|| Distribution(self.0.iter().map(|&c| c as u32).collect()))
    }

    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn apply_move(&self, g: &WeightedGraph, mv: Move) -> Result<PebbleFunction> {
        let w = g.edge_weight_for(mv)?;
        if self.0.len() != g.vertex_count() {
            return Err(Error::Dimension {
                left: self.0.len(),
                right: g.vertex_count(),
            });
        }
        let mut p = self.clone();
        p.0[mv.from] -= w as i64;
        p.0[mv.to] += 1;
        Ok(p)
    }
}

impl From<&Distribution> for PebbleFunction {
    fn from(d: &Distribution) -> Self {
        PebbleFunction(d.0.iter().map(|&c| c as i64).collect())
    }
}

impl Index<Vertex> for PebbleFunction {
    type Output = i64;

    fn index(&self, v: Vertex) -> &i64 {
        &self.0[v]
    }
}

/// Multiset of pebbling moves, i.e. the transition digraph with arc
/// multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveMultiset {
    arcs: BTreeMap<Move, u32>,
}

impl MoveMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `count` copies of `mv`; the underlying edge must exist in `g`.
    pub fn add(&mut self, g: &WeightedGraph, mv: Move, count: u32) -> Result<()> {
        g.edge_weight_for(mv)?;
        if count > 0 {
            *self.arcs.entry(mv).or_insert(0) += count;
        }
        Ok(())
    }

    pub fn from_moves<I>(g: &WeightedGraph, moves: I) -> Result<Self>
    where
        I: IntoIterator<Item = Move>,
    {
        let mut s = Self::new();
        for mv in moves {
            s.add(g, mv, 1)?;
        }
        Ok(s)
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Total number of moves, counted with multiplicity.
    pub fn len(&self) -> u64 {
        self.arcs.values().map(|&c| c as u64).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Move, u32)> + '_ {
        self.arcs.iter().map(|(&m, &c)| (m, c))
    }

    /// Every move listed once per copy, in arc order.
    pub fn expanded(&self) -> Vec<Move> {
        self.arcs
            .iter()
            .flat_map(|(&m, &c)| std::iter::repeat_n(m, c as usize))
            .collect()
    }

    /// `p_S(v) = p(v) + indegree(v) - sum of weights over out-arcs of v`.
    pub fn apply_to(&self, g: &WeightedGraph, p: &PebbleFunction) -> PebbleFunction {
        let mut out = p.clone();
        for (&mv, &count) in &self.arcs {
            let w = g
                .weight(mv.from, mv.to)
                .expect("multiset arcs are validated against the graph");
            out.0[mv.from] -= (w as i64) * count as i64;
            out.0[mv.to] += count as i64;
        }
        out
    }

    /// True iff the transition digraph has no directed cycle.
    pub fn is_acyclic(&self) -> bool {
        let n = self
            .arcs
            .keys()
            .map(|m| m.from.max(m.to) + 1)
            .max()
            .unwrap_or(0);
        let mut indeg = vec![0usize; n];
        let mut out: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for mv in self.arcs.keys() {
            indeg[mv.to] += 1;
            out[mv.from].push(mv.to);
        }
        let mut ready: Vec<Vertex> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = ready.pop() {
            removed += 1;
            for &u in &out[v] {
                indeg[u] -= 1;
                if indeg[u] == 0 {
                    ready.push(u);
                }
            }
        }
        removed == n
    }
}
