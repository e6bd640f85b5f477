//! Goal-directed graph rewrites.
//!
//! A branch `K` hanging off a cut vertex `v` whose `t`-pebbling number at
//! `v` is linear, `pi_t(K, v) = a*t + b`, can be replaced by a single
//! pendant edge of weight `a`; the pebbling number of the goal drops by
//! exactly `b`. Only the three shapes with proven linear forms are used:
//! stars, three-vertex paths and unweighted cycles. Cut ears collapse to a
//! single edge carrying the product of their weights.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Vertex, WeightedGraph, DEFAULT_WEIGHT};

/// `pi_t(branch, attachment) = a*t + b` for every `t >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub a: u64,
    pub b: u64,
}

impl LinearForm {
    pub fn at(&self, t: u64) -> u64 {
        self.a * t + self.b
    }
}

/// Linear form of the cycle `C_k` seen from any of its vertices.
pub fn cycle_linear_form(k: usize) -> Result<LinearForm> {
    if k < 3 {
        return Err(Error::Domain(format!("cycle length {k} is below 3")));
    }
    let half = (k / 2) as u32;
    let a = 1u64
        .checked_shl(half)
        .filter(|_| half < 63)
        .ok_or_else(|| Error::Domain(format!("cycle length {k} is too large")))?;
    if k.is_multiple_of(2) {
        Ok(LinearForm { a, b: 0 })
    } else {
        // pi_1(C_{2n+1}) = 1 + 2 * floor(2^(n+1) / 3)
        let b = 1 + 2 * ((2 * a) / 3) - a;
        Ok(LinearForm { a, b })
    }
}

/// Linear form of a weighted star seen from its center.
pub fn star_linear_form(weights: &[u32]) -> Result<LinearForm> {
    let (max_at, &a) = weights
        .iter()
        .enumerate()
        .max_by_key(|&(_, w)| w)
        .ok_or_else(|| Error::Domain("star needs at least one spike".into()))?;
    check_weights(weights)?;
    let b = weights
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != max_at)
        .map(|(_, &w)| w as u64 - 1)
        .sum();
    Ok(LinearForm { a: a as u64, b })
}

/// Linear form of the path `x - v1 - v2` seen from `x`.
pub fn path3_linear_form(w1: u32, w2: u32) -> Result<LinearForm> {
    check_weights(&[w1, w2])?;
    Ok(LinearForm {
        a: w1 as u64 * w2 as u64,
        b: 0,
    })
}

fn check_weights(weights: &[u32]) -> Result<()> {
    match weights.iter().find(|&&w| w < 2) {
        Some(&w) => Err(Error::Domain(format!("weight {w} is below 2"))),
        None => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EarKind {
    Closed,
    Cut,
    Open,
}

/// A maximal thread of degree-2 vertices avoiding the goal, together with
/// its two outside neighbors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ear {
    /// Thread vertices in path order.
    pub inner: Vec<Vertex>,
    /// Outside neighbors of the first and last inner vertex.
    pub ends: (Vertex, Vertex),
    pub kind: EarKind,
    /// Every ear edge has the default weight.
    pub unweighted: bool,
}

impl Ear {
    /// `v_0, inner..., v_{n+1}`.
    pub fn path(&self) -> Vec<Vertex> {
        let mut path = Vec::with_capacity(self.inner.len() + 2);
        path.push(self.ends.0);
        path.extend_from_slice(&self.inner);
        path.push(self.ends.1);
        path
    }

    pub fn edge_weights(&self, g: &WeightedGraph) -> Vec<u32> {
        self.path()
            .windows(2)
            .map(|e| g.weight(e[0], e[1]).expect("ear edges exist"))
            .collect()
    }
}

/// Cut vertices of a connected graph.
pub fn articulation_points(g: &WeightedGraph) -> Vec<bool> {
    struct Dfs<'a> {
        g: &'a WeightedGraph,
        order: Vec<usize>,
        low: Vec<usize>,
        clock: usize,
        cut: Vec<bool>,
    }

    impl Dfs<'_> {
        fn visit(&mut self, v: Vertex, parent: Option<Vertex>) {
            self.clock += 1;
            self.order[v] = self.clock;
            self.low[v] = self.clock;
            let mut children = 0;
            let neighbors: Vec<Vertex> = self.g.neighbors(v).map(|(u, _)| u).collect();
            for u in neighbors {
                if self.order[u] == 0 {
                    children += 1;
                    self.visit(u, Some(v));
                    self.low[v] = self.low[v].min(self.low[u]);
                    if parent.is_some() && self.low[u] >= self.order[v] {
                        self.cut[v] = true;
                    }
                } else if Some(u) != parent {
                    self.low[v] = self.low[v].min(self.order[u]);
                }
            }
            if parent.is_none() && children > 1 {
                self.cut[v] = true;
            }
        }
    }

    let n = g.vertex_count();
    let mut dfs = Dfs {
        g,
        order: vec![0; n],
        low: vec![0; n],
        clock: 0,
        cut: vec![false; n],
    };
    for v in 0..n {
        if dfs.order[v] == 0 {
            dfs.visit(v, None);
        }
    }
    dfs.cut
}

/// All ears of `g` with respect to the goal, each oriented so that
/// `ends.0 <= ends.1` (closed ears: first inner vertex below the last).
pub fn find_ears(g: &WeightedGraph, goal: Vertex) -> Vec<Ear> {
    let n = g.vertex_count();
    let on_thread: Vec<bool> = (0..n).map(|v| v != goal && g.degree(v) == 2).collect();
    let cut = articulation_points(g);
    let mut seen = vec![false; n];
    let mut ears = Vec::new();

    for start in 0..n {
        if !on_thread[start] || seen[start] {
            continue;
        }
        // Walk to one end of the thread.
        let mut prev = None;
        let mut cur = start;
        loop {
            let next = g
                .neighbors(cur)
                .map(|(u, _)| u)
                .find(|&u| on_thread[u] && Some(u) != prev && u != start);
            match next {
                Some(u) => {
                    prev = Some(cur);
                    cur = u;
                }
                None => break,
            }
        }
        // Walk back collecting the thread.
        let mut inner = vec![cur];
        seen[cur] = true;
        let mut prev = None;
        loop {
            let last = *inner.last().unwrap();
            let next = g
                .neighbors(last)
                .map(|(u, _)| u)
                .find(|&u| on_thread[u] && !seen[u] && Some(u) != prev);
            match next {
                Some(u) => {
                    seen[u] = true;
                    prev = Some(last);
                    inner.push(u);
                }
                None => break,
            }
        }

        let outside = |v: Vertex, skip: Option<Vertex>| -> Vec<Vertex> {
            g.neighbors(v)
                .map(|(u, _)| u)
                .filter(|&u| Some(u) != skip && !(on_thread[u] && inner.contains(&u)))
                .collect()
        };
        let (first, last) = (inner[0], *inner.last().unwrap());
        let (v0, v_end) = if inner.len() == 1 {
            let out = outside(first, None);
            (out[0], out[1])
        } else {
            (outside(first, None)[0], outside(last, None)[0])
        };

        let kind = if v0 == v_end {
            EarKind::Closed
        } else if inner.iter().all(|&v| cut[v]) {
            EarKind::Cut
        } else {
            EarKind::Open
        };
        let mut ear = Ear {
            inner,
            ends: (v0, v_end),
            kind,
            unweighted: true,
        };
        ear.unweighted = ear.edge_weights(g).iter().all(|&w| w == DEFAULT_WEIGHT);
        let flip = v0 > v_end || (v0 == v_end && ear.inner[0] > *ear.inner.last().unwrap());
        if flip {
            ear.inner.reverse();
            ear.ends = (v_end, v0);
        }
        ears.push(ear);
    }
    ears
}

/// Identity of a vertex of a reduced graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexOrigin {
    /// Vertex of the input graph.
    Original(Vertex),
    /// Pendant vertex created by the `i`-th attaching rewrite.
    Fresh(usize),
}

impl fmt::Display for VertexOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexOrigin::Original(v) => write!(f, "{v}"),
            VertexOrigin::Fresh(i) => write!(f, "u{i}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteKind {
    /// Caller-supplied branch with a known linear form.
    Branch,
    CutEar,
    ClosedEar,
    LeafStar,
    LeafPath,
}

/// One applied rewrite. Vertex indices refer to the graph as it was just
/// before the rewrite, so a trace replays in order from the input graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewrite {
    pub kind: RewriteKind,
    pub removed: Vec<Vertex>,
    /// Vertex the new edge hangs from.
    pub anchor: Vertex,
    /// Other endpoint of the new edge for a cut ear; `None` means a fresh
    /// pendant vertex.
    pub other_end: Option<Vertex>,
    pub weight: u32,
    pub offset: u64,
}

impl fmt::Display for Rewrite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let removed: Vec<String> = self.removed.iter().map(Vertex::to_string).collect();
        write!(f, "{:?} removed [{}] ", self.kind, removed.join(" "))?;
        match self.other_end {
            Some(b) => write!(f, "edge {}-{}", self.anchor, b)?,
            None => write!(f, "pendant at {}", self.anchor)?,
        }
        write!(f, " weight {} offset {}", self.weight, self.offset)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionLedger {
    /// Sum of the `b` terms of every applied rewrite.
    pub offset: u64,
    pub trace: Vec<Rewrite>,
    /// Current vertex index -> identity in the input graph.
    pub name_map: Vec<VertexOrigin>,
}

impl ReductionLedger {
    fn identity(n: usize) -> Self {
        ReductionLedger {
            offset: 0,
            trace: Vec::new(),
            name_map: (0..n).map(VertexOrigin::Original).collect(),
        }
    }
}

/// A graph under reduction for a fixed goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedProblem {
    pub graph: WeightedGraph,
    pub goal: Vertex,
    pub ledger: ReductionLedger,
    /// Pebbling number of the original goal when the residue has a closed
    /// form; already includes the ledger offset.
    pub terminal_value: Option<u64>,
}

impl ReducedProblem {
    /// Starting point with no rewrites applied.
    pub fn new(graph: WeightedGraph, goal: Vertex) -> Result<Self> {
        if goal >= graph.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex: goal,
                n: graph.vertex_count(),
            });
        }
        let ledger = ReductionLedger::identity(graph.vertex_count());
        Ok(ReducedProblem {
            graph,
            goal,
            ledger,
            terminal_value: None,
        })
    }

    /// Replaces `branch`, which hangs off the cut vertex `v`, by a pendant
    /// edge of weight `form.a`; the offset grows by `form.b`.
    pub fn attach_linear_branch(&mut self, v: Vertex, branch: &[Vertex], form: LinearForm) -> Result<()> {
        self.attach(v, branch, form, RewriteKind::Branch)
    }

    fn attach(&mut self, v: Vertex, branch: &[Vertex], form: LinearForm, kind: RewriteKind) -> Result<()> {
        let n = self.graph.vertex_count();
        if branch.is_empty() {
            return Err(Error::RewritePrecondition("empty branch".into()));
        }
        let mut in_branch = vec![false; n];
        for &b in branch {
            if b >= n {
                return Err(Error::VertexOutOfRange { vertex: b, n });
            }
            in_branch[b] = true;
        }
        if in_branch[self.goal] {
            return Err(Error::RewritePrecondition(format!(
                "branch contains the goal {}",
                self.goal
            )));
        }
        if v >= n || in_branch[v] {
            return Err(Error::RewritePrecondition(format!(
                "attachment vertex {v} is not outside the branch"
            )));
        }
        for &b in branch {
            if let Some((u, _)) = self.graph.neighbors(b).find(|&(u, _)| u != v && !in_branch[u]) {
                return Err(Error::RewritePrecondition(format!(
                    "vertex {v} does not separate the branch: {b}-{u}"
                )));
            }
        }
        let weight = u32::try_from(form.a)
            .ok()
            .filter(|&w| w >= 2)
            .ok_or_else(|| Error::Domain(format!("pendant weight {} out of range", form.a)))?;

        let fresh_id = self
            .ledger
            .trace
            .iter()
            .filter(|r| r.other_end.is_none())
            .count();
        let mut sorted = branch.to_vec();
        sorted.sort_unstable();
        self.ledger.trace.push(Rewrite {
            kind,
            removed: sorted,
            anchor: v,
            other_end: None,
            weight,
            offset: form.b,
        });
        self.ledger.offset += form.b;

        self.remove(&in_branch);
        let v = self.remapped(v, &in_branch);
        let u = self.graph.push_vertex();
        self.graph.set_weight(v, u, weight);
        self.ledger.name_map.push(VertexOrigin::Fresh(fresh_id));
        Ok(())
    }

    /// Index of `v` after removing the marked vertices.
    fn remapped(&self, v: Vertex, removed: &[bool]) -> Vertex {
        v - removed[..v].iter().filter(|&&r| r).count()
    }

    fn remove(&mut self, removed: &[bool]) {
        let (graph, remap) = self.graph.without_vertices(removed);
        self.goal = remap[self.goal].expect("goal is never removed");
        self.graph = graph;
        let names = std::mem::take(&mut self.ledger.name_map);
        self.ledger.name_map = names
            .into_iter()
            .zip(removed)
            .filter(|(_, &r)| !r)
            .map(|(name, _)| name)
            .collect();
    }

    /// Replaces a cut ear by one edge between its ends weighted with the
    /// product of the ear's weights.
    pub fn substitute_cut_ear(&mut self, ear: &Ear) -> Result<()> {
        if ear.kind != EarKind::Cut {
            return Err(Error::RewritePrecondition(format!("{:?} ear is not a cut ear", ear.kind)));
        }
        if ear.inner.contains(&self.goal) {
            return Err(Error::RewritePrecondition("goal is an inner ear vertex".into()));
        }
        let (a, b) = ear.ends;
        assert!(
            !self.graph.has_edge(a, b),
            "ends of a cut ear cannot already be adjacent"
        );
        let weight = ear
            .edge_weights(&self.graph)
            .iter()
            .try_fold(1u32, |acc, &w| acc.checked_mul(w))
            .ok_or_else(|| Error::Domain("cut ear weight overflows".into()))?;

        let n = self.graph.vertex_count();
        let mut removed = vec![false; n];
        for &v in &ear.inner {
            removed[v] = true;
        }
        let mut sorted = ear.inner.clone();
        sorted.sort_unstable();
        self.ledger.trace.push(Rewrite {
            kind: RewriteKind::CutEar,
            removed: sorted,
            anchor: a,
            other_end: Some(b),
            weight,
            offset: 0,
        });
        let (a, b) = (self.remapped(a, &removed), self.remapped(b, &removed));
        self.remove(&removed);
        self.graph.set_weight(a, b, weight);
        Ok(())
    }

    /// Replaces an unweighted closed ear by a pendant edge using the cycle
    /// formula. Returns `false` (and changes nothing) for weighted ears.
    pub fn substitute_closed_ear(&mut self, ear: &Ear) -> Result<bool> {
        if ear.kind != EarKind::Closed {
            return Err(Error::RewritePrecondition(format!(
                "{:?} ear is not a closed ear",
                ear.kind
            )));
        }
        if !ear.unweighted {
            return Ok(false);
        }
        // The cycle consists of the inner vertices plus the shared end.
        let form = cycle_linear_form(ear.inner.len() + 1)?;
        self.attach(ear.ends.0, &ear.inner, form, RewriteKind::ClosedEar)?;
        Ok(true)
    }

    /// Applies one leaf rewrite if any is available: several leaves on a
    /// non-goal vertex become one pendant (star form), or a pendant path of
    /// length two becomes one pendant edge (path form).
    pub fn collapse_leaves(&mut self) -> Result<bool> {
        let g = &self.graph;
        let n = g.vertex_count();
        let goal = self.goal;
        let is_leaf = |v: Vertex| v != goal && g.degree(v) == 1;

        for v in (0..n).filter(|&v| v != goal) {
            let leaves: Vec<(Vertex, u32)> = g.neighbors(v).filter(|&(u, _)| is_leaf(u)).collect();
            if leaves.len() >= 2 {
                let weights: Vec<u32> = leaves.iter().map(|&(_, w)| w).collect();
                let branch: Vec<Vertex> = leaves.iter().map(|&(u, _)| u).collect();
                let form = star_linear_form(&weights)?;
                self.attach(v, &branch, form, RewriteKind::LeafStar)?;
                return Ok(true);
            }
        }

        for leaf in (0..n).filter(|&v| is_leaf(v)) {
            let (mid, w_outer) = g.neighbors(leaf).next().expect("leaf has a neighbor");
            if mid == goal || g.degree(mid) != 2 {
                continue;
            }
            let (v, w_inner) = g
                .neighbors(mid)
                .find(|&(u, _)| u != leaf)
                .expect("degree-2 vertex has a second neighbor");
            let form = path3_linear_form(w_inner, w_outer)?;
            self.attach(v, &[mid, leaf], form, RewriteKind::LeafPath)?;
            return Ok(true);
        }
        Ok(false)
    }

    /// Closed-form pebbling number when the residue is a single vertex, a
    /// star centered at the goal, or a path starting at the goal.
    fn detect_terminal(&self) -> Result<Option<u64>> {
        let g = &self.graph;
        let n = g.vertex_count();
        let x = self.goal;
        let offset = self.ledger.offset;
        if n == 1 {
            return Ok(Some(1 + offset));
        }
        if g.degree(x) == n - 1 && (0..n).all(|v| v == x || g.degree(v) == 1) {
            let weights: Vec<u32> = g.neighbors(x).map(|(_, w)| w).collect();
            return Ok(Some(star_linear_form(&weights)?.at(1) + offset));
        }
        if n == 3 && g.degree(x) == 1 {
            let (mid, w1) = g.neighbors(x).next().unwrap();
            if let Some((_, w2)) = g.neighbors(mid).find(|&(u, _)| u != x) {
                if g.degree(mid) == 2 {
                    return Ok(Some(path3_linear_form(w1, w2)?.at(1) + offset));
                }
            }
        }
        Ok(None)
    }
}

/// Applies cut-ear, closed-ear and leaf rewrites until none applies, then
/// checks whether the residue has a closed form.
pub fn simplify(g: &WeightedGraph, goal: Vertex) -> Result<ReducedProblem> {
    let mut problem = ReducedProblem::new(g.clone(), goal)?;
    loop {
        let mut changed = false;
        while let Some(ear) = find_ears(&problem.graph, problem.goal)
            .into_iter()
            .find(|e| e.kind == EarKind::Cut)
        {
            problem.substitute_cut_ear(&ear)?;
            changed = true;
        }
        while let Some(ear) = find_ears(&problem.graph, problem.goal)
            .into_iter()
            .find(|e| e.kind == EarKind::Closed && e.unweighted)
        {
            problem.substitute_closed_ear(&ear)?;
            changed = true;
        }
        while problem.collapse_leaves()? {
            changed = true;
        }
        if !changed {
            break;
        }
    }
    problem.terminal_value = problem.detect_terminal()?;
    Ok(problem)
}

/// Replays a rewrite trace on the input graph.
pub fn replay(g: &WeightedGraph, goal: Vertex, trace: &[Rewrite]) -> Result<ReducedProblem> {
    let mut problem = ReducedProblem::new(g.clone(), goal)?;
    for step in trace {
        match step.other_end {
            Some(b) => {
                let inner = step.removed.clone();
                let ends = (step.anchor, b);
                let mut ear = Ear {
                    inner,
                    ends,
                    kind: EarKind::Cut,
                    unweighted: false,
                };
                // Order the inner vertices along the path for the weight product.
                ear.inner = order_path(&problem.graph, ends.0, &step.removed);
                problem.substitute_cut_ear(&ear)?;
            }
            None => {
                let form = LinearForm {
                    a: step.weight as u64,
                    b: step.offset,
                };
                problem.attach(step.anchor, &step.removed, form, step.kind)?;
            }
        }
    }
    problem.terminal_value = problem.detect_terminal()?;
    Ok(problem)
}

fn order_path(g: &WeightedGraph, start: Vertex, inner: &[Vertex]) -> Vec<Vertex> {
    let mut order = Vec::with_capacity(inner.len());
    let mut prev = start;
    let mut cur = g
        .neighbors(start)
        .map(|(u, _)| u)
        .find(|u| inner.contains(u))
        .expect("cut ear touches its end");
    loop {
        order.push(cur);
        let next = g
            .neighbors(cur)
            .map(|(u, _)| u)
            .find(|&u| u != prev && inner.contains(&u) && !order.contains(&u));
        match next {
            Some(u) => {
                prev = cur;
                cur = u;
            }
            None => break,
        }
    }
    order
}
