//! Largest insufficient distribution and the pebbling number.
//!
//! A distribution is insufficient exactly when it dominates no member of
//! the barely sufficient set `C`. Starting from squished upper bounds, a
//! best-first search repairs each conflict with some `c` in `C` by lowering
//! one coordinate below `c`, and the first conflict-free distribution
//! popped has maximum size.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::barely::{enumerate_barely, squish_paths, squished_on, EnumerationOptions};
use crate::error::{Error, Result};
use crate::graph::{Distribution, Vertex, WeightedGraph};
use crate::reduce::simplify;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Apply the closed-form rewrites before searching.
    pub simplify: bool,
    /// For trees, only evaluate leaf goals in [`pebbling_number`].
    pub leaves_only_on_trees: bool,
    pub enumeration: EnumerationOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            simplify: true,
            leaves_only_on_trees: true,
            enumeration: EnumerationOptions::default(),
        }
    }
}

/// Pointwise maximum of `c`.
pub fn upper_envelope(c: &[Distribution]) -> Result<Distribution> {
    let (first, rest) = c
        .split_first()
        .ok_or_else(|| Error::Domain("upper envelope of an empty set".into()))?;
    let mut top = first.clone();
    for p in rest {
        if p.len() != top.len() {
            return Err(Error::Dimension {
                left: top.len(),
                right: p.len(),
            });
        }
        for (v, &count) in p.counts().iter().enumerate() {
            if count > top[v] {
                top.set(v, count);
            }
        }
    }
    Ok(top)
}

/// Maximal squished distributions below `envelope`, obtained by zeroing
/// vertices of unsquished ears one at a time.
pub fn squished_seeds(envelope: &Distribution, g: &WeightedGraph, x: Vertex) -> BTreeSet<Distribution> {
    let paths = squish_paths(g, x);
    let mut seen = BTreeSet::new();
    let mut work = vec![envelope.clone()];
    let mut seeds = BTreeSet::new();
    seen.insert(envelope.clone());
    while let Some(p) = work.pop() {
        let bad: Vec<&Vec<Vertex>> = paths
            .iter()
            .filter(|path| !squished_on(std::slice::from_ref(*path), &p))
            .collect();
        if bad.is_empty() {
            seeds.insert(p);
            continue;
        }
        let mut zeroable: Vec<Vertex> = bad
            .iter()
            .flat_map(|path| path.iter().copied())
            .filter(|&v| p[v] > 0)
            .collect();
        zeroable.sort_unstable();
        zeroable.dedup();
        for v in zeroable {
            let q = p.with(v, 0);
            if seen.insert(q.clone()) {
                work.push(q);
            }
        }
    }
    let all: Vec<Distribution> = seeds.iter().cloned().collect();
    seeds.retain(|p| !all.iter().any(|q| q != p && p.le(q)));
    seeds
}

/// Size of the largest distribution below some seed that dominates no
/// member of `c`.
pub fn max_insufficient(c: &[Distribution], seeds: &BTreeSet<Distribution>) -> u64 {
    let mut order: Vec<&Distribution> = c.iter().collect();
    order.sort_by(|a, b| b.size().cmp(&a.size()).then_with(|| a.cmp(b)));

    let mut queue: BTreeSet<(u64, Distribution, usize)> =
        seeds.iter().map(|p| (p.size(), p.clone(), 0)).collect();
    let mut best = 0;
    while let Some((size, p, start)) = queue.pop_last() {
        if size <= best {
            break;
        }
        match order[start..].iter().position(|&cand| cand.le(&p)) {
            None => best = size,
            Some(offset) => {
                let i = start + offset;
                let conflict = order[i];
                for v in conflict.support() {
                    let q = p.with(v, conflict[v] - 1);
                    queue.insert((q.size(), q, i + 1));
                }
            }
        }
    }
    best
}

/// `pi(G, x)`.
pub fn pebbling_number_at(g: &WeightedGraph, x: Vertex, opts: &SolveOptions) -> Result<u64> {
    if x >= g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: x,
            n: g.vertex_count(),
        });
    }
    let (graph, goal, offset) = if opts.simplify {
        let reduced = simplify(g, x)?;
        if let Some(value) = reduced.terminal_value {
            return Ok(value);
        }
        (reduced.graph, reduced.goal, reduced.ledger.offset)
    } else {
        (g.clone(), x, 0)
    };
    let c = enumerate_barely(&graph, goal, &opts.enumeration)?;
    let envelope = upper_envelope(&c)?;
    let seeds = if opts.enumeration.squish_filter {
        squished_seeds(&envelope, &graph, goal)
    } else {
        BTreeSet::from([envelope])
    };
    Ok(max_insufficient(&c, &seeds) + 1 + offset)
}

/// Goals that determine `pi(G)`: every vertex, or only the leaves of a
/// tree when allowed.
pub fn candidate_goals(g: &WeightedGraph, opts: &SolveOptions) -> Vec<Vertex> {
    let n = g.vertex_count();
    if opts.leaves_only_on_trees && n > 1 && g.is_tree() {
        (0..n).filter(|&v| g.degree(v) == 1).collect()
    } else {
        (0..n).collect()
    }
}

/// `pi(G, x)` for every vertex `x`, in vertex order.
pub fn pebbling_numbers_by_goal(g: &WeightedGraph, opts: &SolveOptions) -> Result<Vec<u64>> {
    (0..g.vertex_count())
        .into_par_iter()
        .map(|x| pebbling_number_at(g, x, opts))
        .collect()
}

/// `pi(G)`, the maximum over goal vertices.
pub fn pebbling_number(g: &WeightedGraph, opts: &SolveOptions) -> Result<u64> {
    let values: Vec<u64> = candidate_goals(g, opts)
        .into_par_iter()
        .map(|x| pebbling_number_at(g, x, opts))
        .collect::<Result<_>>()?;
    Ok(values.into_iter().max().expect("graphs have a vertex"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{minimal_sufficient_oracle, pi_oracle};
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

    fn spider() -> WeightedGraph {
        WeightedGraph::unweighted(6, [(0, 3), (1, 3), (2, 3), (3, 4), (4, 5)]).unwrap()
    }

    fn lollipops() -> WeightedGraph {
        WeightedGraph::unweighted(
            10,
            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (6, 7), (7, 8), (8, 9), (9, 3)],
        )
        .unwrap()
    }

    fn exact(g: &WeightedGraph, x: Vertex) -> Vec<Distribution> {
        minimal_sufficient_oracle(g, x).into_iter().collect()
    }

    #[test]
    fn envelopes() {
        assert_eq!(upper_envelope(&exact(&kite(), 0)).unwrap(), d(&[1, 2, 4, 4]));
        assert_eq!(upper_envelope(&exact(&heavy_triangle(), 0)).unwrap(), d(&[1, 2, 4]));
        assert_eq!(upper_envelope(&[d(&[0, 1])]).unwrap(), d(&[0, 1]));
        assert!(matches!(upper_envelope(&[]), Err(Error::Domain(_))));
    }

    #[test]
    fn seeds() {
        let top = d(&[1, 2, 4, 4]);
        assert_eq!(squished_seeds(&top, &kite(), 0), BTreeSet::from([top]));
        let single = d(&[1, 0, 0, 0]);
        assert_eq!(squished_seeds(&single, &kite(), 0), BTreeSet::from([single.clone()]));

        // A 6-cycle with one chord: the open ear 1-2-3-4 between 0 and 5.
        let g = WeightedGraph::unweighted(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let paths = squish_paths(&g, 0);
        assert!(!paths.is_empty());
        let top = d(&[1, 3, 1, 2, 5, 4]);
        let seeds = squished_seeds(&top, &g, 0);
        assert!(!seeds.is_empty());
        for s in &seeds {
            assert!(squished_on(&paths, s));
            assert!(s.le(&top));
        }
    }

    #[test]
    fn largest_insufficient() {
        let c = exact(&kite(), 0);
        assert_eq!(max_insufficient(&c, &BTreeSet::from([d(&[1, 2, 4, 4])])), 4);
        let c = exact(&heavy_triangle(), 0);
        assert_eq!(max_insufficient(&c, &BTreeSet::from([d(&[1, 2, 4])])), 3);
        assert_eq!(max_insufficient(&[d(&[1])], &BTreeSet::from([d(&[1])])), 0);
    }

    #[test]
    fn named_values() {
        let opts = SolveOptions::default();
        assert_eq!(pebbling_number_at(&spider(), 0, &opts).unwrap(), 10);
        assert_eq!(pebbling_number_at(&lollipops(), 0, &opts).unwrap(), 36);
        assert_eq!(pebbling_number_at(&lollipops(), 6, &opts).unwrap(), 22);
        assert_eq!(pebbling_number(&lollipops(), &opts).unwrap(), 36);
        let k1 = WeightedGraph::unweighted(1, []).unwrap();
        assert_eq!(pebbling_number(&k1, &opts).unwrap(), 1);
    }

    #[test]
    fn without_rewrites() {
        let opts = SolveOptions {
            simplify: false,
            ..SolveOptions::default()
        };
        assert_eq!(pebbling_number_at(&spider(), 0, &opts).unwrap(), 10);
        assert_eq!(pebbling_number_at(&kite(), 0, &opts).unwrap(), 5);
        assert_eq!(pebbling_number_at(&heavy_triangle(), 0, &opts).unwrap(), 4);
    }

    #[test]
    fn goal_out_of_range() {
        let err = pebbling_number_at(&kite(), 4, &SolveOptions::default()).unwrap_err();
        assert_eq!(err, Error::VertexOutOfRange { vertex: 4, n: 4 });
    }

    fn variants() -> Vec<SolveOptions> {
        let base = SolveOptions::default();
        let unfiltered = EnumerationOptions::unfiltered();
        vec![
            base,
            SolveOptions { simplify: false, ..base },
            SolveOptions { enumeration: unfiltered, ..base },
            SolveOptions { simplify: false, enumeration: unfiltered, ..base },
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_oracle((g, x) in arb_rooted(6, 3)) {
            let expected = pi_oracle(&g, x, 1);
            for opts in variants() {
                prop_assert_eq!(pebbling_number_at(&g, x, &opts).unwrap(), expected);
            }
        }

        #[test]
        fn superset_of_squished_set_is_tolerated((g, x) in arb_rooted(5, 3)) {
            let exact_set = exact(&g, x);
            let filtered = enumerate_barely(&g, x, &EnumerationOptions::default()).unwrap();
            let top = upper_envelope(&exact_set).unwrap();
            let seeds = squished_seeds(&top, &g, x);
            prop_assert_eq!(max_insufficient(&exact_set, &seeds), max_insufficient(&filtered, &seeds));
        }
    }
}
