//! Graph formats and the batch spectrum driver.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Vertex, WeightedGraph, DEFAULT_WEIGHT};
use crate::solve::{pebbling_number, SolveOptions};

const GRAPH6_MAX_N: usize = 62;

fn graph6_error(message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        message: message.into(),
    }
}

/// Decodes one graph6 line (single-byte size form) into an unweighted graph.
pub fn decode_graph6(line: &str) -> Result<WeightedGraph> {
    let line = line.trim_end_matches(['\n', '\r']);
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let mut values = Vec::with_capacity(line.len());
    for (i, c) in line.bytes().enumerate() {
        if !(63..=126).contains(&c) {
            return Err(graph6_error(format!(
                "graph6 character {:?} at offset {i} outside 63..=126",
                c as char
            )));
        }
        values.push(c - 63);
    }
    let (&n, body) = values
        .split_first()
        .ok_or_else(|| graph6_error("empty graph6 string"))?;
    let n = n as usize;
    if n > GRAPH6_MAX_N {
        return Err(graph6_error("multi-byte graph6 sizes are not supported"));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(graph6_error(format!(
            "graph6 body has {} characters, expected {expected} for {n} vertices",
            body.len()
        )));
    }
    let bit = |k: usize| body[k / 6] >> (5 - k % 6) & 1 == 1;
    if (bits..expected * 6).any(bit) {
        return Err(graph6_error("nonzero graph6 padding bits"));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if bit(k) {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    WeightedGraph::unweighted(n, edges)
}

/// graph6 encoding of the underlying simple graph (weights are dropped).
pub fn encode_graph6(g: &WeightedGraph) -> Result<String> {
    let n = g.vertex_count();
    if n > GRAPH6_MAX_N {
        return Err(Error::Domain(format!("{n} vertices exceed the graph6 single-byte size")));
    }
    let mut bits = Vec::with_capacity(n * n / 2);
    for v in 1..n {
        for u in 0..v {
            bits.push(g.has_edge(u, v));
        }
    }
    let mut out = String::with_capacity(1 + bits.len().div_ceil(6));
    out.push((n as u8 + 63) as char);
    for chunk in bits.chunks(6) {
        let value = chunk
            .iter()
            .enumerate()
            .fold(0u8, |acc, (i, &b)| acc | (b as u8) << (5 - i));
        out.push((value + 63) as char);
    }
    Ok(out)
}

/// Parses the edge-list format: the vertex count, then one `u v [w]` per
/// line. `#` starts a comment; the weight defaults to 2.
pub fn parse_weighted_graph(text: &str) -> Result<WeightedGraph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let number = |s: &str, what: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid {what} {s:?}"),
            })
        };
        match n {
            None => {
                if fields.len() != 1 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "first line must hold only the vertex count".into(),
                    });
                }
                n = Some(number(fields[0], "vertex count")? as usize);
            }
            Some(_) => {
                if !(2..=3).contains(&fields.len()) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected \"u v [w]\", found {} fields", fields.len()),
                    });
                }
                let u = number(fields[0], "vertex")? as Vertex;
                let v = number(fields[1], "vertex")? as Vertex;
                let w = match fields.get(2) {
                    Some(s) => u32::try_from(number(s, "weight")?).map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("weight {s} is too large"),
                    })?,
                    None => DEFAULT_WEIGHT,
                };
                edges.push((u, v, w));
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 1,
        message: "missing vertex count".into(),
    })?;
    WeightedGraph::new(n, edges)
}

/// Frequency of each pebbling number per vertex count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpectrumTable {
    pub rows: BTreeMap<(usize, u64), u64>,
}

impl SpectrumTable {
    pub fn add(&mut self, n: usize, pi: u64) {
        *self.rows.entry((n, pi)).or_insert(0) += 1;
    }

    pub fn merge(mut self, other: SpectrumTable) -> SpectrumTable {
        for (key, count) in other.rows {
            *self.rows.entry(key).or_insert(0) += count;
        }
        self
    }

    /// `pi -> count` for graphs with `n` vertices.
    pub fn for_size(&self, n: usize) -> BTreeMap<u64, u64> {
        self.rows
            .range((n, 0)..=(n, u64::MAX))
            .map(|(&(_, pi), &count)| (pi, count))
            .collect()
    }

    pub fn total(&self, n: usize) -> u64 {
        self.for_size(n).values().sum()
    }

    /// Rows `n<TAB>pi<TAB>count`, sorted by `(n, pi)`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (&(n, pi), count) in &self.rows {
            writeln!(out, "{n}\t{pi}\t{count}").unwrap();
        }
        out
    }
}

/// Pebbling numbers of every graph6 line, aggregated into a table. Blank
/// lines and `>>graph6<<` headers alone on a line are skipped; the first
/// bad line aborts with its line number.
pub fn spectrum<I, S>(lines: I, jobs: usize, opts: &SolveOptions) -> Result<SpectrumTable>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut graphs = Vec::new();
    for (i, line) in lines.into_iter().enumerate() {
        let line = line.as_ref().trim();
        if line.is_empty() || line == ">>graph6<<" {
            continue;
        }
        let g = decode_graph6(line).map_err(|e| at_line(e, i + 1))?;
        graphs.push((i + 1, g));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    let results: Vec<Result<u64>> = pool.install(|| {
        graphs
            .par_iter()
            .map(|(_, g)| pebbling_number(g, opts))
            .collect()
    });

    let mut table = SpectrumTable::default();
    for ((line, g), result) in graphs.iter().zip(results) {
        let pi = result.map_err(|e| at_line(e, *line))?;
        table.add(g.vertex_count(), pi);
    }
    Ok(table)
}

/// Attaches a line number to a per-graph failure; resource caps keep
/// their type so callers can tell them apart.
fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::ResourceCap { .. } => e,
        Error::Parse { message, .. } => Error::Parse { line, message },
        other => Error::Parse {
            line,
            message: other.to_string(),
        },
    }
}
