//! Exact pebbling numbers of weighted graphs.
//!
//! The pipeline for one goal vertex is: simplify the graph with
//! closed-form rewrites ([`reduce`]), enumerate the barely sufficient
//! distributions backward from the goal ([`barely`]), then search for the
//! largest insufficient distribution ([`solve`]). [`oracle`] holds the
//! brute-force ground truth the rest is tested against, and [`io`] the
//! graph formats and batch driver used by the command-line tool.

pub mod barely;
pub mod error;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod reduce;
pub mod solve;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use graph::{Distribution, Move, MoveMultiset, PebbleFunction, Relation, Vertex, WeightedGraph};
