//! Uniform random k-out digraphs, the transition structures of random
//! deterministic automata.
//!
//! The crate samples digraphs in which each of `n` vertices has `k` labeled
//! out-arcs with i.i.d. uniform endpoints, decomposes them into the giant
//! (largest closed strongly connected component), the one-in-core and the
//! part outside the giant, and measures the statistics governed by the
//! model's limit laws. Exact small-case machinery lives in [`oracle`].

pub mod constants;
pub mod decompose;
pub mod digraph;
pub mod distance;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod outside;
pub mod stats;
pub mod surjection;

pub use constants::{solve_tau, ModelConstants};
pub use decompose::{Decomposition, Layers};
pub use digraph::{Adjacency, KOutDigraph, RngSpec};
pub use error::{Error, Result};
pub use harness::{ExperimentConfig, ReplicateRecord, SummaryReport};
pub use outside::{OutsideConfig, OutsideReport};
