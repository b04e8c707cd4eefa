//! Graph reconstruction through a maximal-independent-set (MIS) oracle.
//!
//! A reconstruction algorithm only knows the vertex set `0..n`. It submits
//! subsets of vertices to an oracle, which answers with *some* maximal
//! independent set of the induced subgraph. Any two vertices reported together
//! are certified non-adjacent; the algorithms here collect such witnesses and
//! output the complement of the witnessed non-edges.
//!
//! The crate is `no_std` and only needs `alloc`. Randomness is always passed in
//! explicitly as a seeded [`rand::Rng`], so every run is reproducible.
//!
//! Modules:
//!
//! * [`vertex_set`] and [`graph`]: bitset-backed vertex sets and simple
//!   undirected graphs.
//! * [`generate`]: cycles, clique pairs and bounded-degree random graphs.
//! * [`oracle`]: the MIS oracle with honest and adversarial answer strategies,
//!   plus transcripts.
//! * [`reconstruct`]: randomized non-adaptive reconstruction, scheme-driven
//!   deterministic reconstruction and transcript inference.
//! * [`scheme`]: generation and verification of query schemes.
//! * [`lowerbound`]: partition refinement on cycles, non-edge reveal
//!   accounting on clique pairs, and closed-form bound evaluators.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod generate;
pub mod graph;
pub mod lowerbound;
pub mod oracle;
pub mod reconstruct;
pub mod scheme;
pub mod vertex_set;

pub use graph::{EdgePair, Graph, GraphError, InducedSubgraph};
pub use oracle::{GraphOracle, MisOracle, OracleStrategy, StrategyKind, Transcript, TranscriptEntry};
pub use reconstruct::{ReconstructError, ReconstructionParams, ReconstructionResult};
pub use scheme::{CoverageCounterexample, QueryScheme, SchemeError, SchemeVerdict};
pub use vertex_set::VertexSet;

/// Vertex identifier. Vertices of an `n`-vertex graph are `0..n`.
pub type Vertex = usize;

/// Seeded random source used throughout the crate.
pub type SeededRng = rand_chacha::ChaCha8Rng;
