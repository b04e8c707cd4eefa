//! Reconstruction algorithms.
//!
//! Both algorithms are non-adaptive: the query sets are fixed before any
//! answer is seen. Every pair of vertices reported together in some answer is a
//! certified non-edge; the reconstructed graph is the complement of those
//! witnesses. The error is one-sided: a true edge can never be witnessed as a
//! non-edge, so the output always contains every true edge.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::graph::{EdgePair, Graph};
use crate::oracle::{GraphOracle, MisOracle, OracleStrategy, Transcript};
use crate::scheme::QueryScheme;
use crate::vertex_set::VertexSet;
use crate::Vertex;

/// Default value of the constant `C` in the query count.
pub const DEFAULT_C_CONST: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReconstructError {
    #[error("need at least 2 vertices to reconstruct, got {0}")]
    TooFewVertices(usize),
    #[error("degree bound {delta} outside 1..=n-1 for n = {n}")]
    DegreeBoundOutOfRange { n: usize, delta: usize },
    #[error("constant C must be positive and finite, got {0}")]
    InvalidConstant(f64),
    #[error("oracle has {oracle} vertices but {expected} were expected")]
    VertexCountMismatch { oracle: usize, expected: usize },
    #[error("transcript mentions vertex {vertex}, outside 0..{n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("{0} is an edge; report rates are only defined for non-edges")]
    PairIsEdge(EdgePair),
    #[error("pair ({0}, {1}) is not two distinct vertices of the graph")]
    InvalidPair(Vertex, Vertex),
    #[error("at least one sample is required")]
    NoSamples,
}

/// Parameters of the randomized algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructionParams {
    n: usize,
    delta: usize,
    c_const: f64,
    query_override: Option<usize>,
}

impl ReconstructionParams {
    pub fn new(n: usize, delta: usize, c_const: f64) -> Result<Self, ReconstructError> {
        if n < 2 {
            return Err(ReconstructError::TooFewVertices(n));
        }
        if delta == 0 || delta >= n {
            return Err(ReconstructError::DegreeBoundOutOfRange { n, delta });
        }
        if !(c_const.is_finite() && c_const > 0.0) {
            return Err(ReconstructError::InvalidConstant(c_const));
        }
        Ok(Self {
            n,
            delta,
            c_const,
            query_override: None,
        })
    }

    /// Replaces the query-count formula with a fixed budget.
    pub fn with_query_count(mut self, queries: usize) -> Self {
        self.query_override = Some(queries);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn c_const(&self) -> f64 {
        self.c_const
    }

    /// Probability that a vertex is placed in a query set, `1 / (delta + 1)`.
    pub fn sampling_probability(&self) -> f64 {
        1.0 / (self.delta + 1) as f64
    }

    /// `ceil(C * (delta + 1)^2 * ln n)` unless overridden.
    pub fn query_count(&self) -> usize {
        self.query_override
            .unwrap_or_else(|| formula_query_count(self.n, self.delta, self.c_const))
    }
}

/// `ceil(c * (delta + 1)^2 * ln n)`, the natural logarithm.
pub fn formula_query_count(n: usize, delta: usize, c_const: f64) -> usize {
    let d1 = (delta + 1) as f64;
    libm::ceil(c_const * d1 * d1 * libm::log(n as f64)) as usize
}

/// Draws one query set: each vertex independently with probability `1/(delta+1)`.
pub fn sample_query<R: Rng + ?Sized>(n: usize, delta: usize, rng: &mut R) -> VertexSet {
    (0..n).filter(|_| rng.gen_range(0..=delta) == 0).collect()
}

/// All query sets of one randomized run. Depends only on the parameters and
/// the random source, never on oracle answers.
pub fn sample_queries<R: Rng + ?Sized>(params: &ReconstructionParams, rng: &mut R) -> Vec<VertexSet> {
    (0..params.query_count())
        .map(|_| sample_query(params.n, params.delta, rng))
        .collect()
}

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub graph: Graph,
    pub queries_used: usize,
    pub witnessed_non_edges: BTreeSet<EdgePair>,
    pub transcript: Transcript,
}

/// How an inferred graph differs from the truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Comparison {
    /// Inferred edges that are non-edges of the true graph.
    pub false_edges: usize,
    /// True edges absent from the inferred graph. Always 0 for sound oracles.
    pub missing_edges: usize,
}

impl Comparison {
    pub fn exact(&self) -> bool {
        self.false_edges == 0 && self.missing_edges == 0
    }
}

impl ReconstructionResult {
    pub fn compare(&self, truth: &Graph) -> Comparison {
        compare_graphs(&self.graph, truth)
    }
}

pub fn compare_graphs(inferred: &Graph, truth: &Graph) -> Comparison {
    assert_eq!(inferred.n(), truth.n(), "graphs on different vertex sets");
    let mut cmp = Comparison::default();
    for u in 0..truth.n() {
        let got = inferred.neighbors(u);
        let want = truth.neighbors(u);
        cmp.false_edges += got.difference(want).iter().filter(|&v| v > u).count();
        cmp.missing_edges += want.difference(got).iter().filter(|&v| v > u).count();
    }
    cmp
}

/// Infers the graph from a transcript: every pair co-reported in an answer is a
/// non-edge, every other pair is presumed an edge.
pub fn infer_edges(n: usize, t: &Transcript) -> Result<ReconstructionResult, ReconstructError> {
    if let Some(vertex) = t.max_vertex().filter(|&v| v >= n) {
        return Err(ReconstructError::VertexOutOfRange { vertex, n });
    }
    let mut witnessed_rows = alloc::vec![VertexSet::new(); n];
    for entry in t {
        for u in &entry.answer {
            witnessed_rows[u].union_with(&entry.answer);
        }
    }
    let mut graph = Graph::empty(n);
    let mut witnessed_non_edges = BTreeSet::new();
    for (u, row) in witnessed_rows.iter().enumerate() {
        for v in u + 1..n {
            if row.contains(v) {
                witnessed_non_edges.insert(EdgePair::new(u, v).expect("u < v"));
            } else {
                graph.insert_edge(u, v);
            }
        }
    }
    Ok(ReconstructionResult {
        graph,
        queries_used: t.len(),
        witnessed_non_edges,
        transcript: t.clone(),
    })
}

fn run_queries<O: MisOracle + ?Sized>(
    oracle: &mut O,
    queries: Vec<VertexSet>,
    n: usize,
) -> Result<ReconstructionResult, ReconstructError> {
    let mut transcript = Transcript::new();
    for query in queries {
        let answer = oracle.query(&query);
        transcript
            .push(query, answer)
            .expect("oracle answers are subsets of the query");
    }
    infer_edges(n, &transcript)
}

/// Randomized non-adaptive reconstruction.
///
/// Issues exactly [`ReconstructionParams::query_count`] queries, each a
/// random subset with inclusion probability `1/(delta+1)`, drawn up front.
pub fn randomized_reconstruct<O, R>(
    oracle: &mut O,
    params: &ReconstructionParams,
    rng: &mut R,
) -> Result<ReconstructionResult, ReconstructError>
where
    O: MisOracle + ?Sized,
    R: Rng + ?Sized,
{
    if oracle.vertex_count() != params.n {
        return Err(ReconstructError::VertexCountMismatch {
            oracle: oracle.vertex_count(),
            expected: params.n,
        });
    }
    let queries = sample_queries(params, rng);
    run_queries(oracle, queries, params.n)
}

/// Deterministic reconstruction: queries every set of the scheme, in order.
pub fn scheme_reconstruct<O: MisOracle + ?Sized>(
    oracle: &mut O,
    scheme: &QueryScheme,
) -> Result<ReconstructionResult, ReconstructError> {
    if oracle.vertex_count() != scheme.n() {
        return Err(ReconstructError::VertexCountMismatch {
            oracle: oracle.vertex_count(),
            expected: scheme.n(),
        });
    }
    run_queries(oracle, scheme.sets().to_vec(), scheme.n())
}

/// Fraction of `samples` random query sets (inclusion probability
/// `1/(delta+1)`) whose answer contains both `u` and `v`.
///
/// For a non-edge `uv` of a graph with maximum degree at most `delta` this is
/// at least `1 / ((delta+1)^2 e^2)` under every strategy, since `u` and `v`
/// are forced into the answer whenever they are sampled and their
/// neighborhoods are not.
pub fn empirical_pair_report_rate<R: Rng + ?Sized>(
    g: &Graph,
    u: Vertex,
    v: Vertex,
    delta: usize,
    strategy: &mut OracleStrategy,
    samples: usize,
    rng: &mut R,
) -> Result<f64, ReconstructError> {
    if u == v || u >= g.n() || v >= g.n() {
        return Err(ReconstructError::InvalidPair(u, v));
    }
    if g.has_edge(u, v) {
        return Err(ReconstructError::PairIsEdge(EdgePair::new(u, v).expect("u != v")));
    }
    if samples == 0 {
        return Err(ReconstructError::NoSamples);
    }
    let mut oracle = GraphOracle::new(g, strategy.clone());
    let mut hits = 0usize;
    for _ in 0..samples {
        let q = sample_query(g.n(), delta, rng);
        if q.contains(u) && q.contains(v) {
            let a = oracle.query(&q);
            hits += usize::from(a.contains(u) && a.contains(v));
        }
    }
    *strategy = oracle.strategy().clone();
    Ok(hits as f64 / samples as f64)
}

/// Lower bound `1 / ((delta+1)^2 e^2)` on the per-query report rate of a non-edge.
pub fn pair_report_rate_bound(delta: usize) -> f64 {
    let d1 = (delta + 1) as f64;
    1.0 / (d1 * d1 * core::f64::consts::E * core::f64::consts::E)
}
