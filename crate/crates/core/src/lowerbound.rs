//! Executable forms of the query lower bounds.
//!
//! * Cycles: every answer splits a class of still-indistinguishable vertices
//!   into at most three parts (queried and reported, queried and not reported,
//!   not queried), so `l` queries leave at most `3^l` classes. While some class
//!   holds two vertices, swapping them in the cycle gives a second input that
//!   the transcript may not tell apart.
//! * Clique pairs: independent sets have at most two vertices, so every answer
//!   reveals at most one non-edge and each non-edge needs its own answer.
//! * A closed-form information bound for binary-answer queries on
//!   bounded-degree graphs.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::generate::{clique_pair_random, GenerateError};
use crate::graph::{Graph, GraphError};
use crate::oracle::{verify_transcript, GraphOracle, OracleStrategy, StrategyKind, Transcript};
use crate::reconstruct::{randomized_reconstruct, ReconstructError, ReconstructionParams};
use crate::vertex_set::VertexSet;
use crate::{SeededRng, Vertex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LowerBoundError {
    #[error("answer is not a subset of the query")]
    AnswerNotSubset,
    #[error("vertex {vertex} outside 0..{n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("transcript is not a valid oracle transcript for this graph")]
    InvalidTranscript,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
    #[error("a cycle needs at least 3 vertices, got {0}")]
    CycleTooSmall(usize),
    #[error("degree bound {delta} outside 1..n for n = {n}")]
    DegreeBoundOutOfRange { n: usize, delta: usize },
}

/// Disjoint, non-empty classes covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionState {
    n: usize,
    classes: Vec<VertexSet>,
}

impl PartitionState {
    /// The single class `0..n` (no classes when `n == 0`).
    pub fn new(n: usize) -> Self {
        let classes = if n == 0 {
            Vec::new()
        } else {
            alloc::vec![VertexSet::full(n)]
        };
        Self { n, classes }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Splits every class `U` into `U∩q∩i`, `(U∩q)\i` and `U\q`, dropping
    /// empty parts.
    pub fn refine(&self, q: &VertexSet, i: &VertexSet) -> Result<Self, LowerBoundError> {
        if !i.is_subset(q) {
            return Err(LowerBoundError::AnswerNotSubset);
        }
        let mut classes = Vec::with_capacity(self.classes.len() * 3);
        for class in &self.classes {
            let queried = class.intersection(q);
            let parts = [
                queried.intersection(i),
                queried.difference(i),
                class.difference(q),
            ];
            classes.extend(parts.into_iter().filter(|p| !p.is_empty()));
        }
        Ok(Self { n: self.n, classes })
    }

    /// Whether the classes are pairwise disjoint, non-empty and cover `0..n`.
    pub fn is_partition(&self) -> bool {
        let mut seen = VertexSet::new();
        for class in &self.classes {
            if class.is_empty() || !class.is_disjoint(&seen) {
                return false;
            }
            seen.union_with(class);
        }
        seen == VertexSet::full(self.n)
    }

    /// Lexicographically smallest pair of distinct vertices sharing a class.
    pub fn smallest_shared_pair(&self) -> Option<(Vertex, Vertex)> {
        self.classes
            .iter()
            .filter(|c| c.len() >= 2)
            .map(|c| {
                let mut it = c.iter();
                (it.next().unwrap(), it.next().unwrap())
            })
            .min()
    }
}

fn check_ids(n: usize, t: &Transcript) -> Result<(), LowerBoundError> {
    match t.max_vertex() {
        Some(vertex) if vertex >= n => Err(LowerBoundError::VertexOutOfRange { vertex, n }),
        _ => Ok(()),
    }
}

/// Folds [`PartitionState::refine`] over the transcript, starting from one class.
pub fn run_partition(n: usize, t: &Transcript) -> Result<PartitionState, LowerBoundError> {
    check_ids(n, t)?;
    t.iter()
        .try_fold(PartitionState::new(n), |p, e| p.refine(&e.query, &e.answer))
}

/// Two vertices that behaved identically in every entry of the transcript.
pub fn indistinguishable_pair(
    n: usize,
    t: &Transcript,
) -> Result<Option<(Vertex, Vertex)>, LowerBoundError> {
    Ok(run_partition(n, t)?.smallest_shared_pair())
}

fn check_cycle(g: &Graph) -> Result<(), LowerBoundError> {
    let n = g.n();
    if n < 3 || g.edge_count() != n || (0..n).any(|v| g.degree(v) != 2) {
        return Err(GraphError::NotACycle.into());
    }
    // 2-regular with n edges: a cycle iff connected
    let (mut prev, mut cur, mut steps) = (0, g.neighbors(0).first().unwrap(), 1);
    while cur != 0 {
        let next = g.neighbors(cur).iter().find(|&x| x != prev).unwrap();
        (prev, cur) = (cur, next);
        steps += 1;
    }
    if steps != n {
        return Err(GraphError::NotACycle.into());
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SwapWitness {
    /// The cycle with the positions of `u` and `v` exchanged.
    pub swapped: Graph,
    /// Whether the transcript is also a valid transcript for `swapped`.
    pub consistent: bool,
}

/// Exchanges `u` and `v` in the cyclic order and checks the transcript against
/// the resulting cycle.
///
/// The swap is the relabelling that maps `u` to `v` and back; when `u` and `v`
/// are adjacent the edge between them is kept.
pub fn swap_cycle_witness(
    cycle: &Graph,
    t: &Transcript,
    u: Vertex,
    v: Vertex,
) -> Result<SwapWitness, LowerBoundError> {
    check_cycle(cycle)?;
    let n = cycle.n();
    for vertex in [u, v] {
        if vertex >= n {
            return Err(LowerBoundError::VertexOutOfRange { vertex, n });
        }
    }
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.swap(u, v);
    let swapped = cycle.permuted(&perm);
    let consistent = verify_transcript(&swapped, t);
    Ok(SwapWitness {
        swapped,
        consistent,
    })
}

/// `ceil(log3 n) - 1`: queries needed before all `n` cycle vertices can be in
/// singleton classes.
pub fn cycle_query_lower_bound(n: usize) -> Result<u32, LowerBoundError> {
    if n < 3 {
        return Err(LowerBoundError::CycleTooSmall(n));
    }
    let mut levels = 0u32;
    let mut reach = 1usize;
    while reach < n {
        reach = reach.saturating_mul(3);
        levels += 1;
    }
    Ok(levels - 1)
}

/// Number of distinct non-adjacent pairs reported together in some answer.
pub fn reveal_count(g: &Graph, t: &Transcript) -> Result<usize, LowerBoundError> {
    if !verify_transcript(g, t) {
        return Err(LowerBoundError::InvalidTranscript);
    }
    let mut rows = alloc::vec![VertexSet::new(); g.n()];
    for e in t {
        for u in &e.answer {
            rows[u].union_with(&e.answer);
        }
    }
    Ok(rows
        .iter()
        .enumerate()
        .map(|(u, row)| row.iter().filter(|&v| v > u && !g.has_edge(u, v)).count())
        .sum())
}

/// Information bound for binary-answer queries on graphs of maximum degree
/// `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InformationBound {
    /// `n * delta * log2(n / delta) / 4 - 2`: log2 of a lower bound on the
    /// number of such graphs, hence a lower bound on binary queries.
    pub bits: f64,
    /// Whether `delta >= log2 n`; the count is only established for
    /// `delta = Ω(log n)`, so smaller degrees give a heuristic value.
    pub hypothesis_met: bool,
}

pub fn is_query_lower_bound(n: usize, delta: usize) -> Result<InformationBound, LowerBoundError> {
    if delta == 0 || delta >= n {
        return Err(LowerBoundError::DegreeBoundOutOfRange { n, delta });
    }
    let (nf, df) = (n as f64, delta as f64);
    Ok(InformationBound {
        bits: 0.25 * nf * df * libm::log2(nf / df) - 2.0,
        hypothesis_met: df >= libm::log2(nf),
    })
}

/// Outcome of one cycle indistinguishability trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleTrial {
    pub classes: usize,
    pub largest_class: usize,
    pub pair: Option<(Vertex, Vertex)>,
    /// `None` when no pair was found.
    pub swap_consistent: Option<bool>,
    pub transcript_valid: bool,
}

/// Queries the `n`-cycle `queries` times with uniformly random subsets,
/// answering each with the next strategy of `strategies` (round robin), then
/// looks for an indistinguishable pair and tests the swapped cycle.
pub fn cycle_trial<R: Rng + ?Sized>(
    n: usize,
    queries: usize,
    strategies: &[StrategyKind],
    rng: &mut R,
) -> Result<CycleTrial, LowerBoundError> {
    let g = crate::generate::cycle(n)?;
    let kinds = if strategies.is_empty() {
        &[StrategyKind::LexGreedy][..]
    } else {
        strategies
    };
    let mut oracles: Vec<OracleStrategy> = kinds
        .iter()
        .map(|&k| OracleStrategy::new(k, rng.gen()))
        .collect();
    let mut t = Transcript::new();
    let rotation = oracles.len();
    for i in 0..queries {
        let q: VertexSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        let a = oracles[i % rotation].answer(&g, &q);
        t.push(q, a).map_err(|_| LowerBoundError::AnswerNotSubset)?;
    }
    let partition = run_partition(n, &t)?;
    let pair = partition.smallest_shared_pair();
    let swap_consistent = match pair {
        Some((u, v)) => Some(swap_cycle_witness(&g, &t, u, v)?.consistent),
        None => None,
    };
    Ok(CycleTrial {
        classes: partition.len(),
        largest_class: partition.classes().iter().map(VertexSet::len).max().unwrap_or(0),
        pair,
        swap_consistent,
        transcript_valid: verify_transcript(&g, &t),
    })
}

/// Outcome of one clique-pair reconstruction attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliquePairTrial {
    pub side: usize,
    /// Non-edges of the hidden graph; all of them are cross pairs.
    pub non_edges: usize,
    pub queries: usize,
    pub reveal_count: usize,
    pub max_answer_size: usize,
    pub false_edges: usize,
    pub missing_edges: usize,
}

impl CliquePairTrial {
    pub fn exact(&self) -> bool {
        self.false_edges == 0 && self.missing_edges == 0
    }
}

/// Draws a clique pair with cross-edge density `density`, then runs the
/// randomized reconstruction (degree bound `2*side - 1`) against `strategy`
/// with a budget of `floor(budget_fraction * non_edges)` queries.
pub fn clique_pair_trial<R: Rng + ?Sized>(
    side: usize,
    density: f64,
    budget_fraction: f64,
    strategy: StrategyKind,
    rng: &mut R,
) -> Result<CliquePairTrial, LowerBoundError> {
    let g = clique_pair_random(side, density, rng)?;
    let non_edges = g.non_edge_count();
    let budget = libm::floor(budget_fraction.max(0.0) * non_edges as f64) as usize;
    let params = ReconstructionParams::new(2 * side, 2 * side - 1, 1.0)
        .map_err(LowerBoundError::from)?
        .with_query_count(budget);
    let mut query_rng = SeededRng::seed_from_u64(rng.gen());
    let mut oracle = GraphOracle::new(&g, OracleStrategy::new(strategy, rng.gen()));
    let result = randomized_reconstruct(&mut oracle, &params, &mut query_rng)?;
    let cmp = result.compare(&g);
    Ok(CliquePairTrial {
        side,
        non_edges,
        queries: result.queries_used,
        reveal_count: reveal_count(&g, &result.transcript)?,
        max_answer_size: result
            .transcript
            .iter()
            .map(|e| e.answer.len())
            .max()
            .unwrap_or(0),
        false_edges: cmp.false_edges,
        missing_edges: cmp.missing_edges,
    })
}
