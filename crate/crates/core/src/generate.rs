//! Generators for the graph families used by the reconstruction experiments.

use rand::Rng;
use thiserror::Error;

use crate::graph::Graph;

/// Default number of whole-graph resamples in [`random_bounded`].
pub const DEFAULT_RESAMPLE_BUDGET: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("degree bound {delta} outside 1..=n-1 for n = {n}")]
    DegreeBoundOutOfRange { n: usize, delta: usize },
    #[error("a cycle needs at least 3 vertices, got {0}")]
    CycleTooSmall(usize),
    #[error("clique side size must be at least 1")]
    EmptyCliqueSide,
    #[error("cross edge ({a}, {b}) out of range for side size {side}")]
    CrossEdgeOutOfRange { a: usize, b: usize, side: usize },
    #[error(
        "no graph with max degree <= {delta} on {n} vertices after {attempts} resamples; \
         the degree bound is too tight for this n"
    )]
    ResampleBudgetExhausted { n: usize, delta: usize, attempts: usize },
}

/// Random graph with maximum degree at most `delta`.
///
/// Every potential edge is included independently with probability
/// `delta / (2(n-1))`, so the expected degree is `delta / 2`. A sample in which
/// some vertex exceeds `delta` is discarded and the whole graph is redrawn,
/// which yields exactly the conditional distribution given the degree bound.
/// Gives up after `max_resamples` draws.
pub fn random_bounded<R: Rng + ?Sized>(
    n: usize,
    delta: usize,
    max_resamples: usize,
    rng: &mut R,
) -> Result<Graph, GenerateError> {
    if delta == 0 || delta + 1 > n {
        return Err(GenerateError::DegreeBoundOutOfRange { n, delta });
    }
    let p = delta as f64 / (2 * (n - 1)) as f64;
    // log(1 - p) for geometric gap sampling between included pairs
    let log_q = libm::log1p(-p);
    let pair_count = n * (n - 1) / 2;

    'attempt: for _ in 0..max_resamples {
        let mut g = Graph::empty(n);
        // pairs are enumerated row by row: (0,1), (0,2), ..., (1,2), ...
        let (mut u, mut row_end) = (0usize, n - 1);
        let mut index = 0usize;
        loop {
            let uniform = 1.0 - rng.gen::<f64>();
            let gap = libm::floor(libm::log(uniform) / log_q);
            if gap >= (pair_count - index) as f64 {
                break;
            }
            index += gap as usize;
            while index >= row_end {
                u += 1;
                row_end += n - 1 - u;
            }
            let v = n - (row_end - index);
            g.insert_edge(u, v);
            if g.degree(u) > delta || g.degree(v) > delta {
                continue 'attempt;
            }
            index += 1;
            if index >= pair_count {
                break;
            }
        }
        return Ok(g);
    }
    Err(GenerateError::ResampleBudgetExhausted {
        n,
        delta,
        attempts: max_resamples,
    })
}

/// The cycle `0 - 1 - ... - (n-1) - 0`.
pub fn cycle(n: usize) -> Result<Graph, GenerateError> {
    if n < 3 {
        return Err(GenerateError::CycleTooSmall(n));
    }
    let mut g = Graph::empty(n);
    for i in 0..n {
        g.insert_edge(i, (i + 1) % n);
    }
    Ok(g)
}

pub fn path(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for i in 1..n {
        g.insert_edge(i - 1, i);
    }
    g
}

/// Star with center 0 and leaves `1..=leaves`.
pub fn star(leaves: usize) -> Graph {
    let mut g = Graph::empty(leaves + 1);
    for leaf in 1..=leaves {
        g.insert_edge(0, leaf);
    }
    g
}

/// Two disjoint `side`-cliques joined by the given cross edges.
///
/// Vertices `0..side` form clique A and `side..2*side` form clique B; the cross
/// pair `(a, b)` becomes the edge `{a, side + b}`. Every independent set of the
/// result has at most one vertex per clique.
pub fn clique_pair(side: usize, cross: &[(usize, usize)]) -> Result<Graph, GenerateError> {
    if side == 0 {
        return Err(GenerateError::EmptyCliqueSide);
    }
    let mut g = clique_pair_base(side);
    for &(a, b) in cross {
        if a >= side || b >= side {
            return Err(GenerateError::CrossEdgeOutOfRange { a, b, side });
        }
        g.insert_edge(a, side + b);
    }
    Ok(g)
}

/// Clique pair whose cross edges are each present independently with
/// probability `density`.
pub fn clique_pair_random<R: Rng + ?Sized>(
    side: usize,
    density: f64,
    rng: &mut R,
) -> Result<Graph, GenerateError> {
    if side == 0 {
        return Err(GenerateError::EmptyCliqueSide);
    }
    let mut g = clique_pair_base(side);
    for a in 0..side {
        for b in 0..side {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                g.insert_edge(a, side + b);
            }
        }
    }
    Ok(g)
}

fn clique_pair_base(side: usize) -> Graph {
    let mut g = Graph::empty(2 * side);
    for offset in [0, side] {
        for a in 0..side {
            for b in a + 1..side {
                g.insert_edge(offset + a, offset + b);
            }
        }
    }
    g
}
