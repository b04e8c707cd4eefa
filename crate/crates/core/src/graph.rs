//! Simple undirected graphs on dense vertex ids `0..n`.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::vertex_set::VertexSet;
use crate::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("duplicate edge {0}")]
    DuplicateEdge(EdgePair),
    #[error("graph is not a cycle")]
    NotACycle,
}

/// An unordered pair of distinct vertices, stored with `u < v`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgePair {
    u: Vertex,
    v: Vertex,
}

impl EdgePair {
    /// Canonicalizes `{a, b}`; `None` when `a == b`.
    pub fn new(a: Vertex, b: Vertex) -> Option<Self> {
        match a.cmp(&b) {
            core::cmp::Ordering::Less => Some(Self { u: a, v: b }),
            core::cmp::Ordering::Greater => Some(Self { u: b, v: a }),
            core::cmp::Ordering::Equal => None,
        }
    }

    pub fn u(self) -> Vertex {
        self.u
    }

    pub fn v(self) -> Vertex {
        self.v
    }
}

impl fmt::Debug for EdgePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

impl fmt::Display for EdgePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.u, self.v)
    }
}

/// Undirected simple graph with one adjacency bitset per vertex.
///
/// Adjacency is kept symmetric and loop-free by every mutator, so a `Graph`
/// value always satisfies those invariants.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
    edges: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: alloc::vec![VertexSet::new(); n],
            edges: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            let mut row = VertexSet::full(n);
            row.remove(u);
            g.adj[u] = row;
        }
        g.edges = n * n.saturating_sub(1) / 2;
        g
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds the edge `{u, v}`. Rejects loops, out-of-range ids and duplicates.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        let n = self.n();
        for vertex in [u, v] {
            if vertex >= n {
                return Err(GraphError::VertexOutOfRange { vertex, n });
            }
        }
        let pair = EdgePair::new(u, v).ok_or(GraphError::SelfLoop(u))?;
        if !self.adj[u].insert(v) {
            return Err(GraphError::DuplicateEdge(pair));
        }
        self.adj[v].insert(u);
        self.edges += 1;
        Ok(())
    }

    /// Inserts `{u, v}` if absent; returns whether it was inserted.
    pub(crate) fn insert_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        debug_assert!(u != v && u < self.n() && v < self.n());
        let fresh = self.adj[u].insert(v);
        if fresh {
            self.adj[v].insert(u);
            self.edges += 1;
        }
        fresh
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(u).is_some_and(|row| row.contains(v))
    }

    /// Maximum degree; 0 for edgeless (or vertex-free) graphs.
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Edges in canonical `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = EdgePair> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, row)| {
            row.iter()
                .filter(move |&v| v > u)
                .map(move |v| EdgePair { u, v })
        })
    }

    /// All unordered pairs of distinct non-adjacent vertices, in canonical order.
    pub fn non_edges(&self) -> Vec<EdgePair> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2 - self.edges);
        for u in 0..n {
            for v in u + 1..n {
                if !self.adj[u].contains(v) {
                    out.push(EdgePair { u, v });
                }
            }
        }
        out
    }

    pub fn non_edge_count(&self) -> usize {
        let n = self.n();
        n * n.saturating_sub(1) / 2 - self.edges
    }

    /// The subgraph induced by `s`, relabelled to `0..|s|` in ascending id order.
    pub fn induced_subgraph(&self, s: &VertexSet) -> InducedSubgraph {
        let labels: Vec<Vertex> = s.iter().filter(|&v| v < self.n()).collect();
        let mut graph = Graph::empty(labels.len());
        for (i, &u) in labels.iter().enumerate() {
            for (j, &v) in labels.iter().enumerate().skip(i + 1) {
                if self.adj[u].contains(v) {
                    graph.insert_edge(i, j);
                }
            }
        }
        InducedSubgraph { graph, labels }
    }

    /// Whether `s` contains no edge of the graph.
    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| self.adj.get(v).is_none_or(|row| row.is_disjoint(s)))
    }

    /// Relabels vertices by the permutation `perm` (vertex `v` becomes `perm[v]`).
    pub fn permuted(&self, perm: &[Vertex]) -> Self {
        let mut g = Graph::empty(self.n());
        for e in self.edges() {
            g.insert_edge(perm[e.u], perm[e.v]);
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// An induced subgraph together with the map back to the parent's ids.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `labels[i]` is the parent id of local vertex `i`.
    pub labels: Vec<Vertex>,
}

impl InducedSubgraph {
    pub fn original(&self, local: Vertex) -> Vertex {
        self.labels[local]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{clique_pair, cycle};
    use alloc::vec;

    fn pairs(v: &[(usize, usize)]) -> Vec<EdgePair> {
        v.iter().map(|&(a, b)| EdgePair::new(a, b).unwrap()).collect()
    }

    #[test]
    fn max_degree_examples() {
        assert_eq!(Graph::empty(4).max_degree(), 0);
        assert_eq!(cycle(5).unwrap().max_degree(), 2);
        assert_eq!(clique_pair(3, &[]).unwrap().max_degree(), 2);
    }

    #[test]
    fn non_edge_examples() {
        assert!(Graph::complete(4).non_edges().is_empty());
        assert_eq!(Graph::empty(3).non_edges(), pairs(&[(0, 1), (0, 2), (1, 2)]));
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.non_edges(), pairs(&[(0, 2)]));
        assert_eq!(path.non_edge_count(), 1);
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = Graph::empty(3);
        assert_eq!(g.add_edge(1, 1), Err(GraphError::SelfLoop(1)));
        assert_eq!(g.add_edge(0, 3), Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 }));
        g.add_edge(2, 0).unwrap();
        assert_eq!(
            g.add_edge(0, 2),
            Err(GraphError::DuplicateEdge(EdgePair::new(0, 2).unwrap()))
        );
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 2) && g.has_edge(2, 0));
    }

    #[test]
    fn induced_subgraph_examples() {
        let tri = Graph::complete(3);
        let sub = tri.induced_subgraph(&VertexSet::new());
        assert_eq!(sub.graph.n(), 0);

        let sub = tri.induced_subgraph(&VertexSet::from([0, 1]));
        assert_eq!(sub.graph.edges().collect::<Vec<_>>(), pairs(&[(0, 1)]));

        let c5 = cycle(5).unwrap();
        let sub = c5.induced_subgraph(&VertexSet::from([0, 2, 4]));
        assert_eq!(sub.labels, vec![0, 2, 4]);
        let edges: Vec<_> = sub
            .graph
            .edges()
            .map(|e| EdgePair::new(sub.original(e.u()), sub.original(e.v())).unwrap())
            .collect();
        assert_eq!(edges, pairs(&[(0, 4)]));
        assert_eq!(sub.graph.degree(1), 0);
    }

    #[test]
    fn independence() {
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(path.is_independent(&VertexSet::from([0, 2])));
        assert!(!path.is_independent(&VertexSet::from([0, 1])));
    }
}
