//! The maximal-independent-set oracle and its answer strategies.
//!
//! An oracle answer for a query `q` is valid when it is a maximal independent
//! set of `G[q]`. Which one is returned is up to the [`OracleStrategy`]: the
//! greedy strategies are honest baselines, while `min-reveal`, `hider` and the
//! exhaustive adversary try to report as few new non-adjacent pairs as they can.

use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use thiserror::Error;

use crate::graph::Graph;
use crate::vertex_set::VertexSet;
use crate::{SeededRng, Vertex};

/// Largest query the exhaustive adversary accepts.
pub const EXACT_ADVERSARY_MAX_QUERY: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyKind {
    /// Scan the query in ascending id order, keep every vertex with no kept neighbor.
    LexGreedy,
    /// Same scan over a seeded random permutation of the query.
    RandomGreedy,
    /// Greedy choice minimizing newly co-reported non-adjacent pairs.
    MinReveal,
    /// Clique-pair specialist: singleton answers and repeated pairs first.
    Hider,
    /// Enumerates every MIS of `G[q]` and returns the one revealing the fewest
    /// new pairs. Exponential; queries larger than
    /// [`EXACT_ADVERSARY_MAX_QUERY`] vertices are answered as `MinReveal`.
    ExactAdversary,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] = [
        StrategyKind::LexGreedy,
        StrategyKind::RandomGreedy,
        StrategyKind::MinReveal,
        StrategyKind::Hider,
        StrategyKind::ExactAdversary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::LexGreedy => "lex-greedy",
            StrategyKind::RandomGreedy => "random-greedy",
            StrategyKind::MinReveal => "min-reveal",
            StrategyKind::Hider => "hider",
            StrategyKind::ExactAdversary => "exact-adversary",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown oracle strategy `{0}`")]
pub struct UnknownStrategy(pub alloc::string::String);

impl FromStr for StrategyKind {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownStrategy(s.into()))
    }
}

/// A stateful answer strategy.
///
/// The state is the set of pairs already co-reported in earlier answers; it
/// persists across queries of one run. Use a fresh instance (or [`reset`]) per
/// reconstruction run.
///
/// [`reset`]: OracleStrategy::reset
#[derive(Debug, Clone)]
pub struct OracleStrategy {
    kind: StrategyKind,
    seed: u64,
    rng: SeededRng,
    /// `revealed[u]` holds every `v` already reported together with `u`.
    revealed: Vec<VertexSet>,
}

impl OracleStrategy {
    pub fn new(kind: StrategyKind, seed: u64) -> Self {
        Self {
            kind,
            seed,
            rng: SeededRng::seed_from_u64(seed),
            revealed: Vec::new(),
        }
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    /// Forgets revealed pairs and rewinds the random source.
    pub fn reset(&mut self) {
        *self = Self::new(self.kind, self.seed);
    }

    /// Number of distinct pairs this strategy has co-reported so far.
    pub fn revealed_pairs(&self) -> usize {
        self.revealed.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    fn was_revealed(&self, u: Vertex, v: Vertex) -> bool {
        self.revealed.get(u).is_some_and(|row| row.contains(v))
    }

    /// Pairs `{v, w}`, `w` in `chosen`, that have not been reported before.
    fn new_pairs_with(&self, v: Vertex, chosen: &VertexSet) -> usize {
        match self.revealed.get(v) {
            Some(row) => chosen.len() - chosen.intersection_len(row),
            None => chosen.len(),
        }
    }

    fn new_pairs_in(&self, set: &VertexSet) -> usize {
        let members = set.to_vec();
        let mut count = 0;
        for (i, &u) in members.iter().enumerate() {
            count += members[i + 1..]
                .iter()
                .filter(|&&v| !self.was_revealed(u, v))
                .count();
        }
        count
    }

    fn record(&mut self, answer: &VertexSet) {
        if let Some(max) = answer.last() {
            if self.revealed.len() <= max {
                self.revealed.resize(max + 1, VertexSet::new());
            }
        }
        for u in answer {
            let mut others = answer.clone();
            others.remove(u);
            self.revealed[u].union_with(&others);
        }
    }

    /// Answers query `q` on `g` with a maximal independent set of `G[q]`.
    ///
    /// Ids outside `0..g.n()` are ignored.
    pub fn answer(&mut self, g: &Graph, q: &VertexSet) -> VertexSet {
        let q = if q.within(g.n()) {
            q.clone()
        } else {
            q.intersection(&VertexSet::full(g.n()))
        };
        let answer = match self.kind {
            StrategyKind::LexGreedy => greedy(g, q.iter()),
            StrategyKind::RandomGreedy => {
                let mut order = q.to_vec();
                order.shuffle(&mut self.rng);
                greedy(g, order)
            }
            StrategyKind::MinReveal => self.min_reveal(g, &q),
            StrategyKind::Hider => self.hide(g, &q),
            StrategyKind::ExactAdversary => self.exact(g, &q),
        };
        debug_assert!(is_maximal_independent(g, &q, &answer));
        self.record(&answer);
        answer
    }

    fn min_reveal(&self, g: &Graph, q: &VertexSet) -> VertexSet {
        let degree_in_q = |v: Vertex| g.neighbors(v).intersection_len(q);
        let mut chosen = VertexSet::new();
        let mut available = q.clone();
        while let Some(best) = available
            .iter()
            .min_by_key(|&v| (self.new_pairs_with(v, &chosen), Reverse(degree_in_q(v)), v))
        {
            chosen.insert(best);
            available.remove(best);
            available.difference_with(g.neighbors(best));
        }
        chosen
    }

    fn hide(&self, g: &Graph, q: &VertexSet) -> VertexSet {
        let size = q.len();
        if let Some(v) = q
            .iter()
            .find(|&v| g.neighbors(v).intersection_len(q) + 1 == size)
        {
            return VertexSet::singleton(v);
        }
        for a in q {
            let Some(row) = self.revealed.get(a) else {
                continue;
            };
            for b in row.intersection(q).iter().filter(|&b| b > a) {
                if g.has_edge(a, b) {
                    continue;
                }
                let mut dominated = g.neighbors(a).union(g.neighbors(b));
                dominated.insert(a);
                dominated.insert(b);
                if q.is_subset(&dominated) {
                    return VertexSet::from([a, b]);
                }
            }
        }
        self.min_reveal(g, q)
    }

    fn exact(&self, g: &Graph, q: &VertexSet) -> VertexSet {
        if q.len() > EXACT_ADVERSARY_MAX_QUERY {
            return self.min_reveal(g, q);
        }
        maximal_independent_sets(g, q)
            .into_iter()
            .min_by(|a, b| {
                self.new_pairs_in(a)
                    .cmp(&self.new_pairs_in(b))
                    .then_with(|| a.cmp_lex(b))
            })
            .unwrap_or_default()
    }
}

fn greedy(g: &Graph, order: impl IntoIterator<Item = Vertex>) -> VertexSet {
    let mut chosen = VertexSet::new();
    for v in order {
        if g.neighbors(v).is_disjoint(&chosen) {
            chosen.insert(v);
        }
    }
    chosen
}

/// Whether `i` is a maximal independent set of `G[q]`: `i ⊆ q`, no edge inside
/// `i`, and every vertex of `q \ i` has a neighbor in `i`.
pub fn is_maximal_independent(g: &Graph, q: &VertexSet, i: &VertexSet) -> bool {
    i.is_subset(q)
        && i.within(g.n())
        && g.is_independent(i)
        && q.difference(i)
            .iter()
            .all(|v| v < g.n() && !g.neighbors(v).is_disjoint(i))
}

/// Every maximal independent set of `G[q]`, in lexicographic order.
///
/// Bron–Kerbosch with pivoting on the complement of `G[q]`.
pub fn maximal_independent_sets(g: &Graph, q: &VertexSet) -> Vec<VertexSet> {
    let q = q.intersection(&VertexSet::full(g.n()));
    let non_neighbors: Vec<VertexSet> = (0..g.n())
        .map(|v| {
            let mut row = q.difference(g.neighbors(v));
            row.remove(v);
            row
        })
        .collect();
    let mut out = Vec::new();
    bron_kerbosch(&non_neighbors, VertexSet::new(), q, VertexSet::new(), &mut out);
    out.sort_by(VertexSet::cmp_lex);
    out
}

fn bron_kerbosch(
    compat: &[VertexSet],
    current: VertexSet,
    mut candidates: VertexSet,
    mut excluded: VertexSet,
    out: &mut Vec<VertexSet>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() {
            out.push(current);
        }
        return;
    }
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .max_by_key(|&u| compat[u].intersection_len(&candidates))
        .expect("candidates is non-empty");
    for v in candidates.difference(&compat[pivot]).to_vec() {
        let mut next = current.clone();
        next.insert(v);
        bron_kerbosch(
            compat,
            next,
            candidates.intersection(&compat[v]),
            excluded.intersection(&compat[v]),
            out,
        );
        candidates.remove(v);
        excluded.insert(v);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranscriptError {
    #[error("entry {index}: answer is not a subset of the query")]
    AnswerNotSubset { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub query: VertexSet,
    pub answer: VertexSet,
}

/// Ordered (query, answer) pairs; every answer is a subset of its query.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<TranscriptEntry>) -> Result<Self, TranscriptError> {
        if let Some(index) = entries.iter().position(|e| !e.answer.is_subset(&e.query)) {
            return Err(TranscriptError::AnswerNotSubset { index });
        }
        Ok(Self { entries })
    }

    pub fn push(&mut self, query: VertexSet, answer: VertexSet) -> Result<(), TranscriptError> {
        if !answer.is_subset(&query) {
            return Err(TranscriptError::AnswerNotSubset {
                index: self.entries.len(),
            });
        }
        self.entries.push(TranscriptEntry { query, answer });
        Ok(())
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest id mentioned in any query.
    pub fn max_vertex(&self) -> Option<Vertex> {
        self.entries.iter().filter_map(|e| e.query.last()).max()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, TranscriptEntry> {
        self.entries.iter()
    }
}

impl<'a> IntoIterator for &'a Transcript {
    type Item = &'a TranscriptEntry;
    type IntoIter = core::slice::Iter<'a, TranscriptEntry>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// Whether every transcript entry is a valid oracle answer on `g`.
pub fn verify_transcript(g: &Graph, t: &Transcript) -> bool {
    t.iter()
        .all(|e| e.query.within(g.n()) && is_maximal_independent(g, &e.query, &e.answer))
}

/// Query access to a hidden graph.
pub trait MisOracle {
    /// Size of the vertex universe `0..n`.
    fn vertex_count(&self) -> usize;

    /// Returns some maximal independent set of the subgraph induced by `q`.
    /// The answer must be a subset of `q`.
    fn query(&mut self, q: &VertexSet) -> VertexSet;
}

/// An oracle over a known graph that answers with a strategy and records the
/// transcript.
#[derive(Debug, Clone)]
pub struct GraphOracle<'g> {
    graph: &'g Graph,
    strategy: OracleStrategy,
    transcript: Transcript,
}

impl<'g> GraphOracle<'g> {
    pub fn new(graph: &'g Graph, strategy: OracleStrategy) -> Self {
        Self {
            graph,
            strategy,
            transcript: Transcript::new(),
        }
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn strategy(&self) -> &OracleStrategy {
        &self.strategy
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }
}

impl MisOracle for GraphOracle<'_> {
    fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    fn query(&mut self, q: &VertexSet) -> VertexSet {
        let answer = self.strategy.answer(self.graph, q);
        self.transcript
            .push(q.clone(), answer.clone())
            .expect("strategy answers are subsets of the query");
        answer
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{clique_pair, clique_pair_random, cycle, path, random_bounded};
    use alloc::vec;
    use proptest::prelude::*;

    fn all_strategies(seed: u64) -> Vec<OracleStrategy> {
        StrategyKind::ALL
            .into_iter()
            .map(|k| OracleStrategy::new(k, seed))
            .collect()
    }

    #[test]
    fn answer_examples() {
        let q = VertexSet::full(3);
        for mut s in all_strategies(1) {
            assert_eq!(s.answer(&Graph::empty(3), &q), q);
        }
        let mut lex = OracleStrategy::new(StrategyKind::LexGreedy, 0);
        assert_eq!(lex.answer(&Graph::complete(3), &q), VertexSet::from([0]));
        assert_eq!(lex.answer(&path(3), &q), VertexSet::from([0, 2]));
        for mut s in all_strategies(2) {
            assert!(s.answer(&path(3), &VertexSet::new()).is_empty());
        }
    }

    #[test]
    fn maximality_examples() {
        let p = path(3);
        let all = VertexSet::full(3);
        assert!(is_maximal_independent(&p, &all, &VertexSet::from([1])));
        assert!(!is_maximal_independent(&p, &all, &VertexSet::from([0])));
        assert!(!is_maximal_independent(&p, &all, &VertexSet::from([0, 1])));
        assert!(!is_maximal_independent(&p, &VertexSet::from([0]), &VertexSet::from([2])));
        assert!(is_maximal_independent(&p, &VertexSet::new(), &VertexSet::new()));
    }

    #[test]
    fn mis_enumeration() {
        let p = path(3);
        assert_eq!(
            maximal_independent_sets(&p, &VertexSet::full(3)),
            vec![VertexSet::from([0, 2]), VertexSet::from([1])]
        );
        // the 5-cycle has exactly five maximal independent sets, all of size 2
        let c5 = cycle(5).unwrap();
        let all = maximal_independent_sets(&c5, &VertexSet::full(5));
        assert_eq!(all.len(), 5);
        assert!(all.iter().all(|s| s.len() == 2));
        assert_eq!(maximal_independent_sets(&c5, &VertexSet::new()), vec![VertexSet::new()]);
    }

    #[test]
    fn transcript_verification() {
        let g = cycle(6).unwrap();
        let mut oracle = GraphOracle::new(&g, OracleStrategy::new(StrategyKind::LexGreedy, 0));
        for q in [VertexSet::full(6), VertexSet::from([0, 2, 3]), VertexSet::from([1, 4])] {
            oracle.query(&q);
        }
        let t = oracle.into_transcript();
        assert!(verify_transcript(&g, &t));
        assert!(verify_transcript(&g, &Transcript::new()));

        // first answer is {0, 2, 4}; an extra edge inside it breaks independence
        assert_eq!(t.entries()[0].answer, VertexSet::from([0, 2, 4]));
        let mut g2 = g.clone();
        g2.add_edge(0, 2).unwrap();
        assert!(!verify_transcript(&g2, &t));
    }

    #[test]
    fn transcript_rejects_non_subset_answer() {
        let mut t = Transcript::new();
        assert_eq!(
            t.push(VertexSet::from([0]), VertexSet::from([1])),
            Err(TranscriptError::AnswerNotSubset { index: 0 })
        );
    }

    #[test]
    fn strategy_names_round_trip() {
        for k in StrategyKind::ALL {
            assert_eq!(k.name().parse::<StrategyKind>().unwrap(), k);
        }
        assert!("greedy".parse::<StrategyKind>().is_err());
    }

    #[test]
    fn random_greedy_is_seed_deterministic() {
        let mut rng = SeededRng::seed_from_u64(4);
        let g = random_bounded(30, 4, 1000, &mut rng).unwrap();
        let q = VertexSet::full(30);
        let run = |seed| {
            let mut s = OracleStrategy::new(StrategyKind::RandomGreedy, seed);
            (0..5).map(|_| s.answer(&g, &q)).collect::<Vec<_>>()
        };
        assert_eq!(run(9), run(9));
        assert_ne!(run(9), run(10));
    }

    // Hand-built 4-vertex cases where the unique least-revealing choice is clear.
    #[test]
    fn min_reveal_avoids_new_pairs() {
        // Edgeless 4 vertices: the answer must be everything, whatever was revealed.
        let mut s = OracleStrategy::new(StrategyKind::MinReveal, 0);
        assert_eq!(s.answer(&Graph::empty(4), &VertexSet::full(4)), VertexSet::full(4));

        // Path 0-1-2-3 queried whole: MIS are {0,2}, {0,3}, {1,3}. After {0,2}
        // and {1,3} were revealed, min-reveal must reuse one of them rather
        // than reveal the fresh pair {0,3}.
        let g = path(4);
        let mut s = OracleStrategy::new(StrategyKind::MinReveal, 0);
        s.answer(&g, &VertexSet::from([0, 2]));
        s.answer(&g, &VertexSet::from([1, 3]));
        assert_eq!(s.revealed_pairs(), 2);
        let a = s.answer(&g, &VertexSet::full(4));
        assert_ne!(a, VertexSet::from([0, 3]));
        assert_eq!(s.revealed_pairs(), 2);

        // Star with center 0 and leaves 1..3: the center dominates everything,
        // so the singleton {0} is preferred over revealing leaf pairs.
        let star = crate::generate::star(3);
        let mut s = OracleStrategy::new(StrategyKind::MinReveal, 0);
        assert_eq!(s.answer(&star, &VertexSet::full(4)), VertexSet::from([0]));
        assert_eq!(s.revealed_pairs(), 0);

        // 0-1 edge plus isolated 2, 3, with {0,2} previously revealed:
        // query {0,1,2}: {0,2} (old pair) beats {1,2} (new pair).
        let g = Graph::from_edges(4, [(0, 1)]).unwrap();
        let mut s = OracleStrategy::new(StrategyKind::MinReveal, 0);
        s.answer(&g, &VertexSet::from([0, 2]));
        assert_eq!(s.answer(&g, &VertexSet::from([0, 1, 2])), VertexSet::from([0, 2]));
        assert_eq!(s.revealed_pairs(), 1);
    }

    #[test]
    fn hider_prefers_singletons_and_old_pairs() {
        let g = clique_pair(2, &[(0, 0)]).unwrap(); // edges 01, 23, 02
        let mut s = OracleStrategy::new(StrategyKind::Hider, 0);
        // 0 is adjacent to 1 and 2: singleton answer
        assert_eq!(s.answer(&g, &VertexSet::from([0, 1, 2])), VertexSet::from([0]));
        assert_eq!(s.answer(&g, &VertexSet::from([1, 3])), VertexSet::from([1, 3]));
        // {1,3} was revealed; in G[{0,1,3}] both {1,3} and {0,3} are maximal
        assert_eq!(s.answer(&g, &VertexSet::from([0, 1, 3])), VertexSet::from([1, 3]));
        assert_eq!(s.revealed_pairs(), 1);
        s.reset();
        assert_eq!(s.revealed_pairs(), 0);
    }

    #[test]
    fn exact_adversary_minimizes_over_all_mis() {
        let g = path(4);
        let mut s = OracleStrategy::new(StrategyKind::ExactAdversary, 0);
        s.answer(&g, &VertexSet::from([0, 3]));
        // {0,3} already revealed: it is the only zero-cost MIS of the path
        assert_eq!(s.answer(&g, &VertexSet::full(4)), VertexSet::from([0, 3]));
    }

    #[test]
    fn hider_on_clique_pairs_answers_at_most_two() {
        let mut rng = SeededRng::seed_from_u64(17);
        let g = clique_pair_random(6, 0.5, &mut rng).unwrap();
        let mut s = OracleStrategy::new(StrategyKind::Hider, 0);
        for _ in 0..200 {
            let q: VertexSet = (0..12).filter(|_| rand::Rng::gen_bool(&mut rng, 0.5)).collect();
            let a = s.answer(&g, &q);
            assert!(a.len() <= 2);
            assert!(is_maximal_independent(&g, &q, &a));
        }
    }

    fn arb_graph_and_query() -> impl Strategy<Value = (Graph, VertexSet, u64)> {
        (1usize..24).prop_flat_map(|n| {
            let pairs = prop::collection::vec((0..n, 0..n), 0..3 * n);
            let query = prop::collection::btree_set(0..n, 0..=n);
            (Just(n), pairs, query, any::<u64>())
        })
        .prop_map(|(n, pairs, query, seed)| {
            let mut g = Graph::empty(n);
            for (u, v) in pairs {
                if u != v {
                    let _ = g.add_edge(u, v);
                }
            }
            (g, query.into_iter().collect(), seed)
        })
    }

    proptest! {
        #[test]
        fn every_strategy_answers_a_maximal_independent_set((g, q, seed) in arb_graph_and_query()) {
            for mut s in all_strategies(seed) {
                let a = s.answer(&g, &q);
                prop_assert!(is_maximal_independent(&g, &q, &a), "{:?} on {:?}: {:?}", s.kind(), q, a);
                // a second answer with state must still be sound
                let a = s.answer(&g, &q);
                prop_assert!(is_maximal_independent(&g, &q, &a));
            }
        }

        #[test]
        fn lex_greedy_is_pure((g, q, seed) in arb_graph_and_query()) {
            let mut a = OracleStrategy::new(StrategyKind::LexGreedy, seed);
            let mut b = OracleStrategy::new(StrategyKind::LexGreedy, seed.wrapping_add(1));
            b.answer(&g, &VertexSet::full(g.n()));
            prop_assert_eq!(a.answer(&g, &q), b.answer(&g, &q));
        }

        #[test]
        fn enumeration_yields_only_valid_distinct_sets((g, q, _seed) in arb_graph_and_query()) {
            prop_assume!(q.len() <= 14);
            let all = maximal_independent_sets(&g, &q);
            prop_assert!(!all.is_empty());
            for w in all.windows(2) {
                prop_assert!(w[0].cmp_lex(&w[1]).is_lt());
            }
            for s in &all {
                prop_assert!(is_maximal_independent(&g, &q, s));
            }
            // brute force over subsets of q
            let members = q.to_vec();
            let brute = (0u32..1 << members.len())
                .map(|mask| members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect::<VertexSet>())
                .filter(|s| is_maximal_independent(&g, &q, s))
                .count();
            prop_assert_eq!(all.len(), brute);
        }
    }
}
