//! Query schemes for deterministic reconstruction.
//!
//! A family of query sets `Q_1..Q_l` is a scheme for degree bound `delta` when,
//! for every pair `u, v` and every set `W` of `2 * delta` further vertices, some
//! `Q_i` contains `u` and `v` but no vertex of `W`. Querying every set of such a
//! scheme isolates each non-edge `uv` from the at most `2 * delta` neighbors of
//! its endpoints at least once, so the non-edge is always witnessed.
//!
//! Random families with inclusion probability `1/(delta+1)` are schemes with
//! positive probability once `l > 2 e^2 (delta+1)^3 ln n`. [`gen_verified_scheme`]
//! draws such families and checks them with [`verify_scheme`].
//!
//! Verification per pair `(u, v)`: let `F = { Q_i \ {u, v} : u, v ∈ Q_i }`. A
//! violating `W` exists exactly when `F` has a hitting set of at most
//! `2 * delta` vertices (padding it with unused vertices gives the full `W`).
//! That is decided by a depth-bounded branch-and-bound search.

use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::reconstruct::sample_query;
use crate::vertex_set::VertexSet;
use crate::Vertex;

/// Multiplier applied to the existence bound when generating schemes.
pub const DEFAULT_SAFETY: f64 = 2.0;
pub const DEFAULT_MAX_ATTEMPTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    #[error("a scheme needs at least one query set")]
    Empty,
    #[error("set {index} mentions a vertex outside 0..{n}")]
    SetOutOfRange { index: usize, n: usize },
    #[error("degree bound must be at least 1")]
    ZeroDegreeBound,
    #[error("n = {n} is below 2*delta + 2 = {}", 2 * delta + 2)]
    TooFewVertices { n: usize, delta: usize },
    #[error("safety factor must be at least 1, got {0}")]
    InvalidSafety(f64),
    #[error("no valid scheme after {attempts} attempts; last counterexample {last:?}")]
    AttemptsExhausted {
        attempts: usize,
        last: Option<CoverageCounterexample>,
    },
}

/// An ordered family of query sets over `0..n` for degree bound `delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryScheme {
    n: usize,
    delta: usize,
    sets: Vec<VertexSet>,
}

impl QueryScheme {
    pub fn new(n: usize, delta: usize, sets: Vec<VertexSet>) -> Result<Self, SchemeError> {
        if sets.is_empty() {
            return Err(SchemeError::Empty);
        }
        if delta == 0 {
            return Err(SchemeError::ZeroDegreeBound);
        }
        if let Some(index) = sets.iter().position(|s| !s.within(n)) {
            return Err(SchemeError::SetOutOfRange { index, n });
        }
        Ok(Self { n, delta, sets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Appends more query sets. Coverage is monotone, so a valid scheme stays valid.
    pub fn extend(&mut self, sets: impl IntoIterator<Item = VertexSet>) -> Result<(), SchemeError> {
        for set in sets {
            if !set.within(self.n) {
                return Err(SchemeError::SetOutOfRange {
                    index: self.sets.len(),
                    n: self.n,
                });
            }
            self.sets.push(set);
        }
        Ok(())
    }
}

/// A pair `(u, v)` and a set `w` of `2 * delta` other vertices such that no
/// query set contains both `u` and `v` while avoiding `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageCounterexample {
    pub u: Vertex,
    pub v: Vertex,
    pub w: VertexSet,
}

impl CoverageCounterexample {
    /// Re-checks the counterexample by scanning every set of `scheme`.
    pub fn violates(&self, scheme: &QueryScheme) -> bool {
        self.u != self.v
            && !self.w.contains(self.u)
            && !self.w.contains(self.v)
            && self.w.len() == 2 * scheme.delta
            && !covers(scheme, self.u, self.v, &self.w)
    }
}

impl core::fmt::Display for CoverageCounterexample {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "u={} v={} w={:?}", self.u, self.v, self.w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeVerdict {
    Valid,
    Counterexample(CoverageCounterexample),
}

impl SchemeVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, SchemeVerdict::Valid)
    }
}

/// Whether some set contains `u` and `v` and misses all of `w`.
pub fn covers(scheme: &QueryScheme, u: Vertex, v: Vertex, w: &VertexSet) -> bool {
    scheme
        .sets
        .iter()
        .any(|q| q.contains(u) && q.contains(v) && q.is_disjoint(w))
}

/// Rejects `delta = 0` and `n < 2*delta + 2`.
pub fn check_size(n: usize, delta: usize) -> Result<(), SchemeError> {
    if delta == 0 {
        return Err(SchemeError::ZeroDegreeBound);
    }
    if n < 2 * delta + 2 {
        return Err(SchemeError::TooFewVertices { n, delta });
    }
    Ok(())
}

/// `ceil(safety * 2 e^2 (delta+1)^3 ln n) + 1`.
pub fn default_scheme_size(n: usize, delta: usize, safety: f64) -> Result<usize, SchemeError> {
    check_size(n, delta)?;
    if !(safety >= 1.0 && safety.is_finite()) {
        return Err(SchemeError::InvalidSafety(safety));
    }
    let d1 = (delta + 1) as f64;
    let e2 = core::f64::consts::E * core::f64::consts::E;
    Ok(libm::ceil(safety * 2.0 * e2 * d1 * d1 * d1 * libm::log(n as f64)) as usize + 1)
}

/// `size` random sets, each vertex included independently with probability
/// `1/(delta+1)`.
pub fn gen_random_scheme<R: Rng + ?Sized>(
    n: usize,
    delta: usize,
    size: usize,
    rng: &mut R,
) -> Result<QueryScheme, SchemeError> {
    if size == 0 {
        return Err(SchemeError::Empty);
    }
    if delta == 0 {
        return Err(SchemeError::ZeroDegreeBound);
    }
    let sets = (0..size).map(|_| sample_query(n, delta, rng)).collect();
    QueryScheme::new(n, delta, sets)
}

/// Checks the covering condition for one pair; returns a violating `W` if any.
pub fn pair_counterexample(
    scheme: &QueryScheme,
    u: Vertex,
    v: Vertex,
) -> Option<CoverageCounterexample> {
    let budget = 2 * scheme.delta;
    let family: Vec<VertexSet> = scheme
        .sets
        .iter()
        .filter(|q| q.contains(u) && q.contains(v))
        .map(|q| {
            let mut rest = q.clone();
            rest.remove(u);
            rest.remove(v);
            rest
        })
        .collect();
    let hitting = small_hitting_set(family, budget)?;
    let mut w = hitting;
    for x in (0..scheme.n).filter(|&x| x != u && x != v) {
        if w.len() >= budget {
            break;
        }
        w.insert(x);
    }
    debug_assert_eq!(w.len(), budget);
    Some(CoverageCounterexample { u, v, w })
}

/// Decides whether `scheme` satisfies the covering condition.
///
/// Pairs are checked in lexicographic order; the first uncovered pair is
/// reported together with the hitting set found for it, padded with the
/// smallest unused vertices.
pub fn verify_scheme(scheme: &QueryScheme) -> Result<SchemeVerdict, SchemeError> {
    check_size(scheme.n, scheme.delta)?;
    for u in 0..scheme.n {
        for v in u + 1..scheme.n {
            if let Some(cx) = pair_counterexample(scheme, u, v) {
                return Ok(SchemeVerdict::Counterexample(cx));
            }
        }
    }
    Ok(SchemeVerdict::Valid)
}

/// Reference verifier: enumerates every `(u, v, W)` directly.
///
/// Cost grows like `n^2 * C(n-2, 2*delta) * l`; intended for tiny instances and
/// for cross-checking [`verify_scheme`]. Returns the lexicographically first
/// violating `W` of the first uncovered pair.
pub fn verify_scheme_exhaustive(scheme: &QueryScheme) -> Result<SchemeVerdict, SchemeError> {
    check_size(scheme.n, scheme.delta)?;
    let k = 2 * scheme.delta;
    for u in 0..scheme.n {
        for v in u + 1..scheme.n {
            let others: Vec<Vertex> = (0..scheme.n).filter(|&x| x != u && x != v).collect();
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let w: VertexSet = idx.iter().map(|&i| others[i]).collect();
                if !covers(scheme, u, v, &w) {
                    return Ok(SchemeVerdict::Counterexample(CoverageCounterexample { u, v, w }));
                }
                if !next_combination(&mut idx, others.len()) {
                    break;
                }
            }
        }
    }
    Ok(SchemeVerdict::Valid)
}

fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] < m - k + i) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// A scheme that passed verification, with the number of draws it took.
#[derive(Debug, Clone)]
pub struct VerifiedScheme {
    pub scheme: QueryScheme,
    pub attempts: usize,
}

/// Draws random schemes of size [`default_scheme_size`]`(n, delta, safety)`
/// until one verifies, up to `max_attempts` draws.
pub fn gen_verified_scheme<R: Rng + ?Sized>(
    n: usize,
    delta: usize,
    safety: f64,
    max_attempts: usize,
    rng: &mut R,
) -> Result<VerifiedScheme, SchemeError> {
    let size = default_scheme_size(n, delta, safety)?;
    let mut last = None;
    for attempt in 1..=max_attempts {
        let scheme = gen_random_scheme(n, delta, size, rng)?;
        match verify_scheme(&scheme)? {
            SchemeVerdict::Valid => {
                return Ok(VerifiedScheme {
                    scheme,
                    attempts: attempt,
                })
            }
            SchemeVerdict::Counterexample(cx) => last = Some(cx),
        }
    }
    Err(SchemeError::AttemptsExhausted {
        attempts: max_attempts,
        last,
    })
}

/// Finds a set of at most `budget` vertices meeting every member of `family`.
fn small_hitting_set(mut family: Vec<VertexSet>, budget: usize) -> Option<VertexSet> {
    // only inclusion-minimal members matter: hitting S hits every superset of S
    family.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp_lex(b)));
    family.dedup();
    let mut minimal: Vec<VertexSet> = Vec::with_capacity(family.len());
    for set in family {
        if set.is_empty() {
            return None;
        }
        if !minimal.iter().any(|m| m.is_subset(&set)) {
            minimal.push(set);
        }
    }
    let mut chosen = VertexSet::new();
    hit_search(&minimal, &mut chosen, budget).then_some(chosen)
}

fn hit_search(family: &[VertexSet], chosen: &mut VertexSet, budget: usize) -> bool {
    // family is sorted by size, so the first unhit member is a smallest one
    let mut unhit = family.iter().filter(|s| s.is_disjoint(chosen));
    let Some(branch_set) = unhit.next() else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    // pairwise-disjoint unhit members each need their own vertex
    let mut packed = branch_set.clone();
    let mut packing = 1;
    for s in unhit {
        if s.is_disjoint(&packed) {
            packing += 1;
            if packing > budget {
                return false;
            }
            packed.union_with(s);
        }
    }
    for x in branch_set.iter() {
        chosen.insert(x);
        if hit_search(family, chosen, budget - 1) {
            return true;
        }
        chosen.remove(x);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SeededRng;
    use alloc::vec;
    use rand::SeedableRng;

    fn all_pairs(n: usize) -> Vec<VertexSet> {
        let mut sets = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                sets.push(VertexSet::from([u, v]));
            }
        }
        sets
    }

    #[test]
    fn default_sizes() {
        // 2 e^2 * 8 * ln 10 = 272.2
        assert_eq!(default_scheme_size(10, 1, 1.0).unwrap(), 274);
        assert_eq!(default_scheme_size(10, 1, 2.0).unwrap(), 546);
        assert!(default_scheme_size(6, 2, 1.0).is_ok());
        assert_eq!(
            default_scheme_size(5, 2, 1.0),
            Err(SchemeError::TooFewVertices { n: 5, delta: 2 })
        );
        assert_eq!(default_scheme_size(10, 1, 0.5), Err(SchemeError::InvalidSafety(0.5)));
    }

    #[test]
    fn random_scheme_shape() {
        let mut rng = SeededRng::seed_from_u64(1);
        let s = gen_random_scheme(10, 1, 274, &mut rng).unwrap();
        assert_eq!(s.len(), 274);
        let mean = s.sets().iter().map(VertexSet::len).sum::<usize>() as f64 / 274.0;
        // Binomial(10, 1/2) mean 5, sd of the mean ~ 0.1
        assert!((mean - 5.0).abs() < 0.5, "{mean}");

        let mut rng2 = SeededRng::seed_from_u64(1);
        assert_eq!(gen_random_scheme(10, 1, 274, &mut rng2).unwrap(), s);

        let s = gen_random_scheme(10, 9, 2000, &mut rng).unwrap();
        let mean = s.sets().iter().map(VertexSet::len).sum::<usize>() as f64 / 2000.0;
        assert!((mean - 1.0).abs() < 0.1, "{mean}");

        assert_eq!(gen_random_scheme(10, 1, 0, &mut rng), Err(SchemeError::Empty));
    }

    #[test]
    fn explicit_pair_sets_are_valid() {
        let s = QueryScheme::new(6, 1, all_pairs(6)).unwrap();
        assert_eq!(s.len(), 15);
        assert!(verify_scheme(&s).unwrap().is_valid());
        assert!(verify_scheme_exhaustive(&s).unwrap().is_valid());
        let s = QueryScheme::new(8, 3, all_pairs(8)).unwrap();
        assert!(verify_scheme(&s).unwrap().is_valid());
    }

    #[test]
    fn full_set_alone_is_invalid() {
        let s = QueryScheme::new(6, 1, vec![VertexSet::full(6)]).unwrap();
        let SchemeVerdict::Counterexample(cx) = verify_scheme(&s).unwrap() else {
            panic!("expected a counterexample");
        };
        assert_eq!((cx.u, cx.v), (0, 1));
        assert_eq!(cx.w.len(), 2);
        assert!(cx.violates(&s));
    }

    #[test]
    fn uncovered_pair_gets_padded_witness() {
        // pair {2,5} never appears together: any W works, padded from the smallest ids
        let mut sets = all_pairs(6);
        sets.retain(|s| *s != VertexSet::from([2, 5]));
        let s = QueryScheme::new(6, 1, sets).unwrap();
        let SchemeVerdict::Counterexample(cx) = verify_scheme(&s).unwrap() else {
            panic!("expected a counterexample");
        };
        assert_eq!((cx.u, cx.v, cx.w.clone()), (2, 5, VertexSet::from([0, 1])));
        assert!(cx.violates(&s));
        assert_eq!(verify_scheme_exhaustive(&s).unwrap(), SchemeVerdict::Counterexample(cx));
    }

    #[test]
    fn precondition() {
        let s = QueryScheme::new(5, 2, all_pairs(5)).unwrap();
        assert_eq!(verify_scheme(&s), Err(SchemeError::TooFewVertices { n: 5, delta: 2 }));
        let mut rng = SeededRng::seed_from_u64(0);
        assert!(matches!(
            gen_verified_scheme(5, 2, DEFAULT_SAFETY, 3, &mut rng),
            Err(SchemeError::TooFewVertices { .. })
        ));
        assert_eq!(
            QueryScheme::new(3, 1, vec![VertexSet::from([3])]),
            Err(SchemeError::SetOutOfRange { index: 0, n: 3 })
        );
    }

    #[test]
    fn hitting_set_search() {
        let fam = vec![VertexSet::from([1, 2]), VertexSet::from([3, 4]), VertexSet::from([2, 3])];
        let h = small_hitting_set(fam.clone(), 2).unwrap();
        assert!(fam.iter().all(|s| !s.is_disjoint(&h)));
        assert_eq!(small_hitting_set(fam, 1), None);
        assert_eq!(small_hitting_set(vec![VertexSet::new()], 5), None);
        assert_eq!(small_hitting_set(vec![], 0), Some(VertexSet::new()));
    }

    #[test]
    fn combinations_enumerate_binomial() {
        let mut idx = vec![0, 1, 2];
        let mut count = 1;
        while next_combination(&mut idx, 7) {
            count += 1;
        }
        assert_eq!(count, 35);
    }

    #[test]
    fn verified_scheme_small_case() {
        let mut rng = SeededRng::seed_from_u64(7);
        let v = gen_verified_scheme(10, 1, DEFAULT_SAFETY, DEFAULT_MAX_ATTEMPTS, &mut rng).unwrap();
        assert_eq!(v.scheme.len(), 546);
        assert!(verify_scheme_exhaustive(&v.scheme).unwrap().is_valid());

        let mut rng = SeededRng::seed_from_u64(8);
        let v = gen_verified_scheme(12, 2, DEFAULT_SAFETY, DEFAULT_MAX_ATTEMPTS, &mut rng).unwrap();
        assert!(verify_scheme(&v.scheme).unwrap().is_valid());
    }

    #[test]
    fn tiny_random_scheme_is_rejected() {
        let mut rng = SeededRng::seed_from_u64(3);
        let s = gen_random_scheme(8, 1, 3, &mut rng).unwrap();
        let SchemeVerdict::Counterexample(cx) = verify_scheme(&s).unwrap() else {
            panic!("3 random sets cannot cover 28 pairs");
        };
        assert!(cx.violates(&s));
        assert_eq!(
            gen_verified_scheme(8, 1, DEFAULT_SAFETY, 0, &mut rng).unwrap_err(),
            SchemeError::AttemptsExhausted { attempts: 0, last: None }
        );
    }

    #[test]
    fn adding_sets_preserves_validity() {
        let mut s = QueryScheme::new(6, 1, all_pairs(6)).unwrap();
        s.extend([VertexSet::full(6), VertexSet::from([0])]).unwrap();
        assert!(verify_scheme(&s).unwrap().is_valid());
        assert!(s.extend([VertexSet::from([6])]).is_err());
    }
}
