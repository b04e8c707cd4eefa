//! Batch runs of the lower-bound demonstrations, summarized for JSON output.

use misrecon_core::lowerbound::{
    clique_pair_trial, cycle_query_lower_bound, cycle_trial, is_query_lower_bound, LowerBoundError,
};
use misrecon_core::{SeededRng, StrategyKind};
use rand::SeedableRng;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CycleSummary {
    pub n: usize,
    pub queries: usize,
    pub trials: usize,
    pub strategies: Vec<&'static str>,
    /// `ceil(log3 n) - 1`.
    pub query_lower_bound: u32,
    /// `min(n, 3^queries)`.
    pub class_cap: usize,
    pub max_classes: usize,
    pub min_largest_class: usize,
    pub trials_with_pair: usize,
    pub swap_consistent: usize,
    pub swap_inconsistent: usize,
    pub invalid_transcripts: usize,
}

fn class_cap(n: usize, queries: usize) -> usize {
    let mut cap = 1usize;
    for _ in 0..queries {
        cap = cap.saturating_mul(3);
        if cap >= n {
            return n;
        }
    }
    cap.min(n)
}

/// Runs `trials` cycle trials; trial `i` is seeded with `seed + i`.
pub fn cycle_summary(
    n: usize,
    queries: usize,
    trials: usize,
    strategies: &[StrategyKind],
    seed: u64,
) -> Result<CycleSummary, LowerBoundError> {
    let mut s = CycleSummary {
        n,
        queries,
        trials,
        strategies: strategies.iter().map(|k| k.name()).collect(),
        query_lower_bound: cycle_query_lower_bound(n)?,
        class_cap: class_cap(n, queries),
        max_classes: 0,
        min_largest_class: usize::MAX,
        trials_with_pair: 0,
        swap_consistent: 0,
        swap_inconsistent: 0,
        invalid_transcripts: 0,
    };
    for i in 0..trials {
        let mut rng = SeededRng::seed_from_u64(seed.wrapping_add(i as u64));
        let t = cycle_trial(n, queries, strategies, &mut rng)?;
        s.max_classes = s.max_classes.max(t.classes);
        s.min_largest_class = s.min_largest_class.min(t.largest_class);
        s.trials_with_pair += usize::from(t.pair.is_some());
        match t.swap_consistent {
            Some(true) => s.swap_consistent += 1,
            Some(false) => s.swap_inconsistent += 1,
            None => {}
        }
        s.invalid_transcripts += usize::from(!t.transcript_valid);
    }
    if trials == 0 {
        s.min_largest_class = 0;
    }
    Ok(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct CliquePairRun {
    pub seed: u64,
    pub non_edges: usize,
    pub queries: usize,
    pub reveal_count: usize,
    pub max_answer_size: usize,
    pub false_edges: usize,
    pub missing_edges: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CliquePairSummary {
    #[serde(rename = "N")]
    pub side: usize,
    pub delta: usize,
    pub density: f64,
    pub budget_fraction: f64,
    pub strategy: &'static str,
    pub trials: usize,
    pub max_answer_size: usize,
    pub reveal_within_queries: bool,
    /// Every run with fewer queries than non-edges ended inexact.
    pub inexact_when_under_budget: bool,
    pub mean_non_edges: f64,
    pub runs: Vec<CliquePairRun>,
}

/// Runs `trials` clique-pair trials; trial `i` is seeded with `seed + i`.
pub fn clique_pair_summary(
    side: usize,
    density: f64,
    budget_fraction: f64,
    strategy: StrategyKind,
    trials: usize,
    seed: u64,
) -> Result<CliquePairSummary, LowerBoundError> {
    let mut runs = Vec::with_capacity(trials);
    for i in 0..trials {
        let run_seed = seed.wrapping_add(i as u64);
        let mut rng = SeededRng::seed_from_u64(run_seed);
        let t = clique_pair_trial(side, density, budget_fraction, strategy, &mut rng)?;
        runs.push(CliquePairRun {
            seed: run_seed,
            non_edges: t.non_edges,
            queries: t.queries,
            reveal_count: t.reveal_count,
            max_answer_size: t.max_answer_size,
            false_edges: t.false_edges,
            missing_edges: t.missing_edges,
        });
    }
    Ok(CliquePairSummary {
        side,
        delta: (2 * side).saturating_sub(1),
        density,
        budget_fraction,
        strategy: strategy.name(),
        trials,
        max_answer_size: runs.iter().map(|r| r.max_answer_size).max().unwrap_or(0),
        reveal_within_queries: runs.iter().all(|r| r.reveal_count <= r.queries),
        inexact_when_under_budget: runs
            .iter()
            .filter(|r| r.queries < r.non_edges)
            .all(|r| r.false_edges > 0),
        mean_non_edges: if trials == 0 {
            0.0
        } else {
            runs.iter().map(|r| r.non_edges as f64).sum::<f64>() / trials as f64
        },
        runs,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsSummary {
    pub n: usize,
    pub delta: usize,
    pub cycle_query_lower_bound: u32,
    pub information_bound_bits: f64,
    pub information_hypothesis_met: bool,
}

pub fn bounds_summary(n: usize, delta: usize) -> Result<BoundsSummary, LowerBoundError> {
    let info = is_query_lower_bound(n, delta)?;
    Ok(BoundsSummary {
        n,
        delta,
        cycle_query_lower_bound: cycle_query_lower_bound(n)?,
        information_bound_bits: info.bits,
        information_hypothesis_met: info.hypothesis_met,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap() {
        assert_eq!(class_cap(81, 3), 27);
        assert_eq!(class_cap(81, 4), 81);
        assert_eq!(class_cap(10, 0), 1);
        assert_eq!(class_cap(5, 200), 5);
    }

    #[test]
    fn small_cycle() {
        let s = cycle_summary(27, 2, 50, &[StrategyKind::LexGreedy], 1).unwrap();
        assert_eq!(s.query_lower_bound, 2);
        assert!(s.max_classes <= 9);
        assert_eq!(s.trials_with_pair, 50);
        assert_eq!(s.swap_consistent + s.swap_inconsistent, 50);
        assert_eq!(s.invalid_transcripts, 0);
    }

    #[test]
    fn small_clique_pair() {
        let s = clique_pair_summary(4, 0.5, 0.5, StrategyKind::Hider, 20, 9).unwrap();
        assert_eq!(s.delta, 7);
        assert!(s.max_answer_size <= 2);
        assert!(s.reveal_within_queries);
        assert!(s.inexact_when_under_budget);
        assert!(s.runs.iter().all(|r| r.missing_edges == 0));
    }

    #[test]
    fn bounds() {
        let b = bounds_summary(1024, 64).unwrap();
        assert_eq!(b.information_bound_bits, 65534.0);
        assert!(b.information_hypothesis_met);
        assert_eq!(b.cycle_query_lower_bound, 6);
    }
}
