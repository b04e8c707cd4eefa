//! Seeded parameter sweeps over the reconstruction algorithms.

use std::time::Instant;

use misrecon_core::generate::{random_bounded, GenerateError};
use misrecon_core::oracle::verify_transcript;
use misrecon_core::reconstruct::{randomized_reconstruct, scheme_reconstruct, ReconstructError};
use misrecon_core::scheme::{gen_verified_scheme, DEFAULT_MAX_ATTEMPTS, DEFAULT_SAFETY};
use misrecon_core::{
    Graph, GraphOracle, OracleStrategy, QueryScheme, ReconstructionParams, SchemeError, SeededRng,
    StrategyKind,
};
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Largest `n` accepted with the exact adversary.
pub const EXACT_ADVERSARY_MAX_N: usize = 20;

/// Rejection sampling for `n = 100, delta = 3` accepts roughly one draw in a
/// thousand, so the harness allows far more redraws than the library default.
pub const EXPERIMENT_RESAMPLE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Randomized,
    Scheme,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Randomized => "randomized",
            Algorithm::Scheme => "scheme",
        }
    }
}

/// Where each trial's hidden graph comes from.
#[derive(Debug, Clone)]
pub enum GroundTruth {
    /// A fresh bounded-degree random graph per trial.
    Random { max_resamples: usize },
    /// The same graph for every trial.
    Fixed(Graph),
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub ns: Vec<usize>,
    pub deltas: Vec<usize>,
    pub c_const: f64,
    pub oracles: Vec<StrategyKind>,
    pub trials: usize,
    pub base_seed: u64,
    pub ground_truth: GroundTruth,
    /// Used by the scheme algorithm; when absent a verified scheme is
    /// generated per `(n, delta)` cell from `base_seed`.
    pub scheme: Option<QueryScheme>,
}

impl ExperimentConfig {
    pub fn randomized(ns: Vec<usize>, deltas: Vec<usize>, oracles: Vec<StrategyKind>, trials: usize) -> Self {
        Self {
            algorithm: Algorithm::Randomized,
            ns,
            deltas,
            c_const: misrecon_core::reconstruct::DEFAULT_C_CONST,
            oracles,
            trials,
            base_seed: 0,
            ground_truth: GroundTruth::Random {
                max_resamples: EXPERIMENT_RESAMPLE_BUDGET,
            },
            scheme: None,
        }
    }

    /// Checks every field, naming the first offending one.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |field: &'static str, reason: String| Err(ExperimentError::InvalidConfig { field, reason });
        if self.trials == 0 {
            return bad("trials", "must be at least 1".into());
        }
        if self.ns.is_empty() {
            return bad("n", "no values given".into());
        }
        if self.deltas.is_empty() {
            return bad("delta", "no values given".into());
        }
        if self.oracles.is_empty() {
            return bad("oracle", "no strategies given".into());
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n < 2) {
            return bad("n", format!("{n} is below 2"));
        }
        if self.deltas.contains(&0) {
            return bad("delta", "must be at least 1".into());
        }
        for &n in &self.ns {
            if let Some(&d) = self.deltas.iter().find(|&&d| d >= n) {
                return bad("delta", format!("{d} is not below n = {n}"));
            }
        }
        if !(self.c_const.is_finite() && self.c_const > 0.0) {
            return bad("c_const", format!("{} is not a positive number", self.c_const));
        }
        if self.oracles.contains(&StrategyKind::ExactAdversary) {
            if let Some(&n) = self.ns.iter().find(|&&n| n > EXACT_ADVERSARY_MAX_N) {
                return bad(
                    "oracle",
                    format!("exact-adversary needs n <= {EXACT_ADVERSARY_MAX_N}, got {n}"),
                );
            }
        }
        if let GroundTruth::Fixed(g) = &self.ground_truth {
            if self.ns != [g.n()] {
                return bad("n", format!("must be exactly [{}] for the input graph", g.n()));
            }
            if let Some(&d) = self.deltas.iter().find(|&&d| d < g.max_degree()) {
                return bad(
                    "delta",
                    format!("{d} is below the input graph's max degree {}", g.max_degree()),
                );
            }
        }
        if let Some(s) = &self.scheme {
            if self.algorithm != Algorithm::Scheme {
                return bad("scheme", "only used with the scheme algorithm".into());
            }
            if self.ns != [s.n()] {
                return bad("n", format!("must be exactly [{}] for the scheme", s.n()));
            }
            if let Some(&d) = self.deltas.iter().find(|&&d| d > s.delta()) {
                return bad("delta", format!("{d} exceeds the scheme's bound {}", s.delta()));
            }
        }
        Ok(())
    }
}

/// One trial. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub delta: usize,
    pub algorithm: Algorithm,
    pub oracle: StrategyName,
    pub c_const: f64,
    pub seed: u64,
    pub queries: usize,
    pub success: bool,
    pub false_edges: usize,
    pub wall_ms: f64,
}

/// Serializes a strategy as its CLI name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrategyName(pub StrategyKind);

impl Serialize for StrategyName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.0.name())
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("invariant violated (n = {n}, delta = {delta}, seed = {seed}): {what}")]
    Invariant {
        n: usize,
        delta: usize,
        seed: u64,
        what: String,
    },
    #[error("no records to summarize")]
    EmptyRecords,
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl ExperimentError {
    pub fn is_invariant(&self) -> bool {
        matches!(self, ExperimentError::Invariant { .. })
    }
}

/// Random source for one trial: stream 0 draws the hidden graph, stream 1 the
/// queries.
pub fn trial_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = SeededRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    n: usize,
    delta: usize,
    oracle: StrategyKind,
}

fn run_trial(
    cfg: &ExperimentConfig,
    cell: Cell,
    trial: usize,
    scheme: Option<&QueryScheme>,
) -> Result<ExperimentRecord, ExperimentError> {
    let seed = cfg.base_seed.wrapping_add(trial as u64);
    let start = Instant::now();
    let truth = match &cfg.ground_truth {
        GroundTruth::Random { max_resamples } => {
            random_bounded(cell.n, cell.delta, *max_resamples, &mut trial_rng(seed, 0))?
        }
        GroundTruth::Fixed(g) => g.clone(),
    };
    let mut oracle = GraphOracle::new(&truth, OracleStrategy::new(cell.oracle, seed));
    let result = match scheme {
        Some(s) => scheme_reconstruct(&mut oracle, s)?,
        None => {
            let params = ReconstructionParams::new(cell.n, cell.delta, cfg.c_const)?;
            randomized_reconstruct(&mut oracle, &params, &mut trial_rng(seed, 1))?
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let invariant = |what: String| ExperimentError::Invariant {
        n: cell.n,
        delta: cell.delta,
        seed,
        what,
    };
    if !verify_transcript(&truth, &result.transcript) {
        return Err(invariant(format!("{} strategy gave a non-maximal answer", cell.oracle)));
    }
    let cmp = result.compare(&truth);
    if cmp.missing_edges > 0 {
        return Err(invariant(format!("{} true edges missing from the output", cmp.missing_edges)));
    }
    Ok(ExperimentRecord {
        n: cell.n,
        delta: cell.delta,
        algorithm: cfg.algorithm,
        oracle: StrategyName(cell.oracle),
        c_const: cfg.c_const,
        seed,
        queries: result.queries_used,
        success: cmp.false_edges == 0,
        false_edges: cmp.false_edges,
        wall_ms: (wall_ms * 1e3).round() / 1e3,
    })
}

/// Runs every `(n, delta, oracle)` cell for `trials` trials, in parallel.
///
/// Records come back ordered by cell (n, then delta, then oracle in config
/// order) and trial index. Trial `i` uses seed `base_seed + i` in every cell.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for &n in &cfg.ns {
        for &delta in &cfg.deltas {
            for &oracle in &cfg.oracles {
                cells.push(Cell { n, delta, oracle });
            }
        }
    }
    // one scheme per (n, delta), shared by every trial and strategy
    let mut schemes: Vec<((usize, usize), QueryScheme)> = Vec::new();
    if cfg.algorithm == Algorithm::Scheme {
        for &n in &cfg.ns {
            for &delta in &cfg.deltas {
                let scheme = match &cfg.scheme {
                    Some(s) => s.clone(),
                    None => {
                        let mut rng = SeededRng::seed_from_u64(cfg.base_seed);
                        gen_verified_scheme(n, delta, DEFAULT_SAFETY, DEFAULT_MAX_ATTEMPTS, &mut rng)?.scheme
                    }
                };
                schemes.push(((n, delta), scheme));
            }
        }
    }
    let scheme_for = |cell: Cell| {
        schemes
            .iter()
            .find(|(key, _)| *key == (cell.n, cell.delta))
            .map(|(_, s)| s)
    };
    let tasks: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let mut out: Vec<((usize, usize), ExperimentRecord)> = tasks
        .par_iter()
        .map(|&(c, t)| run_trial(cfg, cells[c], t, scheme_for(cells[c])).map(|r| ((c, t), r)))
        .collect::<Result<_, _>>()?;
    out.sort_by_key(|(key, _)| *key);
    Ok(out.into_iter().map(|(_, r)| r).collect())
}

/// Aggregates for one `(n, delta, algorithm, oracle)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub n: usize,
    pub delta: usize,
    pub algorithm: Algorithm,
    pub oracle: StrategyName,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_queries: f64,
    pub max_queries: usize,
    pub mean_wall_ms: f64,
}

/// Per-cell aggregates, in order of first appearance.
pub fn summarize(records: &[ExperimentRecord]) -> Result<Vec<SummaryRow>, ExperimentError> {
    if records.is_empty() {
        return Err(ExperimentError::EmptyRecords);
    }
    let mut rows: Vec<(SummaryRow, usize, f64)> = Vec::new();
    for r in records {
        let key = (r.n, r.delta, r.algorithm, r.oracle);
        let pos = match rows
            .iter()
            .position(|(s, ..)| (s.n, s.delta, s.algorithm, s.oracle) == key)
        {
            Some(p) => p,
            None => {
                rows.push((
                    SummaryRow {
                        n: r.n,
                        delta: r.delta,
                        algorithm: r.algorithm,
                        oracle: r.oracle,
                        trials: 0,
                        successes: 0,
                        success_rate: 0.0,
                        mean_queries: 0.0,
                        max_queries: 0,
                        mean_wall_ms: 0.0,
                    },
                    0,
                    0.0,
                ));
                rows.len() - 1
            }
        };
        let (row, query_sum, wall_sum) = &mut rows[pos];
        row.trials += 1;
        row.successes += usize::from(r.success);
        row.max_queries = row.max_queries.max(r.queries);
        *query_sum += r.queries;
        *wall_sum += r.wall_ms;
    }
    Ok(rows
        .into_iter()
        .map(|(mut row, query_sum, wall_sum)| {
            let t = row.trials as f64;
            row.success_rate = row.successes as f64 / t;
            row.mean_queries = query_sum as f64 / t;
            row.mean_wall_ms = wall_sum / t;
            row
        })
        .collect())
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> Result<String, ExperimentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if records.is_empty() {
        w.write_record([
            "n", "delta", "algorithm", "oracle", "c_const", "seed", "queries", "success", "false_edges", "wall_ms",
        ])?;
    }
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}

pub fn summary_to_csv(rows: &[SummaryRow]) -> Result<String, ExperimentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}
