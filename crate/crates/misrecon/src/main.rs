use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use misrecon::demos::{bounds_summary, clique_pair_summary, cycle_summary};
use misrecon::experiment::{
    records_to_csv, run_experiment, summarize, summary_to_csv, Algorithm, ExperimentConfig, ExperimentError,
    GroundTruth, EXACT_ADVERSARY_MAX_N, EXPERIMENT_RESAMPLE_BUDGET,
};
use misrecon::format::{self, FormatError};
use misrecon::verify::verify_scheme_parallel;
use misrecon_core::generate::{clique_pair_random, cycle, path, random_bounded, DEFAULT_RESAMPLE_BUDGET};
use misrecon_core::oracle::verify_transcript;
use misrecon_core::reconstruct::{randomized_reconstruct, scheme_reconstruct};
use misrecon_core::scheme::{
    gen_random_scheme, gen_verified_scheme, verify_scheme_exhaustive, DEFAULT_MAX_ATTEMPTS, DEFAULT_SAFETY,
};
use misrecon_core::{
    Graph, GraphOracle, OracleStrategy, ReconstructionParams, SchemeVerdict, SeededRng, StrategyKind,
};
use rand::SeedableRng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "misrecon", version, about = "Graph reconstruction from maximal independent set queries")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format for experiment records.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Comma-separated oracle strategies.
    #[arg(long, global = true, value_delimiter = ',')]
    oracle: Option<Vec<StrategyKind>>,
    #[arg(long, global = true, default_value_t = misrecon_core::reconstruct::DEFAULT_C_CONST)]
    c_const: f64,
    /// Write the oracle transcript of a `reconstruct` run as JSON.
    #[arg(long, global = true)]
    dump_transcript: Option<PathBuf>,
    /// Answer with the exhaustive information-minimizing adversary (n <= 20).
    #[arg(long, global = true)]
    exact_adversary: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph.
    Gen(GenArgs),
    /// Reconstruct a graph through a simulated oracle.
    Reconstruct(ReconstructArgs),
    /// Generate or verify query schemes.
    #[command(subcommand)]
    Scheme(SchemeCommand),
    /// Seeded parameter sweep.
    Experiment(ExperimentArgs),
    /// Lower-bound demonstrations.
    #[command(subcommand)]
    Lb(LbCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Random,
    Cycle,
    Path,
    CliquePair,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = Family::Random)]
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    /// Clique size for the clique-pair family.
    #[arg(long = "N", alias = "side")]
    side: Option<usize>,
    /// Cross-edge probability for the clique-pair family.
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = DEFAULT_RESAMPLE_BUDGET)]
    max_resamples: usize,
    /// Write JSON instead of the edge list.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Hidden graph (edge list or JSON).
    #[arg(long)]
    graph: PathBuf,
    /// Degree bound; defaults to the graph's maximum degree.
    #[arg(long)]
    delta: Option<usize>,
    /// Query with this scheme instead of random sets.
    #[arg(long)]
    scheme: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SchemeCommand {
    /// Draw random schemes until one verifies.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = DEFAULT_SAFETY)]
        safety: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
        max_attempts: usize,
        /// Draw one unverified scheme of exactly this size instead.
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the covering condition of a scheme file.
    Verify {
        #[arg(long)]
        scheme: PathBuf,
        /// Use the brute-force verifier.
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Randomized,
    Scheme,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Randomized)]
    algorithm: AlgorithmArg,
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    delta: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Fixed hidden graph for every trial.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Pre-verified scheme for the scheme algorithm.
    #[arg(long)]
    scheme: Option<PathBuf>,
    #[arg(long, default_value_t = EXPERIMENT_RESAMPLE_BUDGET)]
    max_resamples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-cell aggregates here.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Subcommand)]
enum LbCommand {
    /// Partition refinement on a cycle under random queries.
    Cycle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        queries: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Non-edge accounting on random clique pairs.
    CliquePair {
        #[arg(long = "N", alias = "side")]
        side: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Query budget as a fraction of the non-edge count.
        #[arg(long, default_value_t = 0.5)]
        budget_fraction: f64,
    },
    /// Evaluate the closed-form bounds.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
    },
}

enum CliError {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Format(String),
    Invariant(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(..) | CliError::Format(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Format(m) => write!(f, "{m}"),
            CliError::Invariant(m) => write!(f, "invariant violated: {m}"),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Invariant { .. } => CliError::Invariant(e.to_string()),
            ExperimentError::Csv(_) => CliError::Format(e.to_string()),
            other => usage(other),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn parsed<T>(path: &Path, r: Result<T, FormatError>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    s.push('\n');
    s
}

impl Cli {
    fn strategies(&self, default: &[StrategyKind]) -> Vec<StrategyKind> {
        if self.exact_adversary {
            return vec![StrategyKind::ExactAdversary];
        }
        self.oracle.clone().unwrap_or_else(|| default.to_vec())
    }

    fn check_exact(&self, kinds: &[StrategyKind], n: usize) -> Result<(), CliError> {
        if kinds.contains(&StrategyKind::ExactAdversary) && n > EXACT_ADVERSARY_MAX_N {
            return Err(usage(format!(
                "exact-adversary is limited to n <= {EXACT_ADVERSARY_MAX_N}, got n = {n}"
            )));
        }
        Ok(())
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Gen(a) => gen(cli, a),
        Command::Reconstruct(a) => reconstruct(cli, a),
        Command::Scheme(c) => scheme(cli, c),
        Command::Experiment(a) => experiment(cli, a),
        Command::Lb(c) => lb(cli, c),
    }
}

fn gen(cli: &Cli, a: &GenArgs) -> Result<(), CliError> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| usage(format!("--{flag} is required for this family")));
    let mut rng = SeededRng::seed_from_u64(cli.seed);
    let g = match a.family {
        Family::Random => random_bounded(need(a.n, "n")?, need(a.delta, "delta")?, a.max_resamples, &mut rng),
        Family::Cycle => cycle(need(a.n, "n")?),
        Family::Path => Ok(path(need(a.n, "n")?)),
        Family::CliquePair => clique_pair_random(need(a.side, "N")?, a.density, &mut rng),
    }
    .map_err(usage)?;
    let text = if a.json {
        with_newline(format::graph_to_json(&g))
    } else {
        format::serialize_graph(&g)
    };
    emit(a.out.as_deref(), &text)
}

fn load_graph(p: &Path) -> Result<Graph, CliError> {
    parsed(p, format::parse_graph_auto(&read(p)?))
}

fn reconstruct(cli: &Cli, a: &ReconstructArgs) -> Result<(), CliError> {
    let g = load_graph(&a.graph)?;
    let kind = cli.strategies(&[StrategyKind::LexGreedy])[0];
    cli.check_exact(&[kind], g.n())?;
    let mut oracle = GraphOracle::new(&g, OracleStrategy::new(kind, cli.seed));
    let result = match &a.scheme {
        Some(p) => {
            let s = parsed(p, format::scheme_from_json(&read(p)?))?;
            scheme_reconstruct(&mut oracle, &s).map_err(usage)?
        }
        None => {
            let delta = a.delta.unwrap_or(g.max_degree().max(1));
            if delta < g.max_degree() {
                eprintln!(
                    "warning: --delta {delta} is below the graph's maximum degree {}",
                    g.max_degree()
                );
            }
            let params = ReconstructionParams::new(g.n(), delta, cli.c_const).map_err(usage)?;
            let mut rng = SeededRng::seed_from_u64(cli.seed);
            rng.set_stream(1);
            randomized_reconstruct(&mut oracle, &params, &mut rng).map_err(usage)?
        }
    };
    if !verify_transcript(&g, &result.transcript) {
        return Err(CliError::Invariant("oracle gave a non-maximal answer".into()));
    }
    let cmp = result.compare(&g);
    if cmp.missing_edges > 0 {
        return Err(CliError::Invariant(format!(
            "{} true edges missing from the output",
            cmp.missing_edges
        )));
    }
    if let Some(p) = &cli.dump_transcript {
        emit(Some(p), &with_newline(format::transcript_to_json(&result.transcript)))?;
    }
    eprintln!(
        "queries: {}, exact: {}, false edges: {}",
        result.queries_used,
        cmp.exact(),
        cmp.false_edges
    );
    emit(a.out.as_deref(), &with_newline(format::result_to_json(&result)))
}

fn scheme(cli: &Cli, c: &SchemeCommand) -> Result<(), CliError> {
    match c {
        SchemeCommand::Gen {
            n,
            delta,
            safety,
            max_attempts,
            size,
            out,
        } => {
            let mut rng = SeededRng::seed_from_u64(cli.seed);
            let s = match size {
                Some(size) => gen_random_scheme(*n, *delta, *size, &mut rng).map_err(usage)?,
                None => {
                    let v = gen_verified_scheme(*n, *delta, *safety, *max_attempts, &mut rng).map_err(usage)?;
                    eprintln!("verified {} sets after {} attempt(s)", v.scheme.len(), v.attempts);
                    v.scheme
                }
            };
            emit(out.as_deref(), &with_newline(format::scheme_to_json(&s)))
        }
        SchemeCommand::Verify { scheme, exhaustive } => {
            let s = parsed(scheme, format::scheme_from_json(&read(scheme)?))?;
            let verdict = if *exhaustive {
                verify_scheme_exhaustive(&s)
            } else {
                verify_scheme_parallel(&s)
            }
            .map_err(usage)?;
            let doc = match verdict {
                SchemeVerdict::Valid => json!({"valid": true, "n": s.n(), "delta": s.delta(), "sets": s.len()}),
                SchemeVerdict::Counterexample(cx) => json!({
                    "valid": false, "n": s.n(), "delta": s.delta(), "sets": s.len(),
                    "counterexample": {"u": cx.u, "v": cx.v, "w": cx.w.to_vec()},
                }),
            };
            emit(None, &with_newline(doc.to_string()))
        }
    }
}

fn experiment(cli: &Cli, a: &ExperimentArgs) -> Result<(), CliError> {
    let oracles = cli.strategies(&[StrategyKind::LexGreedy]);
    let mut cfg = ExperimentConfig::randomized(a.n.clone(), a.delta.clone(), oracles, a.trials);
    cfg.algorithm = match a.algorithm {
        AlgorithmArg::Randomized => Algorithm::Randomized,
        AlgorithmArg::Scheme => Algorithm::Scheme,
    };
    cfg.c_const = cli.c_const;
    cfg.base_seed = cli.seed;
    cfg.ground_truth = GroundTruth::Random {
        max_resamples: a.max_resamples,
    };
    if let Some(p) = &a.graph {
        let g = load_graph(p)?;
        if cfg.ns.is_empty() {
            cfg.ns = vec![g.n()];
        }
        if cfg.deltas.is_empty() {
            cfg.deltas = vec![g.max_degree().max(1)];
        }
        cfg.ground_truth = GroundTruth::Fixed(g);
    }
    if let Some(p) = &a.scheme {
        let s = parsed(p, format::scheme_from_json(&read(p)?))?;
        if cfg.ns.is_empty() {
            cfg.ns = vec![s.n()];
        }
        if cfg.deltas.is_empty() {
            cfg.deltas = vec![s.delta()];
        }
        cfg.scheme = Some(s);
    }
    let records = run_experiment(&cfg)?;
    let text = match cli.format {
        OutFormat::Csv => records_to_csv(&records)?,
        OutFormat::Json => with_newline(serde_json::to_string(&records).expect("plain data serializes")),
    };
    emit(a.out.as_deref(), &text)?;
    if let Some(p) = &a.summary {
        let rows = summarize(&records)?;
        let text = match cli.format {
            OutFormat::Csv => summary_to_csv(&rows)?,
            OutFormat::Json => with_newline(serde_json::to_string(&rows).expect("plain data serializes")),
        };
        emit(Some(p), &text)?;
    }
    Ok(())
}

fn lb(cli: &Cli, c: &LbCommand) -> Result<(), CliError> {
    let doc = match c {
        LbCommand::Cycle { n, queries, trials } => {
            let kinds = cli.strategies(&[
                StrategyKind::LexGreedy,
                StrategyKind::RandomGreedy,
                StrategyKind::MinReveal,
                StrategyKind::Hider,
            ]);
            cli.check_exact(&kinds, *n)?;
            serde_json::to_string(&cycle_summary(*n, *queries, *trials, &kinds, cli.seed).map_err(usage)?)
        }
        LbCommand::CliquePair {
            side,
            trials,
            density,
            budget_fraction,
        } => {
            let kind = cli.strategies(&[StrategyKind::Hider])[0];
            cli.check_exact(&[kind], 2 * side)?;
            let s = clique_pair_summary(*side, *density, *budget_fraction, kind, *trials, cli.seed).map_err(usage)?;
            if s.runs.iter().any(|r| r.missing_edges > 0) {
                return Err(CliError::Invariant("true edges missing from a clique-pair reconstruction".into()));
            }
            serde_json::to_string(&s)
        }
        LbCommand::Bounds { n, delta } => serde_json::to_string(&bounds_summary(*n, *delta).map_err(usage)?),
    }
    .expect("plain data serializes");
    emit(None, &with_newline(doc))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
