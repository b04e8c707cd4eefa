use misrecon_core::generate::random_bounded;
use misrecon_core::oracle::verify_transcript;
use misrecon_core::reconstruct::{infer_edges, sample_query, scheme_reconstruct};
use misrecon_core::scheme::gen_verified_scheme;
use misrecon_core::{GraphOracle, OracleStrategy, SeededRng, StrategyKind, Transcript};
use proptest::prelude::*;
use rand::SeedableRng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn inferred_edges_contain_true_edges(
        seed in any::<u64>(),
        n in 2usize..25,
        d in 1usize..5,
        queries in 0usize..30,
        kind in 0usize..StrategyKind::ALL.len(),
    ) {
        let delta = d.min(n - 1);
        let mut rng = SeededRng::seed_from_u64(seed);
        let g = random_bounded(n, delta, 100_000, &mut rng).unwrap();
        let mut strategy = OracleStrategy::new(StrategyKind::ALL[kind], seed);
        let mut t = Transcript::new();
        for _ in 0..queries {
            let q = sample_query(n, delta, &mut rng);
            let a = strategy.answer(&g, &q);
            t.push(q, a).unwrap();
        }
        prop_assert!(verify_transcript(&g, &t));
        let r = infer_edges(n, &t).unwrap();
        for e in g.edges() {
            prop_assert!(r.graph.has_edge(e.u(), e.v()));
        }
        prop_assert_eq!(r.graph.edge_count() + r.witnessed_non_edges.len(), n * (n - 1) / 2);
    }
}

#[test]
fn verified_scheme_reconstructs_everything() {
    let mut rng = SeededRng::seed_from_u64(21);
    let scheme = gen_verified_scheme(10, 2, 2.0, 20, &mut rng).unwrap().scheme;
    for i in 0..40 {
        let g = random_bounded(10, 2, 100_000, &mut rng).unwrap();
        for kind in StrategyKind::ALL {
            let mut oracle = GraphOracle::new(&g, OracleStrategy::new(kind, i));
            let r = scheme_reconstruct(&mut oracle, &scheme).unwrap();
            assert_eq!(r.graph, g, "{kind} on {:?}", g.edges().collect::<Vec<_>>());
            assert_eq!(r.queries_used, scheme.len());
        }
    }
}
