//! Multi-threaded scheme verification.

use misrecon_core::scheme::{check_size, pair_counterexample};
use misrecon_core::{QueryScheme, SchemeError, SchemeVerdict};
use rayon::prelude::*;

/// Same verdict as [`misrecon_core::scheme::verify_scheme`], with pairs
/// checked across threads. The reported counterexample is still the one for
/// the lexicographically first uncovered pair.
pub fn verify_scheme_parallel(scheme: &QueryScheme) -> Result<SchemeVerdict, SchemeError> {
    check_size(scheme.n(), scheme.delta())?;
    let n = scheme.n();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Ok(pairs
        .par_iter()
        .find_map_first(|&(u, v)| pair_counterexample(scheme, u, v))
        .map_or(SchemeVerdict::Valid, SchemeVerdict::Counterexample))
}

#[cfg(test)]
mod tests {
    use super::*;
    use misrecon_core::scheme::{gen_random_scheme, verify_scheme};
    use misrecon_core::SeededRng;
    use rand::SeedableRng;

    #[test]
    fn matches_sequential() {
        let mut rng = SeededRng::seed_from_u64(4);
        for size in [20, 60, 120, 200, 300] {
            let s = gen_random_scheme(10, 1, size, &mut rng).unwrap();
            assert_eq!(verify_scheme_parallel(&s).unwrap(), verify_scheme(&s).unwrap());
        }
    }
}
