//! The drift-bound invariant on randomized finite chains: whenever the
//! checker certifies a pair `(delta, Delta)` against the chain's threshold,
//! the exact hitting quantities must respect the closed-form bounds. The
//! acceptance suite runs the full 200-chain version; this is the crate-level
//! regression at a smaller size.

use negadrift::bounds::{negdrift_lemma_bounds, DriftBoundInput};
use negadrift::driftlab::{
    chain_drift_check, chain_exact_hitting, expectation_trajectory, random_drifty_chain,
    ExpectedHittingTime,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn accepted_chains_obey_the_drift_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240815);
    let horizon = 300usize;
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < 60 {
        attempts += 1;
        assert!(
            attempts < 2_000,
            "chain generator acceptance rate collapsed"
        );
        let chain = random_drifty_chain(20, &mut rng);
        let Some(params) = chain_drift_check(&chain) else {
            continue;
        };
        accepted += 1;

        let delta = params.drift_rate;
        let disturbance = params.disturbance;
        let m = chain.threshold();
        let analysis = chain_exact_hitting(&chain, horizon);

        // Pr[T < L] <= L Delta / (delta M), every horizon up to 300.
        for l in 1..=horizon {
            let bound = (l as f64 * disturbance / (delta * m)).min(1.0);
            assert!(
                analysis.pr_below[l] <= bound * (1.0 + 1e-9) + 1e-12,
                "chain {accepted}: Pr[T<{l}] = {} above bound {bound}",
                analysis.pr_below[l]
            );
        }

        // E[T] >= delta M / (2 Delta) - 1/2.
        let et_bound = delta * m / (2.0 * disturbance) - 0.5;
        match analysis.expected {
            ExpectedHittingTime::Exact(v) => {
                assert!(
                    v >= et_bound * (1.0 - 1e-9) - 1e-9,
                    "chain {accepted}: exact E[T] = {v} below bound {et_bound}"
                );
            }
            ExpectedHittingTime::Infinite => {}
            ExpectedHittingTime::TruncatedLowerBound(v) => {
                panic!("chain {accepted}: solve unexpectedly unavailable (truncated at {v})")
            }
        }

        // Bounded expectation along the unstopped process.
        let cap = disturbance / delta;
        for (t, &e) in expectation_trajectory(&chain, horizon).iter().enumerate() {
            assert!(
                e <= cap * (1.0 + 1e-9),
                "chain {accepted}: E[X_{t}] = {e} above Delta/delta = {cap}"
            );
        }

        // The bound calculator agrees with the raw formulas.
        let report = negdrift_lemma_bounds(&DriftBoundInput {
            drift_rate: delta,
            disturbance,
            threshold: m,
            horizon: horizon as u64,
        })
        .unwrap();
        assert!(analysis.pr_below_horizon() <= report.pr_upper * (1.0 + 1e-9) + 1e-12);
        if let ExpectedHittingTime::Exact(v) = analysis.expected {
            assert!(v >= report.e_t_lower.unwrap() * (1.0 - 1e-9) - 1e-9);
        }
    }
}
