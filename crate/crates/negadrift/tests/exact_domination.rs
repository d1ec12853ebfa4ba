//! Exact domination results at enumerable scale.
//!
//! The fitness-proportionate GA projected onto fitness vectors is itself a
//! Markov chain (selection sees only fitness; the offspring fitness law of
//! standard bit mutation depends only on the parent's fitness). Propagating
//! it exactly shows that every individual's fitness distribution dominates
//! `Bin(n, 1/2)` — the induction behind the fitness-floor argument — without
//! any sampling.

use negadrift::driftlab::domination_test_exact;
use negadrift::mutation::offspring_distance_pmf;
use negadrift::selection::fp_probabilities;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `pmf[k] = Pr[OneMax(mut(x)) = k]` given `OneMax(x) = f`, mutation rate p.
fn mutated_fitness_pmf(f: usize, n: usize, p: f64) -> Vec<f64> {
    // Distances to the all-ones target: parent at distance n - f.
    let dist = offspring_distance_pmf(n - f, n, p);
    (0..=n).map(|k| dist[n - k]).collect()
}

/// Marginal fitness distribution of one individual of the simple GA at
/// times `0..=t_max`, by exact propagation over fitness vectors.
fn simple_ga_fitness_marginals(n: usize, mu: usize, t_max: usize) -> Vec<Vec<f64>> {
    let support = n + 1;
    let state_count = support.pow(mu as u32);
    let binomial = offspring_distance_pmf(0, n, 0.5);
    let mut_pmfs: Vec<Vec<f64>> = (0..=n)
        .map(|f| mutated_fitness_pmf(f, n, 1.0 / n as f64))
        .collect();

    let decode = |mut s: usize| -> Vec<usize> {
        (0..mu)
            .map(|_| {
                let f = s % support;
                s /= support;
                f
            })
            .collect()
    };

    // Initial state distribution: independent Bin(n, 1/2) fitnesses.
    let mut dist = vec![0.0f64; state_count];
    for (s, d) in dist.iter_mut().enumerate() {
        *d = decode(s).iter().map(|&f| binomial[f]).product();
    }

    let mut marginals = vec![binomial.clone()];
    for _ in 1..=t_max {
        // One-slot offspring law per state, then the product transition.
        let mut next = vec![0.0f64; state_count];
        let mut marginal = vec![0.0f64; support];
        for (s, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let fitness: Vec<f64> = decode(s).iter().map(|&f| f as f64).collect();
            let probs = fp_probabilities(&fitness).unwrap();
            let mut slot = vec![0.0f64; support];
            for (v, &pv) in probs.iter().enumerate() {
                if pv == 0.0 {
                    continue;
                }
                let pmf = &mut_pmfs[fitness[v] as usize];
                for (k, &w) in pmf.iter().enumerate() {
                    slot[k] += pv * w;
                }
            }
            for (k, &w) in slot.iter().enumerate() {
                marginal[k] += mass * w;
            }
            for (s2, n2) in next.iter_mut().enumerate() {
                let product: f64 = decode(s2).iter().map(|&f| slot[f]).product();
                *n2 += mass * product;
            }
        }
        dist = next;
        let total: f64 = dist.iter().sum();
        assert!((total - 1.0).abs() < 1e-9, "state mass drifted to {total}");
        marginals.push(marginal);
    }
    marginals
}

#[test]
fn simple_ga_fitness_dominates_random_search_exactly() {
    for &(n, mu) in &[(4usize, 2usize), (6, 3)] {
        let binomial = offspring_distance_pmf(0, n, 0.5);
        let marginals = simple_ga_fitness_marginals(n, mu, 2);
        for (t, marginal) in marginals.iter().enumerate() {
            let sum: f64 = marginal.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9, "n={n} mu={mu} t={t}: mass {sum}");
            let verdict = domination_test_exact(&binomial, marginal).unwrap();
            assert!(
                verdict.holds,
                "n={n} mu={mu} t={t}: worst gap {} at {}",
                verdict.worst_gap, verdict.worst_index
            );
        }
    }
}

/// Fitness-proportionate picking dominates uniform picking of the same
/// non-negative values, checked exactly on the induced value distributions.
#[test]
fn fp_pick_dominates_uniform_pick_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240816);
    for case in 0..300 {
        let mu = rng.gen_range(1..=8);
        let values: Vec<f64> = (0..mu)
            .map(|_| {
                if rng.gen_bool(0.25) {
                    0.0
                } else {
                    // Ties on purpose: draw from a small grid.
                    rng.gen_range(0..5) as f64
                }
            })
            .collect();

        let mut support: Vec<f64> = values.clone();
        support.sort_by(|a, b| a.partial_cmp(b).unwrap());
        support.dedup();

        let uniform_pmf: Vec<f64> = support
            .iter()
            .map(|&v| values.iter().filter(|&&x| x == v).count() as f64 / mu as f64)
            .collect();
        let fp = fp_probabilities(&values).unwrap();
        let fp_pmf: Vec<f64> = support
            .iter()
            .map(|&v| {
                values
                    .iter()
                    .zip(&fp)
                    .filter(|(&x, _)| x == v)
                    .map(|(_, &p)| p)
                    .sum()
            })
            .collect();

        let verdict = domination_test_exact(&uniform_pmf, &fp_pmf).unwrap();
        assert!(
            verdict.holds,
            "case {case}: values {values:?} worst gap {}",
            verdict.worst_gap
        );
    }
}
