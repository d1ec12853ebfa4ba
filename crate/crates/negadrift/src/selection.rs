//! Selection operators and reproduction-number accounting.
//!
//! A selection outcome is a tuple `Q` of parent indices (one per offspring
//! slot) plus the per-parent reproduction numbers `R(i) = |{j : Q_j = i}|`.
//! `sum_i R(i)` always equals the number of slots.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelectionOperator {
    /// Keep a mu-subset of maximal fitness (ties broken uniformly at
    /// random), then fill every slot with an independent uniform draw from
    /// that subset. This is the (mu,lambda) EA's selection.
    TruncationUniform { mu: usize },
    /// Each slot independently picks index i with probability proportional
    /// to its (non-negative) fitness; uniform when all fitnesses are zero.
    FitnessProportionate,
    /// Each slot independently uniform over the whole population.
    UniformAll,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionOutcome {
    /// Parent index per slot, `Q`, 0-based.
    pub indices: Vec<usize>,
    /// Reproduction numbers `R(i)`, aligned with the population.
    pub counts: Vec<usize>,
}

/// Fitness-proportionate probabilities: `n_i / sum n_j`, or uniform when
/// every entry is zero.
pub fn fp_probabilities(fitness: &[f64]) -> Result<Vec<f64>> {
    if fitness.is_empty() {
        return Err(Error::argument("fitness vector must be non-empty"));
    }
    if fitness.iter().any(|f| !f.is_finite() || *f < 0.0) {
        return Err(Error::argument(
            "fitness-proportionate selection requires finite non-negative fitness",
        ));
    }
    let total: f64 = fitness.iter().sum();
    if total > 0.0 {
        Ok(fitness.iter().map(|f| f / total).collect())
    } else {
        Ok(vec![1.0 / fitness.len() as f64; fitness.len()])
    }
}

/// Count `R(i) = |{j : Q_j = i}|` for indices in `[0..lambda)`.
pub fn reproduction_numbers(indices: &[usize], lambda: usize) -> Result<Vec<usize>> {
    let mut counts = vec![0usize; lambda];
    for &q in indices {
        if q >= lambda {
            return Err(Error::argument(format!(
                "selected index {q} out of range for population size {lambda}"
            )));
        }
        counts[q] += 1;
    }
    Ok(counts)
}

fn sample_from_cumulative(cum: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

/// Draw a full selection outcome (`lambda = fitness.len()` slots).
pub fn select(
    fitness: &[f64],
    op: &SelectionOperator,
    rng: &mut impl Rng,
) -> Result<SelectionOutcome> {
    let lambda = fitness.len();
    if lambda == 0 {
        return Err(Error::argument("selection needs a non-empty population"));
    }
    if fitness.iter().any(|f| !f.is_finite()) {
        return Err(Error::argument("fitness values must be finite"));
    }
    let indices: Vec<usize> = match op {
        SelectionOperator::TruncationUniform { mu } => {
            if *mu < 1 || *mu > lambda {
                return Err(Error::argument(format!(
                    "truncation selection needs 1 <= mu <= lambda, got mu={mu}, lambda={lambda}"
                )));
            }
            let survivors = truncation_subset(fitness, *mu, rng);
            (0..lambda)
                .map(|_| survivors[rng.gen_range(0..survivors.len())])
                .collect()
        }
        SelectionOperator::FitnessProportionate => {
            let probs = fp_probabilities(fitness)?;
            let mut cum = Vec::with_capacity(lambda);
            let mut acc = 0.0;
            for p in &probs {
                acc += p;
                cum.push(acc);
            }
            *cum.last_mut().expect("non-empty") = 1.0;
            (0..lambda)
                .map(|_| sample_from_cumulative(&cum, rng))
                .collect()
        }
        SelectionOperator::UniformAll => (0..lambda).map(|_| rng.gen_range(0..lambda)).collect(),
    };
    let counts = reproduction_numbers(&indices, lambda)?;
    Ok(SelectionOutcome { indices, counts })
}

/// The mu indices of maximal fitness, ties broken uniformly at random:
/// shuffle, then stable-sort by fitness descending, then cut at mu.
pub fn truncation_subset(fitness: &[f64], mu: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    order.shuffle(rng);
    order.sort_by(|&a, &b| {
        fitness[b]
            .partial_cmp(&fitness[a])
            .expect("fitness values must be comparable")
    });
    order.truncate(mu);
    order
}

/// Monte Carlo estimate of the reproduction rate `E[R(i, P)]` with a
/// normal-approximation 95% confidence half-width.
pub struct ReproductionRateEstimate {
    pub mean: f64,
    pub half_width: f64,
    pub reps: usize,
}

pub fn estimate_reproduction_rate(
    fitness: &[f64],
    op: &SelectionOperator,
    index: usize,
    reps: usize,
    rng: &mut impl Rng,
) -> Result<ReproductionRateEstimate> {
    if reps < 1 {
        return Err(Error::argument(
            "reproduction-rate estimate needs reps >= 1",
        ));
    }
    if index >= fitness.len() {
        return Err(Error::argument(format!(
            "individual index {index} out of range for population size {}",
            fitness.len()
        )));
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..reps {
        let outcome = select(fitness, op, rng)?;
        let r = outcome.counts[index] as f64;
        sum += r;
        sum_sq += r * r;
    }
    let mean = sum / reps as f64;
    let half_width = if reps > 1 {
        let var = (sum_sq - sum * sum / reps as f64) / (reps as f64 - 1.0);
        1.96 * (var.max(0.0) / reps as f64).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(ReproductionRateEstimate {
        mean,
        half_width,
        reps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fp_all_zero_is_uniform() {
        let p = fp_probabilities(&[0.0, 0.0, 0.0]).unwrap();
        for q in &p {
            assert!((q - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn fp_proportional_split() {
        let p = fp_probabilities(&[1.0, 3.0]).unwrap();
        assert!((p[0] - 0.25).abs() < 1e-15);
        assert!((p[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn fp_symmetric_is_uniform() {
        let p = fp_probabilities(&[2.0, 2.0, 2.0, 2.0]).unwrap();
        for q in &p {
            assert!((q - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn fp_rejects_negative() {
        assert!(matches!(
            fp_probabilities(&[1.0, -0.5]),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn reproduction_number_examples() {
        assert_eq!(reproduction_numbers(&[0, 0, 0], 3).unwrap(), vec![3, 0, 0]);
        assert_eq!(
            reproduction_numbers(&[2, 0, 1, 3], 4).unwrap(),
            vec![1, 1, 1, 1]
        );
        assert_eq!(
            reproduction_numbers(&[1, 2, 2, 1], 4).unwrap(),
            vec![0, 2, 2, 0]
        );
        assert!(reproduction_numbers(&[4], 4).is_err());
    }

    #[test]
    fn truncation_picks_top_mu_without_ties() {
        let fitness = [3.0, 9.0, 1.0, 7.0, 5.0];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let mut subset = truncation_subset(&fitness, 2, &mut rng);
            subset.sort_unstable();
            assert_eq!(subset, vec![1, 3]);
        }
    }

    #[test]
    fn truncation_tied_top_frequencies() {
        // fitness (5,1,5,3), mu=2: only indices 0 and 2 can be selected,
        // each slot uniform over them.
        let fitness = [5.0, 1.0, 5.0, 3.0];
        let op = SelectionOperator::TruncationUniform { mu: 2 };
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut counts = [0usize; 4];
        let draws = 100_000;
        let mut slots = 0usize;
        for _ in 0..draws / 4 {
            let outcome = select(&fitness, &op, &mut rng).unwrap();
            for &q in &outcome.indices {
                counts[q] += 1;
                slots += 1;
            }
        }
        assert_eq!(counts[1], 0);
        assert_eq!(counts[3], 0);
        let freq0 = counts[0] as f64 / slots as f64;
        // 5 sigma of a fair coin over `slots` draws.
        let slack = 5.0 * (0.25 / slots as f64).sqrt();
        assert!((freq0 - 0.5).abs() < slack, "freq {freq0}");
    }

    #[test]
    fn single_member_population_always_selects_it() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for op in [
            SelectionOperator::TruncationUniform { mu: 1 },
            SelectionOperator::FitnessProportionate,
            SelectionOperator::UniformAll,
        ] {
            let outcome = select(&[4.2], &op, &mut rng).unwrap();
            assert_eq!(outcome.indices, vec![0]);
            assert_eq!(outcome.counts, vec![1]);
        }
    }

    #[test]
    fn fp_equal_fitness_is_uniform_in_frequency() {
        let fitness = [1.0, 1.0];
        let op = SelectionOperator::FitnessProportionate;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut first = 0usize;
        let mut total = 0usize;
        for _ in 0..20_000 {
            let outcome = select(&fitness, &op, &mut rng).unwrap();
            first += outcome.indices.iter().filter(|&&q| q == 0).count();
            total += outcome.indices.len();
        }
        let freq = first as f64 / total as f64;
        assert!((freq - 0.5).abs() < 0.02, "freq {freq}");
    }

    #[test]
    fn reproduction_rate_uniform_all_is_one() {
        let fitness = vec![1.0; 10];
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let est = estimate_reproduction_rate(
            &fitness,
            &SelectionOperator::UniformAll,
            3,
            20_000,
            &mut rng,
        )
        .unwrap();
        assert!(
            (est.mean - 1.0).abs() < est.half_width + 0.05,
            "{}",
            est.mean
        );
    }

    #[test]
    fn reproduction_rate_mu_lambda_is_lambda_over_mu() {
        // lambda=20, mu=10, all-distinct fitness, i among the top mu.
        let fitness: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let est = estimate_reproduction_rate(
            &fitness,
            &SelectionOperator::TruncationUniform { mu: 10 },
            19,
            20_000,
            &mut rng,
        )
        .unwrap();
        assert!(
            (est.mean - 2.0).abs() < est.half_width + 0.05,
            "mean {} hw {}",
            est.mean,
            est.half_width
        );
    }

    #[test]
    fn reproduction_rate_fp_matches_exact_law() {
        // E[R(i)] = lambda * n_i / S.
        let fitness = [2.0, 3.0, 5.0];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let est = estimate_reproduction_rate(
            &fitness,
            &SelectionOperator::FitnessProportionate,
            2,
            50_000,
            &mut rng,
        )
        .unwrap();
        let exact = 3.0 * 5.0 / 10.0;
        assert!(
            (est.mean - exact).abs() < est.half_width + 0.05,
            "mean {} vs {exact}",
            est.mean
        );
    }

    proptest! {
        #[test]
        fn reproduction_numbers_sum_to_lambda(
            fitness in prop::collection::vec(0.0f64..10.0, 1..12),
            mu_seed in any::<u64>(),
            op_kind in 0usize..3,
        ) {
            let lambda = fitness.len();
            let mut rng = ChaCha8Rng::seed_from_u64(mu_seed);
            let op = match op_kind {
                0 => SelectionOperator::TruncationUniform { mu: 1 + (mu_seed as usize) % lambda },
                1 => SelectionOperator::FitnessProportionate,
                _ => SelectionOperator::UniformAll,
            };
            let outcome = select(&fitness, &op, &mut rng).unwrap();
            prop_assert_eq!(outcome.counts.iter().sum::<usize>(), lambda);
            prop_assert_eq!(outcome.indices.len(), lambda);
        }

        #[test]
        fn fp_probabilities_sum_to_one(fitness in prop::collection::vec(0.0f64..100.0, 1..20)) {
            let probs = fp_probabilities(&fitness).unwrap();
            let sum: f64 = probs.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }
    }
}
