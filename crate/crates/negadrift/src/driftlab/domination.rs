//! Stochastic-domination tests.
//!
//! `Y` dominates `X` when `Pr[Y <= t] <= Pr[X <= t]` for every `t`. The
//! exact test compares two pmfs on a common ordered support point by point;
//! the statistical test compares an empirical CDF against a reference CDF
//! with the one-sided Dvoretzky-Kiefer-Wolfowitz slack.

use crate::error::{Error, Result};
use crate::report::Record;

/// Gap tolerance of the exact comparison; absorbs accumulated rounding in
/// pmfs that are themselves products of float arithmetic.
const EXACT_GAP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VerdictMethod {
    Exact,
    Statistical { significance: f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct DominationVerdict {
    pub holds: bool,
    /// Largest value of `CDF_high - CDF_low` (exact) or
    /// `empirical - reference` (statistical); domination wants it <= 0
    /// (resp. <= the DKW slack).
    pub worst_gap: f64,
    /// Support index attaining the worst gap.
    pub worst_index: usize,
    pub method: VerdictMethod,
}

impl DominationVerdict {
    pub fn to_record(&self) -> Record {
        let mut rec = Record::new()
            .with("holds", self.holds)
            .with("worst_gap", self.worst_gap)
            .with("worst_index", self.worst_index as u64);
        match self.method {
            VerdictMethod::Exact => {
                rec.push("method", "exact");
            }
            VerdictMethod::Statistical { significance } => {
                rec.push("method", "statistical");
                rec.push("significance", significance);
            }
        }
        rec
    }
}

/// Does the distribution `pmf_high` stochastically dominate `pmf_low`?
/// Both pmfs must live on the same ordered support (index-aligned).
pub fn domination_test_exact(pmf_low: &[f64], pmf_high: &[f64]) -> Result<DominationVerdict> {
    if pmf_low.is_empty() || pmf_low.len() != pmf_high.len() {
        return Err(Error::argument(format!(
            "domination test needs matching non-empty supports, got {} and {}",
            pmf_low.len(),
            pmf_high.len()
        )));
    }
    let mut cdf_low = 0.0;
    let mut cdf_high = 0.0;
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_index = 0;
    for (i, (&l, &h)) in pmf_low.iter().zip(pmf_high).enumerate() {
        cdf_low += l;
        cdf_high += h;
        let gap = cdf_high - cdf_low;
        if gap > worst_gap {
            worst_gap = gap;
            worst_index = i;
        }
    }
    Ok(DominationVerdict {
        holds: worst_gap <= EXACT_GAP_TOL,
        worst_gap,
        worst_index,
        method: VerdictMethod::Exact,
    })
}

/// One-sided DKW slack: `sqrt(ln(1/significance) / (2 m))`.
pub fn dkw_one_sided_epsilon(samples: usize, significance: f64) -> f64 {
    ((1.0 / significance).ln() / (2.0 * samples as f64)).sqrt()
}

/// Do the samples plausibly dominate the reference distribution? The
/// empirical CDF must not exceed the reference CDF by more than the DKW
/// slack at the given significance, at any support point. Sample values
/// index the reference support.
pub fn domination_test_statistical(
    samples: &[usize],
    reference_cdf: &[f64],
    significance: f64,
) -> Result<DominationVerdict> {
    if samples.is_empty() {
        return Err(Error::argument("statistical domination test needs samples"));
    }
    if reference_cdf.is_empty() {
        return Err(Error::argument("reference CDF must be non-empty"));
    }
    if !(significance > 0.0 && significance <= 0.1) {
        return Err(Error::argument(format!(
            "significance must lie in (0, 0.1], got {significance}"
        )));
    }
    let support = reference_cdf.len();
    let mut counts = vec![0usize; support];
    for &v in samples {
        if v >= support {
            return Err(Error::argument(format!(
                "sample value {v} outside the reference support 0..{support}"
            )));
        }
        counts[v] += 1;
    }
    let m = samples.len() as f64;
    let mut acc = 0usize;
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_index = 0;
    for (i, &c) in counts.iter().enumerate() {
        acc += c;
        let gap = acc as f64 / m - reference_cdf[i];
        if gap > worst_gap {
            worst_gap = gap;
            worst_index = i;
        }
    }
    let eps = dkw_one_sided_epsilon(samples.len(), significance);
    Ok(DominationVerdict {
        holds: worst_gap <= eps,
        worst_gap,
        worst_index,
        method: VerdictMethod::Statistical { significance },
    })
}

/// Given domination of `pmf_low` by `pmf_high` and a non-decreasing `f`
/// tabulated on the common support, checks the implied expectation
/// ordering `E[f(low)] <= E[f(high)]`.
pub fn monotone_expectation_check(pmf_low: &[f64], pmf_high: &[f64], f: &[f64]) -> Result<bool> {
    if pmf_low.len() != pmf_high.len() || pmf_low.len() != f.len() || f.is_empty() {
        return Err(Error::argument(
            "monotone expectation check needs pmfs and f on one support",
        ));
    }
    if f.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::argument("f must be non-decreasing on the support"));
    }
    let low: f64 = pmf_low.iter().zip(f).map(|(p, v)| p * v).sum();
    let high: f64 = pmf_high.iter().zip(f).map(|(p, v)| p * v).sum();
    let scale = low.abs().max(high.abs()).max(1.0);
    Ok(low <= high + 1e-12 * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutation::offspring_distance_pmf;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn binomial_cdf(n: usize, p: f64) -> Vec<f64> {
        let pmf = offspring_distance_pmf(0, n, p);
        let mut acc = 0.0;
        pmf.iter()
            .map(|&q| {
                acc += q;
                acc
            })
            .collect()
    }

    #[test]
    fn identical_pmfs_dominate_with_zero_gap() {
        let pmf = offspring_distance_pmf(3, 8, 0.2);
        let verdict = domination_test_exact(&pmf, &pmf).unwrap();
        assert!(verdict.holds);
        assert!(verdict.worst_gap.abs() <= 1e-15);
    }

    #[test]
    fn point_masses_order_correctly() {
        let at_one = [0.0, 1.0, 0.0];
        let at_two = [0.0, 0.0, 1.0];
        assert!(domination_test_exact(&at_one, &at_two).unwrap().holds);
        assert!(!domination_test_exact(&at_two, &at_one).unwrap().holds);
    }

    #[test]
    fn farther_parents_give_dominating_offspring() {
        // Offspring of a parent at distance 6 dominates offspring of a
        // parent at distance 3 for rates up to 1/2.
        for p in [0.05, 0.15, 0.25, 0.35, 0.5] {
            let low = offspring_distance_pmf(3, 10, p);
            let high = offspring_distance_pmf(6, 10, p);
            let verdict = domination_test_exact(&low, &high).unwrap();
            assert!(verdict.holds, "p={p} gap {}", verdict.worst_gap);
        }
    }

    #[test]
    fn exact_test_is_a_partial_order_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let random_pmf = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            let raw: Vec<f64> = (0..6).map(|_| rng.gen_range(0.01..1.0)).collect();
            let total: f64 = raw.iter().sum();
            raw.iter().map(|w| w / total).collect()
        };
        for _ in 0..200 {
            let a = random_pmf(&mut rng);
            let b = random_pmf(&mut rng);
            let c = random_pmf(&mut rng);
            // Reflexive.
            assert!(domination_test_exact(&a, &a).unwrap().holds);
            // Antisymmetric up to equality of pmfs.
            let ab = domination_test_exact(&a, &b).unwrap().holds;
            let ba = domination_test_exact(&b, &a).unwrap().holds;
            if ab && ba {
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() < 1e-9);
                }
            }
            // Transitive.
            let bc = domination_test_exact(&b, &c).unwrap().holds;
            if ab && bc {
                assert!(domination_test_exact(&a, &c).unwrap().holds);
            }
        }
    }

    #[test]
    fn statistical_self_test_holds() {
        let n = 30;
        let cdf = binomial_cdf(n, 0.5);
        let pmf = offspring_distance_pmf(0, n, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut cum = Vec::new();
        let mut acc = 0.0;
        for &q in &pmf {
            acc += q;
            cum.push(acc);
        }
        let samples: Vec<usize> = (0..20_000)
            .map(|_| {
                let u: f64 = rng.gen();
                cum.partition_point(|&c| c <= u).min(n)
            })
            .collect();
        let verdict = domination_test_statistical(&samples, &cdf, 1e-3).unwrap();
        assert!(verdict.holds, "self-test gap {}", verdict.worst_gap);
    }

    #[test]
    fn statistical_test_rejects_degenerate_samples() {
        let cdf = binomial_cdf(30, 0.5);
        let samples = vec![0usize; 5_000];
        let verdict = domination_test_statistical(&samples, &cdf, 1e-3).unwrap();
        assert!(!verdict.holds);
        assert!(verdict.worst_gap > 0.9);
    }

    #[test]
    fn statistical_test_validates_inputs() {
        let cdf = binomial_cdf(5, 0.5);
        assert!(domination_test_statistical(&[], &cdf, 1e-3).is_err());
        assert!(domination_test_statistical(&[1], &cdf, 0.5).is_err());
        assert!(domination_test_statistical(&[9], &cdf, 1e-3).is_err());
    }

    #[test]
    fn monotone_expectation_examples() {
        let low = offspring_distance_pmf(3, 10, 0.2);
        let high = offspring_distance_pmf(7, 10, 0.2);

        // Constant f: equality within tolerance, both directions pass.
        let constant = vec![2.5; 11];
        assert!(monotone_expectation_check(&low, &high, &constant).unwrap());
        assert!(monotone_expectation_check(&high, &low, &constant).unwrap());

        // Identity: means are ordered.
        let identity: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        assert!(monotone_expectation_check(&low, &high, &identity).unwrap());

        // Exponential transform: the MGF ordering.
        let kappa = 2f64.ln();
        let exp_f: Vec<f64> = (0..=10).map(|k| (kappa * k as f64).exp()).collect();
        assert!(monotone_expectation_check(&low, &high, &exp_f).unwrap());

        // Non-monotone f is rejected.
        let wiggly: Vec<f64> = (0..=10)
            .map(|k| if k == 5 { -1.0 } else { k as f64 })
            .collect();
        assert!(monotone_expectation_check(&low, &high, &wiggly).is_err());
    }
}
