//! Mutation operators and their exact analytic companions.
//!
//! Three operators: standard bit mutation with a fixed rate, standard bit
//! mutation with a rate drawn fresh per invocation from a finite list
//! (uniform mixing), and the heavy-tailed special case where the rate is
//! `i/n` with `i` power-law distributed on `[1..N]`.
//!
//! The analytic side provides the exact distribution of the offspring's
//! distance to a target, the moment-generating function of the distance
//! change, and the `A_N` constants for the heavy-tailed operator.

use rand::Rng;

use crate::bitstring::BitString;
use crate::error::{Error, Result};

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Probabilities over rate indices, with a cumulative table so draws are a
/// single binary search.
#[derive(Clone, Debug)]
pub struct RatePmf {
    probs: Vec<f64>,
    cum: Vec<f64>,
}

impl RatePmf {
    fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::argument("rate pmf needs at least one outcome"));
        }
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::argument("rate pmf weights must be non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::argument("rate pmf weights must not all be zero"));
        }
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let mut cum = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in &probs {
            acc += p;
            cum.push(acc);
        }
        // Guard the final entry against rounding so sampling can never fall
        // off the table.
        *cum.last_mut().expect("non-empty") = 1.0;
        Ok(RatePmf { probs, cum })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Draw an outcome index in `[0..len)`.
    pub fn sample_index(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.gen();
        self.cum
            .partition_point(|&c| c <= u)
            .min(self.probs.len() - 1)
    }
}

/// `Pr[i] = i^(-beta) / C` on `[1..=n_max]` with `C = sum i^(-beta)`.
///
/// Outcome index `k` of the returned pmf stands for `i = k + 1`.
pub fn heavy_tailed_pmf(beta: f64, n_max: usize) -> Result<RatePmf> {
    if n_max == 0 {
        return Err(Error::argument("heavy-tailed pmf needs n_max >= 1"));
    }
    if !(beta > 1.0) {
        return Err(Error::argument(format!(
            "heavy-tailed beta must exceed 1, got {beta}"
        )));
    }
    let weights: Vec<f64> = (1..=n_max).map(|i| (i as f64).powf(-beta)).collect();
    RatePmf::from_weights(&weights)
}

/// `A_N = sum_{i=1}^{N} (C^beta_N)^-1 i^(-beta) e^(-i)`, the heavy-tailed
/// operator's copy-probability style constant. Decreasing in `N`, with
/// values in `(0, 1/e]`.
pub fn a_constant(beta: f64, n_max: usize) -> Result<f64> {
    if n_max == 0 {
        return Err(Error::argument("a_constant needs n_max >= 1"));
    }
    if !(beta > 1.0) {
        return Err(Error::argument(format!(
            "a_constant beta must exceed 1, got {beta}"
        )));
    }
    // Sum smallest terms first.
    let mut num = 0.0;
    let mut den = 0.0;
    for i in (1..=n_max).rev() {
        let w = (i as f64).powf(-beta);
        den += w;
        num += w * (-(i as f64)).exp();
    }
    Ok(num / den)
}

/// A randomized mutation operator. Each invocation draws a fresh rate
/// (trivially so for the fixed-rate variant) and then flips every bit
/// independently with that rate.
#[derive(Clone, Debug)]
pub enum MutationOperator {
    FixedRate(f64),
    MixedRate {
        rates: Vec<f64>,
        pmf: RatePmf,
    },
    /// Rate `i / n` with `i` power-law distributed on `[1..=cap]`. The
    /// string length `n` is supplied at application time.
    HeavyTailed {
        beta: f64,
        cap: usize,
        pmf: RatePmf,
    },
}

impl MutationOperator {
    pub fn fixed_rate(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::argument(format!(
                "mutation rate must be in [0,1], got {p}"
            )));
        }
        Ok(MutationOperator::FixedRate(p))
    }

    /// `pairs` are `(rate, weight)`; weights must sum to 1 within 1e-12.
    pub fn mixed_rate(pairs: &[(f64, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::argument(
                "mixed-rate operator needs at least one rate",
            ));
        }
        for &(p, q) in pairs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::argument(format!(
                    "mutation rate must be in [0,1], got {p}"
                )));
            }
            if !(q >= 0.0) {
                return Err(Error::argument(format!(
                    "rate weight must be non-negative, got {q}"
                )));
            }
        }
        let total: f64 = pairs.iter().map(|&(_, q)| q).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::argument(format!(
                "rate weights must sum to 1 within {WEIGHT_SUM_TOL:e}, got {total}"
            )));
        }
        let rates: Vec<f64> = pairs.iter().map(|&(p, _)| p).collect();
        let weights: Vec<f64> = pairs.iter().map(|&(_, q)| q).collect();
        Ok(MutationOperator::MixedRate {
            rates,
            pmf: RatePmf::from_weights(&weights)?,
        })
    }

    pub fn heavy_tailed(beta: f64, cap: usize) -> Result<Self> {
        Ok(MutationOperator::HeavyTailed {
            beta,
            cap,
            pmf: heavy_tailed_pmf(beta, cap)?,
        })
    }

    /// Heavy-tailed operator with the default cap `floor(n/2)` for strings
    /// of length `n`.
    pub fn heavy_tailed_for_length(beta: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::argument("heavy-tailed default cap needs n >= 2"));
        }
        Self::heavy_tailed(beta, n / 2)
    }

    /// Draw the bit-flip rate for one invocation on strings of length `n`.
    pub fn draw_rate(&self, n: usize, rng: &mut impl Rng) -> f64 {
        match self {
            MutationOperator::FixedRate(p) => *p,
            MutationOperator::MixedRate { rates, pmf } => rates[pmf.sample_index(rng)],
            MutationOperator::HeavyTailed { pmf, .. } => {
                (pmf.sample_index(rng) + 1) as f64 / n as f64
            }
        }
    }

    /// The operator as an explicit `(rate, weight)` mixture on strings of
    /// length `n`.
    pub fn rate_pairs(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        if n == 0 {
            return Err(Error::argument("rate_pairs needs n >= 1"));
        }
        Ok(match self {
            MutationOperator::FixedRate(p) => vec![(*p, 1.0)],
            MutationOperator::MixedRate { rates, pmf } => rates
                .iter()
                .copied()
                .zip(pmf.probs().iter().copied())
                .collect(),
            MutationOperator::HeavyTailed { pmf, .. } => pmf
                .probs()
                .iter()
                .enumerate()
                .map(|(k, &q)| ((k + 1) as f64 / n as f64, q))
                .collect(),
        })
    }

    /// Largest rate the operator can draw on strings of length `n`.
    pub fn max_rate(&self, n: usize) -> f64 {
        match self {
            MutationOperator::FixedRate(p) => *p,
            MutationOperator::MixedRate { rates, .. } => rates.iter().copied().fold(0.0, f64::max),
            MutationOperator::HeavyTailed { cap, .. } => *cap as f64 / n as f64,
        }
    }
}

/// Apply one invocation of the operator: draw a rate, then flip each bit of
/// `x` independently with that rate.
pub fn mutate(x: &BitString, op: &MutationOperator, rng: &mut impl Rng) -> BitString {
    let p = op.draw_rate(x.len(), rng);
    let mut y = x.clone();
    if p <= 0.0 {
        return y;
    }
    if p >= 1.0 {
        return y.complement();
    }
    for i in 0..x.len() {
        if rng.gen_bool(p) {
            y.flip(i);
        }
    }
    y
}

/// `Bin(m, p)` probabilities computed by a running product in log space, so
/// no factorials and no premature underflow of the starting term.
pub(crate) fn binomial_pmf(m: usize, p: f64) -> Vec<f64> {
    assert!((0.0..=1.0).contains(&p), "binomial p out of range: {p}");
    if p == 0.0 {
        let mut v = vec![0.0; m + 1];
        v[0] = 1.0;
        return v;
    }
    if p == 1.0 {
        let mut v = vec![0.0; m + 1];
        v[m] = 1.0;
        return v;
    }
    let lp = p.ln();
    let lq = (-p).ln_1p();
    let mut out = Vec::with_capacity(m + 1);
    let mut ln_term = m as f64 * lq;
    out.push(ln_term.exp());
    for k in 0..m {
        ln_term += ((m - k) as f64).ln() - ((k + 1) as f64).ln() + lp - lq;
        out.push(ln_term.exp());
    }
    out
}

/// Exact distribution of `H(mut(x), x*)` under standard bit mutation with
/// rate `p`, given `H(x, x*) = d`: the convolution of `Bin(d, p)` corrected
/// bits and `Bin(n-d, p)` spoiled bits. Returned over support `[0..=n]`.
pub fn offspring_distance_pmf(d: usize, n: usize, p: f64) -> Vec<f64> {
    assert!(d <= n, "distance d={d} exceeds length n={n}");
    let losses = binomial_pmf(d, p);
    let gains = binomial_pmf(n - d, p);
    let mut pmf = vec![0.0; n + 1];
    for (l, &pl) in losses.iter().enumerate() {
        if pl == 0.0 {
            continue;
        }
        for (u, &pu) in gains.iter().enumerate() {
            pmf[d - l + u] += pl * pu;
        }
    }
    pmf
}

/// `ln E[exp(-kappa (g(y) - g(x)))]` for standard bit mutation at rate `p`
/// from a parent at distance `d`:
/// `d ln(1 + p(e^kappa - 1)) + (n-d) ln(1 - p(1 - e^-kappa))`.
pub fn ln_mgf_sbm(d: usize, n: usize, p: f64, kappa: f64) -> f64 {
    assert!(d <= n, "distance d={d} exceeds length n={n}");
    assert!(
        (0.0..=0.5).contains(&p),
        "mgf requires p in [0, 1/2], got {p}"
    );
    assert!(kappa >= 0.0, "mgf requires kappa >= 0, got {kappa}");
    let mut ln = 0.0;
    if d > 0 {
        ln += d as f64 * (p * kappa.exp_m1()).ln_1p();
    }
    if n - d > 0 {
        ln += (n - d) as f64 * (-p * (-((-kappa).exp_m1()))).ln_1p();
    }
    ln
}

/// `E[exp(-kappa (g(y) - g(x)))]` for standard bit mutation; the log-space
/// value is exponentiated only here.
pub fn mgf_sbm(d: usize, n: usize, p: f64, kappa: f64) -> f64 {
    ln_mgf_sbm(d, n, p, kappa).exp()
}

/// Log of the mixture MGF `sum_i q_i mgf_sbm(d, n, p_i, kappa)`.
pub fn ln_mgf_mixed(d: usize, n: usize, op: &MutationOperator, kappa: f64) -> Result<f64> {
    let pairs = op.rate_pairs(n)?;
    let terms: Vec<f64> = pairs
        .iter()
        .filter(|&&(_, q)| q > 0.0)
        .map(|&(p, q)| q.ln() + ln_mgf_sbm(d, n, p, kappa))
        .collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln())
}

/// Mixture MGF for mixed-rate and heavy-tailed operators (a fixed rate is
/// accepted as the degenerate one-point mixture).
pub fn mgf_mixed(d: usize, n: usize, op: &MutationOperator, kappa: f64) -> Result<f64> {
    Ok(ln_mgf_mixed(d, n, op, kappa)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::hamming;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    /// Brute-force offspring distance distribution: enumerate every flip
    /// mask of an n-bit parent at distance d from the all-zero target.
    fn brute_force_distance_pmf(d: usize, n: usize, p: f64) -> Vec<f64> {
        let mut pmf = vec![0.0; n + 1];
        for mask in 0u32..(1 << n) {
            let flips = mask.count_ones() as usize;
            let prob = p.powi(flips as i32) * (1.0 - p).powi((n - flips) as i32);
            // Parent has ones exactly in the first d positions; target is 0^n.
            let parent: u32 = if d == 0 { 0 } else { (1 << d) - 1 };
            let child = parent ^ mask;
            pmf[child.count_ones() as usize] += prob;
        }
        pmf
    }

    #[test]
    fn fixed_rate_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let op = MutationOperator::fixed_rate(0.0).unwrap();
        let x = bs("1011010011");
        for _ in 0..20 {
            assert_eq!(mutate(&x, &op, &mut rng), x);
        }
    }

    #[test]
    fn fixed_rate_one_is_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let op = MutationOperator::fixed_rate(1.0).unwrap();
        let x = bs("1011010011");
        for _ in 0..20 {
            assert_eq!(mutate(&x, &op, &mut rng), x.complement());
        }
    }

    #[test]
    fn half_rate_keeps_expected_distance() {
        // n=4, H(x, x*)=2, p=1/2: all 16 flip masks are equally likely and
        // the mean offspring distance is exactly 2.
        let pmf = offspring_distance_pmf(2, 4, 0.5);
        let mean: f64 = pmf.iter().enumerate().map(|(k, &q)| k as f64 * q).sum();
        assert!((mean - 2.0).abs() < 1e-12);

        let x = bs("1100");
        let target = bs("0000");
        let op = MutationOperator::fixed_rate(0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let reps = 20_000;
        let total: usize = (0..reps)
            .map(|_| hamming(&mutate(&x, &op, &mut rng), &target).unwrap())
            .sum();
        let emp = total as f64 / reps as f64;
        // sd of the mean is 1/sqrt(reps) ~ 0.007.
        assert!((emp - 2.0).abs() < 0.05, "empirical mean {emp}");
    }

    #[test]
    fn heavy_tailed_pmf_examples() {
        let single = heavy_tailed_pmf(1.5, 1).unwrap();
        assert_eq!(single.probs(), &[1.0]);

        let two = heavy_tailed_pmf(1.5, 2).unwrap();
        let c = 1.0 + 2f64.powf(-1.5);
        assert!((two.probs()[0] - 1.0 / c).abs() < 1e-12);
        assert!((two.probs()[1] - 2f64.powf(-1.5) / c).abs() < 1e-12);
        assert!((two.probs()[0] - 0.73879).abs() < 1e-5);
        assert!((two.probs()[1] - 0.26121).abs() < 1e-5);

        let hundred = heavy_tailed_pmf(1.5, 100).unwrap();
        let sum: f64 = hundred.probs().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn heavy_tailed_rejects_bad_args() {
        assert!(heavy_tailed_pmf(1.5, 0).is_err());
        assert!(heavy_tailed_pmf(1.0, 10).is_err());
        assert!(heavy_tailed_pmf(0.5, 10).is_err());
    }

    #[test]
    fn offspring_pmf_point_mass_without_mutation() {
        let pmf = offspring_distance_pmf(3, 8, 0.0);
        for (k, &q) in pmf.iter().enumerate() {
            assert_eq!(q, if k == 3 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn offspring_pmf_from_target_is_binomial() {
        let pmf = offspring_distance_pmf(0, 9, 0.3);
        let bin = binomial_pmf(9, 0.3);
        for (a, b) in pmf.iter().zip(&bin) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn offspring_pmf_matches_brute_force() {
        for n in 1..=7 {
            for d in 0..=n {
                for &p in &[0.0, 0.1, 0.25, 0.5, 0.8, 1.0] {
                    let exact = offspring_distance_pmf(d, n, p);
                    let brute = brute_force_distance_pmf(d, n, p);
                    for (k, (a, b)) in exact.iter().zip(&brute).enumerate() {
                        assert!((a - b).abs() < 1e-12, "n={n} d={d} p={p} k={k}: {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn offspring_pmf_normalized() {
        for n in [1, 5, 12, 20] {
            for d in [0, n / 2, n] {
                for &p in &[0.0, 0.05, 0.2, 0.35, 0.5] {
                    let sum: f64 = offspring_distance_pmf(d, n, p).iter().sum();
                    assert!((sum - 1.0).abs() < 1e-12, "n={n} d={d} p={p}: {sum}");
                }
            }
        }
    }

    #[test]
    fn mgf_trivial_cases() {
        assert_eq!(mgf_sbm(4, 10, 0.0, 1.3), 1.0);
        assert_eq!(mgf_sbm(4, 10, 0.3, 0.0), 1.0);
    }

    #[test]
    fn mgf_small_example() {
        // n=3, d=1, p=1/2, kappa=ln 2: 1.5 * 0.75^2 = 0.84375.
        let v = mgf_sbm(1, 3, 0.5, 2f64.ln());
        assert!((v - 0.84375).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn mgf_matches_pmf_expectation() {
        for n in 1..=10 {
            for d in 0..=n {
                for &p in &[0.0, 0.1, 0.3, 0.5] {
                    for &kappa in &[0.0, 2f64.ln(), 4f64.ln()] {
                        let pmf = offspring_distance_pmf(d, n, p);
                        let expect: f64 = pmf
                            .iter()
                            .enumerate()
                            .map(|(k, &q)| q * (-kappa * (k as f64 - d as f64)).exp())
                            .sum();
                        let mgf = mgf_sbm(d, n, p, kappa);
                        assert!(
                            (mgf - expect).abs() <= 1e-12 * expect.abs().max(1.0),
                            "n={n} d={d} p={p} kappa={kappa}: {mgf} vs {expect}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mgf_nondecreasing_in_distance() {
        for n in [5, 9, 12] {
            for &p in &[0.05, 0.2, 0.35, 0.5] {
                for &kappa in &[0.3, 2f64.ln(), 4f64.ln()] {
                    for d in 0..n {
                        assert!(
                            mgf_sbm(d + 1, n, p, kappa) >= mgf_sbm(d, n, p, kappa) - 1e-15,
                            "n={n} p={p} kappa={kappa} d={d}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mgf_mixed_degenerate_equals_sbm() {
        let op = MutationOperator::mixed_rate(&[(0.17, 1.0)]).unwrap();
        let v = mgf_mixed(3, 9, &op, 0.8).unwrap();
        assert!((v - mgf_sbm(3, 9, 0.17, 0.8)).abs() < 1e-14);
    }

    #[test]
    fn mgf_mixed_equal_rates_ignore_weights() {
        let op = MutationOperator::mixed_rate(&[(0.2, 0.3), (0.2, 0.7)]).unwrap();
        let v = mgf_mixed(2, 7, &op, 1.1).unwrap();
        assert!((v - mgf_sbm(2, 7, 0.2, 1.1)).abs() < 1e-14);
    }

    #[test]
    fn mgf_mixed_matches_brute_force() {
        // n=6, d=2, rates {1/6 w.p. 1/2, 2/6 w.p. 1/2}, kappa = ln 2.
        let n = 6;
        let d = 2;
        let kappa = 2f64.ln();
        let rates = [(1.0 / 6.0, 0.5), (2.0 / 6.0, 0.5)];
        let op = MutationOperator::mixed_rate(&rates).unwrap();
        let mut brute = 0.0;
        for &(p, q) in &rates {
            let pmf = brute_force_distance_pmf(d, n, p);
            brute += q * pmf
                .iter()
                .enumerate()
                .map(|(k, &w)| w * (-kappa * (k as f64 - d as f64)).exp())
                .sum::<f64>();
        }
        let v = mgf_mixed(d, n, &op, kappa).unwrap();
        assert!((v - brute).abs() < 1e-12, "{v} vs {brute}");
    }

    #[test]
    fn a_constant_single_term() {
        let v = a_constant(1.5, 1).unwrap();
        assert!((v - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn a_constant_decreasing_in_n() {
        let mut prev = a_constant(1.5, 1).unwrap();
        for n in 2..=300 {
            let cur = a_constant(1.5, n).unwrap();
            assert!(cur <= prev + 1e-15, "A_{n} rose: {cur} > {prev}");
            prev = cur;
        }
        for &(lo, hi) in &[(999, 1000), (9_999, 10_000)] {
            assert!(a_constant(2.2, hi).unwrap() <= a_constant(2.2, lo).unwrap() + 1e-15);
        }
    }

    #[test]
    fn rate_draws_are_replayable() {
        let op = MutationOperator::heavy_tailed(1.5, 50).unwrap();
        let draw = |seed: u64| -> Vec<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..100).map(|_| op.draw_rate(100, &mut rng)).collect()
        };
        assert_eq!(draw(11), draw(11));
        assert_ne!(draw(11), draw(12));
    }

    #[test]
    fn mixed_rate_validates_weights() {
        assert!(MutationOperator::mixed_rate(&[]).is_err());
        assert!(MutationOperator::mixed_rate(&[(0.1, 0.5), (0.2, 0.6)]).is_err());
        assert!(MutationOperator::mixed_rate(&[(1.2, 1.0)]).is_err());
        assert!(MutationOperator::mixed_rate(&[(0.1, -0.1), (0.2, 1.1)]).is_err());
        assert!(MutationOperator::mixed_rate(&[(0.1, 0.25), (0.2, 0.75)]).is_ok());
    }

    /// Upper quantile of chi-square via the Wilson-Hilferty approximation;
    /// plenty for a sanity test at significance 1e-3.
    fn chi_square_quantile_999(dof: f64) -> f64 {
        let z = 3.090232306167813; // standard normal 0.999 quantile
        let t = 1.0 - 2.0 / (9.0 * dof) + z * (2.0 / (9.0 * dof)).sqrt();
        dof * t * t * t
    }

    #[test]
    fn empirical_mutation_matches_pmf_chi_square() {
        let n = 16;
        let d = 6;
        let p = 0.2;
        let reps = 100_000;
        let expected = offspring_distance_pmf(d, n, p);

        let mut x = BitString::ones(n).unwrap();
        for i in 0..d {
            x.set(i, false);
        }
        let target = BitString::ones(n).unwrap();
        let op = MutationOperator::fixed_rate(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(20240817);
        let mut counts = vec![0usize; n + 1];
        for _ in 0..reps {
            counts[hamming(&mutate(&x, &op, &mut rng), &target).unwrap()] += 1;
        }

        // Merge bins with expectation below 5 into their neighbors.
        let mut obs = Vec::new();
        let mut exp = Vec::new();
        let mut acc_o = 0.0;
        let mut acc_e = 0.0;
        for k in 0..=n {
            acc_o += counts[k] as f64;
            acc_e += expected[k] * reps as f64;
            if acc_e >= 5.0 {
                obs.push(acc_o);
                exp.push(acc_e);
                acc_o = 0.0;
                acc_e = 0.0;
            }
        }
        if acc_e > 0.0 {
            *obs.last_mut().unwrap() += acc_o;
            *exp.last_mut().unwrap() += acc_e;
        }
        let stat: f64 = obs
            .iter()
            .zip(&exp)
            .map(|(o, e)| (o - e) * (o - e) / e)
            .sum();
        let crit = chi_square_quantile_999((obs.len() - 1) as f64);
        assert!(stat < crit, "chi-square {stat} >= critical {crit}");
    }

    #[test]
    fn heavy_tailed_draw_frequencies_match_pmf() {
        let op = MutationOperator::heavy_tailed(1.5, 8).unwrap();
        let n = 16;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let reps = 200_000;
        let mut counts = [0usize; 8];
        for _ in 0..reps {
            let rate = op.draw_rate(n, &mut rng);
            let idx = (rate * n as f64).round() as usize - 1;
            counts[idx] += 1;
        }
        let pmf = heavy_tailed_pmf(1.5, 8).unwrap();
        for (i, (&c, &q)) in counts.iter().zip(pmf.probs()).enumerate() {
            let freq = c as f64 / reps as f64;
            let sd = (q * (1.0 - q) / reps as f64).sqrt();
            assert!(
                (freq - q).abs() < 5.0 * sd + 1e-9,
                "index {i}: freq {freq} vs prob {q}"
            );
        }
    }
}
