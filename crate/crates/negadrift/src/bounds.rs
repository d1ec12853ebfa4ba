//! Explicit lower-bound calculators.
//!
//! Every calculator returns a [`BoundReport`] carrying the bound in log
//! space together with the intermediate constants. Exponentials like
//! `exp(kappa (b - a))` reach `e^{Theta(n)}` for interesting inputs, so
//! decimal renderings are attached only when they fit an `f64`; the log
//! fields are always present.
//!
//! Record keys follow the conventional constant names (`delta`, `Delta`,
//! `M`, `L`, `kappa`, `alpha`, `D`, `epsilon`, `B`, `b_tilde`, `gamma`), so
//! downstream tooling can cross-reference reports without a translation
//! table.

use crate::error::{Error, Result};
use crate::mutation::MutationOperator;
use crate::report::Record;

/// Relative guard for boundary comparisons that involve transcendental
/// constants; keeps a mathematically-true `b <= b_tilde` from flipping on
/// the last floating-point bit.
const BOUNDARY_GUARD: f64 = 1e-12;

/// Relative tolerance for the numeric admissibility check of the mixing
/// condition; inputs like a base quoted to six significant digits must not
/// be rejected over rounding in the last quoted digit.
const MIXING_CHECK_TOL: f64 = 1e-6;

fn floor_guarded(x: f64) -> f64 {
    (x + BOUNDARY_GUARD * x.abs().max(1.0)).floor()
}

fn leq_guarded(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + BOUNDARY_GUARD * rhs.abs().max(1.0)
}

/// A computed lower bound on `E[T]` and upper bound on `Pr[T < L]`.
///
/// `E[T] >= exp(ln_e_t_term) - 1/2` and
/// `Pr[T < L] <= exp(ln_pr_raw)` (clamped to 1).
#[derive(Clone, Debug)]
pub struct BoundReport {
    /// Log of the leading term of the `E[T]` bound.
    pub ln_e_t_term: f64,
    /// `exp(ln_e_t_term) - 1/2` when it fits an f64.
    pub e_t_lower: Option<f64>,
    /// Unclamped log of the probability bound; values above 0 mean the
    /// bound is vacuous but the magnitude is still informative.
    pub ln_pr_raw: f64,
    /// `min(0, ln_pr_raw)`.
    pub ln_pr_clamped: f64,
    /// `exp(ln_pr_clamped)`, always in `[0, 1]`.
    pub pr_upper: f64,
    constants: Vec<(&'static str, f64)>,
}

impl BoundReport {
    fn new(ln_e_t_term: f64, ln_pr_raw: f64, constants: Vec<(&'static str, f64)>) -> Self {
        let exp_term = ln_e_t_term.exp();
        let e_t_lower = exp_term.is_finite().then_some(exp_term - 0.5);
        let ln_pr_clamped = ln_pr_raw.min(0.0);
        BoundReport {
            ln_e_t_term,
            e_t_lower,
            ln_pr_raw,
            ln_pr_clamped,
            pr_upper: ln_pr_clamped.exp(),
            constants,
        }
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants
            .iter()
            .find(|(k, _)| *k == name)
            .map(|(_, v)| *v)
    }

    /// `lambda * (E[T] lower bound)` — the fitness-evaluation cost bound —
    /// when both factors are available and the product is representable.
    pub fn lambda_e_t_lower(&self) -> Option<f64> {
        let lambda = self.constant("lambda")?;
        let e_t = self.e_t_lower?;
        let v = lambda * e_t;
        v.is_finite().then_some(v)
    }

    pub fn to_record(&self, op: &str) -> Record {
        let mut rec = Record::new()
            .with("op", op)
            .with("ln_e_t_term", self.ln_e_t_term);
        if let Some(v) = self.e_t_lower {
            rec.push("e_t_lower", v);
        }
        if let Some(v) = self.lambda_e_t_lower() {
            rec.push("lambda_e_t_lower", v);
        }
        rec.push("ln_pr_raw", self.ln_pr_raw);
        rec.push("ln_pr_clamped", self.ln_pr_clamped);
        rec.push("pr_upper", self.pr_upper);
        for (k, v) in &self.constants {
            rec.push(*k, *v);
        }
        rec
    }
}

/// Inputs of the negative multiplicative drift bound:
/// `E[X_{t+1}] <= (1 - drift_rate) E[X_t] + disturbance`, threshold `M`,
/// horizon `L`.
#[derive(Clone, Copy, Debug)]
pub struct DriftBoundInput {
    pub drift_rate: f64,
    pub disturbance: f64,
    pub threshold: f64,
    pub horizon: u64,
}

/// `E[T] >= delta M / (2 Delta) - 1/2` and `Pr[T < L] <= L Delta / (delta M)`.
pub fn negdrift_lemma_bounds(input: &DriftBoundInput) -> Result<BoundReport> {
    let DriftBoundInput {
        drift_rate,
        disturbance,
        threshold,
        horizon,
    } = *input;
    if !(drift_rate > 0.0 && drift_rate < 1.0) {
        return Err(Error::argument(format!(
            "drift rate delta must lie in (0,1), got {drift_rate}"
        )));
    }
    if !(disturbance > 0.0) || !disturbance.is_finite() {
        return Err(Error::argument(format!(
            "disturbance Delta must be positive, got {disturbance}"
        )));
    }
    if !threshold.is_finite() || !(threshold * drift_rate > disturbance) {
        return Err(Error::precondition(format!(
            "threshold M must exceed Delta/delta = {}, got {threshold}",
            disturbance / drift_rate
        )));
    }
    let ln_e_t_term = (drift_rate * threshold).ln() - (2.0 * disturbance).ln();
    let ln_pr_raw = (horizon as f64).ln() + disturbance.ln() - drift_rate.ln() - threshold.ln();
    Ok(BoundReport::new(
        ln_e_t_term,
        ln_pr_raw,
        vec![
            ("delta", drift_rate),
            ("Delta", disturbance),
            ("M", threshold),
            ("L", horizon as f64),
        ],
    ))
}

/// Log-space core shared by the population bounds:
/// `E[T] >= (delta / (2 D lambda)) exp(kappa span) - 1/2`,
/// `Pr[T < L] <= L lambda (D / delta) exp(-kappa span)`.
fn population_bound_logs(
    kappa: f64,
    span: f64,
    drift_rate: f64,
    disturbance_factor: f64,
    lambda: u64,
    horizon: u64,
) -> (f64, f64) {
    let ln_e_t_term =
        drift_rate.ln() - (2.0 * disturbance_factor * lambda as f64).ln() + kappa * span;
    let ln_pr_raw = (horizon as f64).ln() + (lambda as f64).ln() + disturbance_factor.ln()
        - drift_rate.ln()
        - kappa * span;
    (ln_e_t_term, ln_pr_raw)
}

/// Inputs of the generic population drift bound: potential scaling `kappa`,
/// target level `a`, safe level `b`, reproduction-rate cap `alpha`, drift
/// rate `delta`, above-`b` disturbance factor `D`.
#[derive(Clone, Copy, Debug)]
pub struct PopulationBoundInput {
    pub kappa: f64,
    pub target_level: u64,
    pub safe_level: u64,
    pub rate_cap: f64,
    pub drift_rate: f64,
    pub disturbance_factor: f64,
    pub lambda: u64,
    pub horizon: u64,
}

pub fn populations_bounds(input: &PopulationBoundInput) -> Result<BoundReport> {
    let PopulationBoundInput {
        kappa,
        target_level,
        safe_level,
        rate_cap,
        drift_rate,
        disturbance_factor,
        lambda,
        horizon,
    } = *input;
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::argument(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    if target_level > safe_level {
        return Err(Error::argument(format!(
            "target level a = {target_level} must not exceed safe level b = {safe_level}"
        )));
    }
    if !(rate_cap >= 1.0) {
        return Err(Error::argument(format!(
            "reproduction-rate cap alpha must be >= 1, got {rate_cap}"
        )));
    }
    if !(drift_rate > 0.0 && drift_rate < 1.0) {
        return Err(Error::argument(format!(
            "drift rate delta must lie in (0,1), got {drift_rate}"
        )));
    }
    if lambda == 0 {
        return Err(Error::argument("lambda must be at least 1"));
    }
    if !(disturbance_factor >= drift_rate) {
        return Err(Error::precondition(format!(
            "disturbance factor D = {disturbance_factor} must be at least delta = {drift_rate}"
        )));
    }
    let span = (safe_level - target_level) as f64;
    let (ln_e_t_term, ln_pr_raw) =
        population_bound_logs(kappa, span, drift_rate, disturbance_factor, lambda, horizon);
    Ok(BoundReport::new(
        ln_e_t_term,
        ln_pr_raw,
        vec![
            ("kappa", kappa),
            ("a", target_level as f64),
            ("b", safe_level as f64),
            ("alpha", rate_cap),
            ("delta", drift_rate),
            ("D", disturbance_factor),
            ("lambda", lambda as f64),
            ("L", horizon as f64),
        ],
    ))
}

/// Result of the uniform-initialization start-condition check.
#[derive(Clone, Copy, Debug)]
pub struct StartConditionCheck {
    pub holds: bool,
    /// `ln_rhs - ln_lhs`; non-negative iff the condition holds.
    pub log_margin: f64,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
}

/// Checks `lambda (1/2 + e^-kappa / 2)^n <= lambda D exp(-kappa b) / delta`,
/// the sufficient start condition for uniformly distributed initial
/// individuals. Requires `kappa >= ln 2`, i.e. base `B >= 2`.
pub fn check_start_condition(
    n: u64,
    kappa: f64,
    safe_level: u64,
    disturbance_factor: f64,
    drift_rate: f64,
    lambda: u64,
) -> Result<StartConditionCheck> {
    if n == 0 || lambda == 0 {
        return Err(Error::argument("n and lambda must be at least 1"));
    }
    if !(drift_rate > 0.0 && drift_rate < 1.0) {
        return Err(Error::argument(format!(
            "drift rate delta must lie in (0,1), got {drift_rate}"
        )));
    }
    if !(disturbance_factor > 0.0) {
        return Err(Error::argument(format!(
            "disturbance factor D must be positive, got {disturbance_factor}"
        )));
    }
    if !(kappa >= 2f64.ln() * (1.0 - BOUNDARY_GUARD)) {
        return Err(Error::precondition(format!(
            "start condition requires kappa >= ln 2 (base B >= 2), got kappa = {kappa}"
        )));
    }
    let ln_lambda = (lambda as f64).ln();
    let ln_lhs = ln_lambda + n as f64 * (0.5 + 0.5 * (-kappa).exp()).ln();
    let ln_rhs = ln_lambda + disturbance_factor.ln() - drift_rate.ln() - kappa * safe_level as f64;
    let log_margin = ln_rhs - ln_lhs;
    Ok(StartConditionCheck {
        holds: log_margin >= 0.0,
        log_margin,
        ln_lhs,
        ln_rhs,
    })
}

/// Inputs of the standard-bit-mutation bound: length `n`, rate `p`,
/// reproduction-rate cap `alpha`, drift rate `delta`, levels `a < b`.
#[derive(Clone, Copy, Debug)]
pub struct SbmBoundInput {
    pub n: u64,
    pub rate: f64,
    pub rate_cap: f64,
    pub drift_rate: f64,
    pub target_level: u64,
    pub safe_level: u64,
    pub lambda: u64,
    pub horizon: u64,
}

pub fn sbm_bounds(input: &SbmBoundInput) -> Result<BoundReport> {
    let SbmBoundInput {
        n,
        rate,
        rate_cap,
        drift_rate,
        target_level,
        safe_level,
        lambda,
        horizon,
    } = *input;
    if n == 0 || lambda == 0 {
        return Err(Error::argument("n and lambda must be at least 1"));
    }
    if !(0.0..=0.5).contains(&rate) {
        return Err(Error::precondition(format!(
            "mutation rate must lie in [0, 1/2], got {rate}"
        )));
    }
    if !(rate_cap >= 1.0) {
        return Err(Error::argument(format!(
            "reproduction-rate cap alpha must be >= 1, got {rate_cap}"
        )));
    }
    if !(drift_rate > 0.0 && drift_rate < 1.0) {
        return Err(Error::argument(format!(
            "drift rate delta must lie in (0,1), got {drift_rate}"
        )));
    }
    if target_level >= safe_level {
        return Err(Error::argument(format!(
            "levels must satisfy a < b, got a = {target_level}, b = {safe_level}"
        )));
    }
    let pn = rate * n as f64;
    let ln_ratio = (rate_cap / (1.0 - drift_rate)).ln();
    let epsilon = 1.0 - ln_ratio / pn;
    if !(epsilon > BOUNDARY_GUARD) {
        return Err(Error::precondition(format!(
            "epsilon = 1 - ln(alpha/(1-delta))/(p n) must be positive, got {epsilon}"
        )));
    }
    let base = 2.0 / epsilon;
    let kappa = base.ln();
    let b_tilde = n as f64 / (base * base - 1.0);
    if !leq_guarded(safe_level as f64, b_tilde) {
        return Err(Error::precondition(format!(
            "b exceeds b_tilde (b = {safe_level}, b_tilde = {b_tilde})"
        )));
    }
    let disturbance_factor = ((1.0 - drift_rate) / rate_cap).max(drift_rate);
    let span = (safe_level - target_level) as f64;
    let (ln_e_t_term, ln_pr_raw) =
        population_bound_logs(kappa, span, drift_rate, disturbance_factor, lambda, horizon);
    Ok(BoundReport::new(
        ln_e_t_term,
        ln_pr_raw,
        vec![
            ("n", n as f64),
            ("p", rate),
            ("alpha", rate_cap),
            ("delta", drift_rate),
            ("a", target_level as f64),
            ("b", safe_level as f64),
            ("lambda", lambda as f64),
            ("L", horizon as f64),
            ("epsilon", epsilon),
            ("B", base),
            ("b_tilde", b_tilde),
            ("kappa", kappa),
            ("D", disturbance_factor),
        ],
    ))
}

fn corollary_safe_level(n: u64, gamma: f64) -> f64 {
    floor_guarded((1.0 - 4.0 / n as f64) * n as f64 / (4.0 / (gamma * gamma) - 1.0))
}

/// The delta-free specialization: internally applies the standard-bit
/// mutation bound with `delta = p / (2n)`, `gamma = 1 - ln(alpha)/(p n)`,
/// and `b = floor((1 - 4/n) n / (4/gamma^2 - 1))`.
pub fn sbm_corollary_bounds(
    n: u64,
    rate: f64,
    rate_cap: f64,
    target_level: u64,
    lambda: u64,
    horizon: u64,
) -> Result<BoundReport> {
    if n == 0 || lambda == 0 {
        return Err(Error::argument("n and lambda must be at least 1"));
    }
    if !(rate > 0.0 && rate <= 0.5) {
        return Err(Error::precondition(format!(
            "mutation rate must lie in (0, 1/2], got {rate}"
        )));
    }
    if !(rate_cap >= 1.0) {
        return Err(Error::argument(format!(
            "reproduction-rate cap alpha must be >= 1, got {rate_cap}"
        )));
    }
    let pn = rate * n as f64;
    let gamma = 1.0 - rate_cap.ln() / pn;
    // ln(alpha) <= p (n - 1) is equivalent to gamma >= 1/n.
    if !leq_guarded(rate_cap.ln(), rate * (n as f64 - 1.0)) {
        return Err(Error::precondition(format!(
            "gamma = 1 - ln(alpha)/(p n) = {gamma} is below 1/n; require ln(alpha) <= p (n - 1)"
        )));
    }
    let safe_level = corollary_safe_level(n, gamma);
    if (target_level as f64) > safe_level {
        return Err(Error::precondition(format!(
            "target level a = {target_level} exceeds the admissible b = {safe_level}"
        )));
    }
    let drift_rate = rate / (2.0 * n as f64);
    let kappa = (2.0 / gamma).ln();
    let span = safe_level - target_level as f64;
    let nf = n as f64;
    let lf = lambda as f64;
    let ln_e_t_term = (rate * rate_cap).ln() - (4.0 * lf * nf).ln()
        + (2.0 * nf / (rate * rate_cap)).min(1.0).ln()
        + kappa * span;
    let ln_pr_raw = (2.0 * horizon as f64 * lf * nf).ln() - (rate * rate_cap).ln()
        + (rate * rate_cap / (2.0 * nf)).max(1.0).ln()
        - kappa * span;
    Ok(BoundReport::new(
        ln_e_t_term,
        ln_pr_raw,
        vec![
            ("n", nf),
            ("p", rate),
            ("alpha", rate_cap),
            ("gamma", gamma),
            ("delta", drift_rate),
            ("a", target_level as f64),
            ("b", safe_level),
            ("kappa", kappa),
            ("lambda", lf),
            ("L", horizon as f64),
        ],
    ))
}

/// `sum_i q_i exp(-p_i n decay)` for the operator's rate mixture. With
/// `decay = 1 - 2/B` this is the admissibility quantity of the mixed-rate
/// bound; with `decay = 1` it is the simpler sufficient-condition quantity
/// (and equals `a_constant` for the heavy-tailed operator at its cap).
pub fn rate_mixture_exp_sum(op: &MutationOperator, n: u64, decay: f64) -> Result<f64> {
    let pairs = op.rate_pairs(n as usize)?;
    Ok(pairs
        .iter()
        .map(|&(p, q)| q * (-p * n as f64 * decay).exp())
        .sum())
}

/// Inputs of the random-mutation-rate bound: the operator's rate mixture,
/// cap `alpha`, drift rate `delta`, exponential base `B > 2`, levels
/// `a < b <= b_tilde = n/(B^2 - 1)`.
#[derive(Clone, Debug)]
pub struct MixedBoundInput {
    pub n: u64,
    pub op: MutationOperator,
    pub rate_cap: f64,
    pub drift_rate: f64,
    pub base: f64,
    pub target_level: u64,
    pub safe_level: u64,
    pub lambda: u64,
    pub horizon: u64,
}

pub fn mixed_bounds(input: &MixedBoundInput) -> Result<BoundReport> {
    let MixedBoundInput {
        n,
        ref op,
        rate_cap,
        drift_rate,
        base,
        target_level,
        safe_level,
        lambda,
        horizon,
    } = *input;
    if n == 0 || lambda == 0 {
        return Err(Error::argument("n and lambda must be at least 1"));
    }
    if !(rate_cap >= 1.0) {
        return Err(Error::argument(format!(
            "reproduction-rate cap alpha must be >= 1, got {rate_cap}"
        )));
    }
    if !(drift_rate > 0.0 && drift_rate < 1.0) {
        return Err(Error::argument(format!(
            "drift rate delta must lie in (0,1), got {drift_rate}"
        )));
    }
    if !(base > 2.0) {
        return Err(Error::precondition(format!(
            "base B must exceed 2, got {base}"
        )));
    }
    let max_rate = op.max_rate(n as usize);
    if max_rate > 0.5 {
        return Err(Error::precondition(format!(
            "every mixture rate must be at most 1/2, largest is {max_rate}"
        )));
    }
    if target_level >= safe_level {
        return Err(Error::argument(format!(
            "levels must satisfy a < b, got a = {target_level}, b = {safe_level}"
        )));
    }
    let b_tilde = n as f64 / (base * base - 1.0);
    if !leq_guarded(safe_level as f64, b_tilde) {
        return Err(Error::precondition(format!(
            "b exceeds b_tilde (b = {safe_level}, b_tilde = {b_tilde})"
        )));
    }
    let lhs = rate_mixture_exp_sum(op, n, 1.0 - 2.0 / base)?;
    let rhs = (1.0 - drift_rate) / rate_cap;
    if lhs > rhs * (1.0 + MIXING_CHECK_TOL) {
        return Err(Error::precondition(format!(
            "mixing condition violated: sum q_i exp(-p_i n (1 - 2/B)) = {lhs} exceeds (1-delta)/alpha = {rhs}"
        )));
    }
    let kappa = base.ln();
    let disturbance_factor = ((1.0 - drift_rate) / rate_cap).max(drift_rate);
    let span = (safe_level - target_level) as f64;
    let (ln_e_t_term, ln_pr_raw) =
        population_bound_logs(kappa, span, drift_rate, disturbance_factor, lambda, horizon);
    Ok(BoundReport::new(
        ln_e_t_term,
        ln_pr_raw,
        vec![
            ("n", n as f64),
            ("alpha", rate_cap),
            ("delta", drift_rate),
            ("B", base),
            ("kappa", kappa),
            ("b_tilde", b_tilde),
            ("eq6_lhs", lhs),
            ("eq6_rhs", rhs),
            ("a", target_level as f64),
            ("b", safe_level as f64),
            ("lambda", lambda as f64),
            ("L", horizon as f64),
            ("D", disturbance_factor),
        ],
    ))
}

/// Converts the simpler sufficient condition
/// `sum_i q_i exp(-p_i n) <= (1 - gamma)/alpha` into admissible bound
/// parameters: `delta = gamma/2` and
/// `B = 2 (1 - ln((1 - gamma/2)/alpha) / ln((1 - gamma)/alpha))^-1 > 2`.
pub fn mixed_params_from_gamma(rate_cap: f64, gamma: f64) -> Result<(f64, f64)> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::argument(format!(
            "gamma must lie in (0,1), got {gamma}"
        )));
    }
    if !(rate_cap >= 1.0) {
        return Err(Error::argument(format!(
            "reproduction-rate cap alpha must be >= 1, got {rate_cap}"
        )));
    }
    let drift_rate = gamma / 2.0;
    let num = ((1.0 - gamma / 2.0) / rate_cap).ln();
    let den = ((1.0 - gamma) / rate_cap).ln();
    let base = 2.0 / (1.0 - num / den);
    debug_assert!(base > 2.0, "derived base {base} must exceed 2");
    Ok((drift_rate, base))
}

/// Constants of the fitness-proportionate pipeline.
#[derive(Clone, Copy, Debug)]
pub struct SimpleGaParameters {
    /// Reproduction-rate cap `alpha = (1 - a_frac) / (1/2 - eps)`.
    pub rate_cap: f64,
    /// `gamma = 1 - ln(alpha)` (mutation rate `1/n`, so `p n = 1`).
    pub gamma: f64,
    /// Safe level from the delta-free bound's formula.
    pub safe_level: i64,
    /// Fitness floor `s = (1/2 - eps) n`.
    pub fitness_floor: f64,
}

/// Derives the constants used to bound the mutation-only fitness
/// proportionate GA: `eps` is the fitness-floor slack and `target_fraction`
/// the distance-to-optimum fraction (both as fractions of `n`).
pub fn simple_ga_parameters(n: u64, eps: f64, target_fraction: f64) -> Result<SimpleGaParameters> {
    if n == 0 {
        return Err(Error::argument("n must be at least 1"));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::argument(format!(
            "eps must lie in (0, 1/2), got {eps}"
        )));
    }
    if !(target_fraction > 0.0 && target_fraction < 0.5 - eps) {
        return Err(Error::argument(format!(
            "target fraction must lie in (0, 1/2 - eps), got {target_fraction}"
        )));
    }
    let rate_cap = (1.0 - target_fraction) / (0.5 - eps);
    let gamma = 1.0 - rate_cap.ln();
    if !(gamma > 0.0) {
        return Err(Error::precondition(format!(
            "alpha = {rate_cap} is at least e, so gamma = {gamma} is not positive"
        )));
    }
    let safe_level = corollary_safe_level(n, gamma) as i64;
    Ok(SimpleGaParameters {
        rate_cap,
        gamma,
        safe_level,
        fitness_floor: (0.5 - eps) * n as f64,
    })
}

impl SimpleGaParameters {
    pub fn to_record(&self) -> Record {
        Record::new()
            .with("op", "simple_ga_parameters")
            .with("alpha", self.rate_cap)
            .with("gamma", self.gamma)
            .with("b", self.safe_level)
            .with("s", self.fitness_floor)
    }
}
