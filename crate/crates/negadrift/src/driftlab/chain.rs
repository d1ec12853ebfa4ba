//! Exact small-chain oracle for the negative multiplicative drift bound.
//!
//! A [`FiniteChain`] carries non-negative state labels, a row-stochastic
//! transition matrix, a threshold `M`, and a start distribution.
//! [`chain_drift_check`] hunts for an admissible `(delta, Delta)` pair on a
//! logarithmic grid; [`chain_exact_hitting`] computes `Pr[T < L]` exactly by
//! absorbing-state propagation and `E[T]` by a linear solve when absorption
//! is almost sure.

use rand::Rng;

use crate::error::{Error, Result};

const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct FiniteChain {
    labels: Vec<f64>,
    transitions: Vec<Vec<f64>>,
    threshold: f64,
    start: Vec<f64>,
}

impl FiniteChain {
    pub fn new(
        labels: Vec<f64>,
        transitions: Vec<Vec<f64>>,
        threshold: f64,
        start: Vec<f64>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::argument("chain needs at least one state"));
        }
        if labels.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::argument(
                "state labels must be finite and non-negative",
            ));
        }
        if transitions.len() != n {
            return Err(Error::argument(
                "transition matrix must be square over the states",
            ));
        }
        for (s, row) in transitions.iter().enumerate() {
            if row.len() != n {
                return Err(Error::argument(
                    "transition matrix must be square over the states",
                ));
            }
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::argument(format!(
                    "transition probabilities of state {s} must be non-negative"
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::argument(format!(
                    "row {s} sums to {sum}, not 1 within {ROW_SUM_TOL:e}"
                )));
            }
        }
        if start.len() != n {
            return Err(Error::argument("start distribution must cover all states"));
        }
        if start.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::argument("start probabilities must be non-negative"));
        }
        let start_sum: f64 = start.iter().sum();
        if (start_sum - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::argument(format!(
                "start distribution sums to {start_sum}, not 1 within {ROW_SUM_TOL:e}"
            )));
        }
        if !threshold.is_finite() || threshold <= 0.0 {
            return Err(Error::argument("threshold M must be positive and finite"));
        }
        Ok(FiniteChain {
            labels,
            transitions,
            threshold,
            start,
        })
    }

    pub fn state_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn start(&self) -> &[f64] {
        &self.start
    }

    pub fn expected_start_label(&self) -> f64 {
        self.start
            .iter()
            .zip(&self.labels)
            .map(|(p, x)| p * x)
            .sum()
    }

    /// `E[X_{t+1} | state = s]` for every state.
    pub fn expected_next_labels(&self) -> Vec<f64> {
        self.transitions
            .iter()
            .map(|row| row.iter().zip(&self.labels).map(|(p, x)| p * x).sum())
            .collect()
    }

    fn absorbing(&self) -> Vec<bool> {
        self.labels.iter().map(|&x| x >= self.threshold).collect()
    }
}

/// An admissible drift pair: every state satisfies
/// `E[X' | s] <= (1 - drift_rate) X(s) + disturbance`, the start expectation
/// is at most `disturbance / drift_rate`, and the threshold lies strictly
/// above it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriftParams {
    pub drift_rate: f64,
    pub disturbance: f64,
}

/// Largest per-state excess `E[X' | s] - (1 - delta) X(s)` at a candidate
/// drift rate, with the state attaining it.
pub fn drift_excess(chain: &FiniteChain, drift_rate: f64) -> (f64, usize) {
    let expected = chain.expected_next_labels();
    let mut worst = f64::NEG_INFINITY;
    let mut arg = 0;
    for (s, (&e, &x)) in expected.iter().zip(&chain.labels).enumerate() {
        let excess = e - (1.0 - drift_rate) * x;
        if excess > worst {
            worst = excess;
            arg = s;
        }
    }
    (worst, arg)
}

/// Search a logarithmic grid of drift rates for the admissible pair with
/// the strongest implied hitting-time bound (largest `delta M / Delta`).
/// Rejects when no grid point certifies the chain's threshold.
pub fn chain_drift_check(chain: &FiniteChain) -> Option<DriftParams> {
    let e_start = chain.expected_start_label();
    let max_label = chain.labels.iter().copied().fold(0.0f64, f64::max);
    // Below this the pair is numerically degenerate; certifying it would
    // claim more than float arithmetic can back.
    let floor = 1e-12 * max_label.max(1.0);

    let mut best: Option<(f64, DriftParams)> = None;
    const GRID: usize = 121;
    for i in 0..GRID {
        // 1e-6 up to ~0.9 on a log scale.
        let drift_rate = 10f64.powf(-6.0 + 5.95 * i as f64 / (GRID - 1) as f64);
        if drift_rate >= 1.0 {
            continue;
        }
        let (excess, _) = drift_excess(chain, drift_rate);
        let disturbance = excess.max(drift_rate * e_start);
        if disturbance <= floor {
            continue;
        }
        // Strict margin so the exact oracle can never flip the comparison
        // on rounding.
        if chain.threshold * drift_rate <= disturbance * (1.0 + 1e-9) {
            continue;
        }
        let score = drift_rate / disturbance;
        if best.is_none_or(|(s, _)| score > s) {
            best = Some((
                score,
                DriftParams {
                    drift_rate,
                    disturbance,
                },
            ));
        }
    }
    best.map(|(_, p)| p)
}

/// Exact hitting-time quantities for `T = min{t >= 0 | X_t >= M}`.
#[derive(Clone, Debug)]
pub enum ExpectedHittingTime {
    Exact(f64),
    /// Lower bound from truncating at the propagation horizon; the solve
    /// was not available.
    TruncatedLowerBound(f64),
    /// Some start mass can never reach the threshold.
    Infinite,
}

#[derive(Clone, Debug)]
pub struct HittingAnalysis {
    /// `pr_below[l] = Pr[T < l]` for `l = 0..=horizon`.
    pub pr_below: Vec<f64>,
    pub expected: ExpectedHittingTime,
}

impl HittingAnalysis {
    pub fn pr_below_horizon(&self) -> f64 {
        *self.pr_below.last().expect("non-empty by construction")
    }

    /// `E[min(T, horizon)] = sum_{t < horizon} Pr[T > t]`.
    pub fn expected_min_with_horizon(&self) -> f64 {
        let horizon = self.pr_below.len() - 1;
        (0..horizon).map(|t| 1.0 - self.pr_below[t + 1]).sum()
    }

    /// A value certified to be a lower bound on `E[T]` (infinite cases map
    /// to `f64::INFINITY`).
    pub fn expected_lower_bound(&self) -> f64 {
        match self.expected {
            ExpectedHittingTime::Exact(v) => v,
            ExpectedHittingTime::TruncatedLowerBound(v) => v,
            ExpectedHittingTime::Infinite => f64::INFINITY,
        }
    }
}

/// Absorbing-state analysis: states with `X >= M` become absorbing,
/// `Pr[T < l]` is the absorbed mass after `l - 1` propagation steps, and
/// `E[T]` solves the standard linear system on the transient states.
pub fn chain_exact_hitting(chain: &FiniteChain, horizon: usize) -> HittingAnalysis {
    let n = chain.state_count();
    let absorbing = chain.absorbing();

    let mut pr_below = Vec::with_capacity(horizon + 1);
    pr_below.push(0.0);
    if horizon >= 1 {
        let mut dist = chain.start.to_vec();
        let absorbed = |d: &[f64]| -> f64 {
            d.iter()
                .zip(&absorbing)
                .filter(|(_, &a)| a)
                .map(|(p, _)| p)
                .sum()
        };
        pr_below.push(absorbed(&dist));
        for _ in 1..horizon {
            let mut next = vec![0.0; n];
            for (s, &p) in dist.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                if absorbing[s] {
                    next[s] += p;
                } else {
                    for (s2, &q) in chain.transitions[s].iter().enumerate() {
                        next[s2] += p * q;
                    }
                }
            }
            dist = next;
            pr_below.push(absorbed(&dist));
        }
    }

    let expected = expected_hitting_time(chain, &absorbing).unwrap_or_else(|| {
        let horizon_cap = pr_below.len() - 1;
        ExpectedHittingTime::TruncatedLowerBound(
            (0..horizon_cap).map(|t| 1.0 - pr_below[t + 1]).sum(),
        )
    });

    HittingAnalysis { pr_below, expected }
}

fn expected_hitting_time(chain: &FiniteChain, absorbing: &[bool]) -> Option<ExpectedHittingTime> {
    let n = chain.state_count();
    let positive_edge = |s: usize, s2: usize| chain.transitions[s][s2] > 0.0;

    // States reachable from the start support.
    let mut reachable = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&s| chain.start[s] > 0.0).collect();
    for &s in &stack {
        reachable[s] = true;
    }
    while let Some(s) = stack.pop() {
        if absorbing[s] {
            continue;
        }
        #[allow(clippy::needless_range_loop)]
        for s2 in 0..n {
            if positive_edge(s, s2) && !reachable[s2] {
                reachable[s2] = true;
                stack.push(s2);
            }
        }
    }

    // States from which the absorbing set is reachable.
    let mut can_absorb = absorbing.to_vec();
    loop {
        let mut changed = false;
        for s in 0..n {
            if can_absorb[s] || absorbing[s] {
                continue;
            }
            if (0..n).any(|s2| positive_edge(s, s2) && can_absorb[s2]) {
                can_absorb[s] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    if (0..n).any(|s| reachable[s] && !can_absorb[s]) {
        return Some(ExpectedHittingTime::Infinite);
    }

    // Transient reachable states: solve (I - Q) h = 1.
    let transient: Vec<usize> = (0..n).filter(|&s| reachable[s] && !absorbing[s]).collect();
    if transient.is_empty() {
        return Some(ExpectedHittingTime::Exact(0.0));
    }
    let m = transient.len();
    let mut a = vec![vec![0.0f64; m + 1]; m];
    for (i, &s) in transient.iter().enumerate() {
        for (j, &s2) in transient.iter().enumerate() {
            a[i][j] = if i == j { 1.0 } else { 0.0 } - chain.transitions[s][s2];
        }
        a[i][m] = 1.0;
    }
    let h = gaussian_solve(&mut a)?;
    let e_t: f64 = chain
        .start
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(s, &p)| {
            if absorbing[s] {
                0.0
            } else {
                p * h[transient
                    .iter()
                    .position(|&t| t == s)
                    .expect("start state is transient")]
            }
        })
        .sum();
    Some(ExpectedHittingTime::Exact(e_t))
}

/// Gaussian elimination with partial pivoting on an augmented matrix;
/// `None` when the system is numerically singular.
fn gaussian_solve(a: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .expect("finite matrix entries")
        })?;
        // Structural singularity is screened out by the reachability check
        // before the solve; this only guards against exact zero pivots.
        if a[pivot][col].abs() < 1e-200 {
            return None;
        }
        a.swap(col, pivot);
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            #[allow(clippy::needless_range_loop)]
            for k in col..=n {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// `E[X_t]` of the unstopped process along `t = 0..=horizon`, by exact
/// propagation of the start distribution.
pub fn expectation_trajectory(chain: &FiniteChain, horizon: usize) -> Vec<f64> {
    let n = chain.state_count();
    let mut dist = chain.start.to_vec();
    let mean = |d: &[f64]| d.iter().zip(&chain.labels).map(|(p, x)| p * x).sum::<f64>();
    let mut out = Vec::with_capacity(horizon + 1);
    out.push(mean(&dist));
    for _ in 0..horizon {
        let mut next = vec![0.0; n];
        for (s, &p) in dist.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for (s2, &q) in chain.transitions[s].iter().enumerate() {
                next[s2] += p * q;
            }
        }
        dist = next;
        out.push(mean(&dist));
    }
    out
}

/// Random chains with a downward pull, low-label starts, and a threshold in
/// the upper label range — the population most checks accept.
pub fn random_drifty_chain(max_states: usize, rng: &mut impl Rng) -> FiniteChain {
    let n = rng.gen_range(4..=max_states.max(4));
    // Geometric-ish increasing labels starting at 0.
    let growth: f64 = rng.gen_range(1.4..2.6);
    let mut labels = Vec::with_capacity(n);
    let mut value = 0.0;
    for i in 0..n {
        labels.push(value);
        let step = growth.powi(i as i32) * rng.gen_range(0.5..1.5);
        value += step;
    }

    let up_penalty: f64 = rng.gen_range(0.02..0.25);
    let mut transitions = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: Vec<f64> = (0..n)
            .map(|j| {
                let w: f64 = rng.gen_range(0.05..1.0);
                if j > i {
                    // Capped so the smallest probabilities stay well inside
                    // f64 territory for the exact hitting solve.
                    w * up_penalty.powi((j - i).min(5) as i32)
                } else {
                    w
                }
            })
            .collect();
        let total: f64 = row.iter().sum();
        for w in &mut row {
            *w /= total;
        }
        // Put the rounding residual on the largest entry, which can absorb
        // it without going negative.
        let sum: f64 = row.iter().sum();
        let argmax = (0..row.len())
            .max_by(|&a, &b| row[a].partial_cmp(&row[b]).expect("finite weights"))
            .expect("non-empty row");
        row[argmax] += 1.0 - sum;
        transitions.push(row);
    }

    // Start on the bottom third of the states.
    let low = (n / 3).max(1);
    let mut start = vec![0.0; n];
    for s in start.iter_mut().take(low) {
        *s = 1.0 / low as f64;
    }
    let start_sum: f64 = start.iter().sum();
    start[0] += 1.0 - start_sum;

    let max_label = labels[n - 1];
    let threshold = max_label * rng.gen_range(0.4..0.95);

    FiniteChain::new(labels, transitions, threshold.max(1e-6), start)
        .expect("generator builds valid chains")
}
