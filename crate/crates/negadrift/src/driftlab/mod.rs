//! Verification laboratory: exact small-chain oracles for the drift bound,
//! analytic checkers for the population-bound conditions, empirical drift
//! measurement, and stochastic-domination tests.
//!
//! A remark on scope: the companion observation that the population fitness
//! *sum* is not dominated by the sum of random fitnesses (unlike the
//! per-individual fitness, which is) is documented here but deliberately not
//! implemented as a test — the separating event has probability of order
//! `(20n)^{-n}` and is unobservable at any feasible sample size.

mod chain;
mod conditions;
mod domination;

pub use chain::{
    chain_drift_check, chain_exact_hitting, drift_excess, expectation_trajectory,
    random_drifty_chain, DriftParams, ExpectedHittingTime, FiniteChain, HittingAnalysis,
};
pub use conditions::{
    measure_drift, verify_condition_ii, verify_condition_iii, ConditionThreeReport,
    ConditionTwoReport, DriftMeasurement, LevelCheck,
};
pub use domination::{
    dkw_one_sided_epsilon, domination_test_exact, domination_test_statistical,
    monotone_expectation_check, DominationVerdict, VerdictMethod,
};
