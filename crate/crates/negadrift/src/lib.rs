//! Population selection-mutation processes, their explicit negative-drift
//! lower bounds, and the verification lab that cross-checks theory against
//! exact oracles and simulation.
//!
//! The crate splits into:
//! - [`bitstring`] / [`potential`]: packed search points, populations, and
//!   the log-space exponential population potential;
//! - [`mutation`] / [`selection`]: the operators and their exact analytic
//!   companions (offspring-distance distributions, MGFs, reproduction
//!   numbers);
//! - [`engine`]: the generic select-then-mutate loop, presets, and
//!   replayable hitting-time experiments;
//! - [`bounds`]: the explicit lower-bound calculators, all in log space;
//! - [`driftlab`]: exact finite-chain hitting oracles, drift-condition
//!   checkers, and stochastic-domination tests.

// Validation guards are written `!(x > 0.0)` on purpose: the negation is
// what makes NaN fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bitstring;
pub mod bounds;
pub mod driftlab;
pub mod engine;
pub mod error;
pub mod mutation;
pub mod potential;
pub mod report;
pub mod selection;

pub use bitstring::{hamming, onemax, BitString, Population};
pub use error::{Error, Result};
pub use potential::{population_potential, Potential, PotentialSpec};
