//! The generic population selection-mutation loop, concrete presets, and
//! replayable hitting-time experiments.
//!
//! One iteration selects a full tuple of parent indices from the current
//! population (arbitrarily, possibly dependently) and mutates each selected
//! parent once. Each iteration evaluates fitness exactly `lambda` times, so
//! `lambda * iterations` is the fitness-evaluation cost measure.
//!
//! Replicates derive their random streams from a master seed by a
//! counter-based split, so replicate `k` is bit-identical no matter in what
//! order (or on how many workers) the replicates run.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bitstring::{onemax, BitString, Population};
use crate::error::{Error, Result};
use crate::mutation::{mutate, MutationOperator};
use crate::potential::{log_potential_from_values, PotentialSpec};
use crate::report::format_float;
use crate::selection::{select, SelectionOperator};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Initializer {
    /// `lambda` independent uniform points.
    UniformRandom,
    /// `mu` independent uniform base points; every member is a mutated copy
    /// of a uniformly picked base. Each member is then itself uniformly
    /// distributed, but members are dependent. This is how the (mu,lambda)
    /// EA enters the framework with population size `lambda`.
    MuLambdaSeeded { mu: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitnessRule {
    /// Fitness is the number of ones.
    OneMax,
    /// Fitness is `n - H(x, target)`, i.e. proximity to the potential's
    /// target point.
    TargetProximity,
}

/// A fully specified process: selection, mutation, population size,
/// initializer, potential, and the fitness the selection sees.
#[derive(Clone, Debug)]
pub struct PsmProcess {
    pub n: usize,
    pub lambda: usize,
    pub selection: SelectionOperator,
    pub mutation: MutationOperator,
    pub initializer: Initializer,
    pub potential: PotentialSpec,
    pub fitness: FitnessRule,
}

impl PsmProcess {
    pub fn new(
        n: usize,
        lambda: usize,
        selection: SelectionOperator,
        mutation: MutationOperator,
        initializer: Initializer,
        potential: PotentialSpec,
        fitness: FitnessRule,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::argument("process needs n >= 1"));
        }
        if lambda == 0 {
            return Err(Error::argument("process needs lambda >= 1"));
        }
        if potential.n() != n {
            return Err(Error::argument(format!(
                "potential target length {} does not match n = {n}",
                potential.n()
            )));
        }
        if let SelectionOperator::TruncationUniform { mu } = selection {
            if mu < 1 || mu > lambda {
                return Err(Error::argument(format!(
                    "truncation selection needs 1 <= mu <= lambda, got mu={mu}, lambda={lambda}"
                )));
            }
        }
        if let Initializer::MuLambdaSeeded { mu } = initializer {
            if mu < 1 {
                return Err(Error::argument("seeded initializer needs mu >= 1"));
            }
        }
        Ok(PsmProcess {
            n,
            lambda,
            selection,
            mutation,
            initializer,
            potential,
            fitness,
        })
    }

    /// The (mu,lambda) EA on OneMax: truncation selection over the best mu
    /// of the lambda offspring, standard bit mutation at `rate`, and the
    /// seeded initializer that keeps every initial member uniform.
    pub fn mu_lambda_ea(n: usize, mu: usize, lambda: usize, rate: f64) -> Result<Self> {
        Self::new(
            n,
            lambda,
            SelectionOperator::TruncationUniform { mu },
            MutationOperator::fixed_rate(rate)?,
            Initializer::MuLambdaSeeded { mu },
            PotentialSpec::onemax_target(n)?,
            FitnessRule::OneMax,
        )
    }

    /// The mutation-only simple GA on OneMax: population size `mu`,
    /// fitness proportionate selection, mutation rate `1/n`.
    pub fn simple_ga(n: usize, mu: usize) -> Result<Self> {
        Self::new(
            n,
            mu,
            SelectionOperator::FitnessProportionate,
            MutationOperator::fixed_rate(1.0 / n as f64)?,
            Initializer::UniformRandom,
            PotentialSpec::onemax_target(n)?,
            FitnessRule::OneMax,
        )
    }

    pub fn fitness_of(&self, x: &BitString) -> Result<f64> {
        Ok(match self.fitness {
            FitnessRule::OneMax => onemax(x) as f64,
            FitnessRule::TargetProximity => (self.n - self.potential.eval(x)?) as f64,
        })
    }

    /// Fitness of every member; exactly one evaluation per member.
    pub fn evaluate(&self, pop: &Population) -> Result<Vec<f64>> {
        pop.iter().map(|x| self.fitness_of(x)).collect()
    }

    pub fn potentials(&self, pop: &Population) -> Result<Vec<usize>> {
        pop.iter().map(|x| self.potential.eval(x)).collect()
    }
}

/// Draw the initial population.
pub fn init_population(proc: &PsmProcess, rng: &mut impl Rng) -> Result<Population> {
    let members = match proc.initializer {
        Initializer::UniformRandom => (0..proc.lambda)
            .map(|_| BitString::random(proc.n, rng))
            .collect::<Result<Vec<_>>>()?,
        Initializer::MuLambdaSeeded { mu } => {
            let bases = (0..mu)
                .map(|_| BitString::random(proc.n, rng))
                .collect::<Result<Vec<_>>>()?;
            (0..proc.lambda)
                .map(|_| {
                    let pick = rng.gen_range(0..mu);
                    Ok(mutate(&bases[pick], &proc.mutation, rng))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Population::new(members)
}

/// One full generation: evaluate, select a parent index per slot, mutate
/// each selected parent once.
pub fn step(proc: &PsmProcess, pop: &Population, rng: &mut impl Rng) -> Result<Population> {
    if pop.lambda() != proc.lambda || pop.n() != proc.n {
        return Err(Error::argument(
            "population does not conform to the process",
        ));
    }
    let fitness = proc.evaluate(pop)?;
    let outcome = select(&fitness, &proc.selection, rng)?;
    let offspring = outcome
        .indices
        .iter()
        .map(|&q| mutate(pop.member(q), &proc.mutation, rng))
        .collect();
    Population::new(offspring)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub iteration: u64,
    pub min_potential: usize,
    pub log_potential: f64,
    pub hit: bool,
}

/// The full record of one run: one row per inspected population state
/// (`t = 0` first), the hitting time if the run hit, and the censoring
/// iteration otherwise.
#[derive(Clone, Debug)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
    pub hit_time: Option<u64>,
    pub censored_at: Option<u64>,
    pub fitness_evaluations: u64,
    pub seed: u64,
    pub kappa: f64,
}

impl RunTrace {
    pub fn hit(&self) -> bool {
        self.hit_time.is_some()
    }

    /// Iterations actually executed.
    pub fn iterations(&self) -> u64 {
        self.rows.last().map(|r| r.iteration).unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    /// Stop as soon as some member has potential at most this level.
    pub target_level: usize,
    /// Maximum number of iterations to execute; the initial population is
    /// inspected before any iteration, so the hitting time can be 0.
    pub max_iterations: u64,
    /// Scale of the logged population potential.
    pub kappa: f64,
}

/// Run until the first population containing a member with potential at
/// most `target_level`, or censor after `max_iterations` iterations.
pub fn run_until(proc: &PsmProcess, cfg: &RunConfig, seed: u64) -> Result<RunTrace> {
    if cfg.target_level > proc.n {
        return Err(Error::argument(format!(
            "target level {} exceeds n = {}",
            cfg.target_level, proc.n
        )));
    }
    if !(cfg.kappa > 0.0) {
        return Err(Error::argument(format!(
            "kappa must be positive, got {}",
            cfg.kappa
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pop = init_population(proc, &mut rng)?;
    let mut rows = Vec::new();
    let mut fitness_evaluations = 0u64;
    let mut t = 0u64;
    loop {
        let potentials = proc.potentials(&pop)?;
        let min_potential = *potentials.iter().min().expect("non-empty population");
        let log_potential = log_potential_from_values(&potentials, cfg.kappa)?;
        let hit = min_potential <= cfg.target_level;
        rows.push(TraceRow {
            iteration: t,
            min_potential,
            log_potential,
            hit,
        });
        if hit {
            return Ok(RunTrace {
                rows,
                hit_time: Some(t),
                censored_at: None,
                fitness_evaluations,
                seed,
                kappa: cfg.kappa,
            });
        }
        if t >= cfg.max_iterations {
            return Ok(RunTrace {
                rows,
                hit_time: None,
                censored_at: Some(t),
                fitness_evaluations,
                seed,
                kappa: cfg.kappa,
            });
        }
        pop = step(proc, &pop, &mut rng)?;
        fitness_evaluations += proc.lambda as u64;
        t += 1;
    }
}

/// Counter-based stream split: the seed of replicate `k` is a fixed mixing
/// of the master seed and `k`, independent of execution order.
pub fn derive_replicate_seed(master: u64, replicate: u64) -> u64 {
    let mut z = master.wrapping_add(
        replicate
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReplicateOutcome {
    pub replicate: u64,
    pub seed: u64,
    pub hit: bool,
    /// Hitting time when hit; strictly below the experiment horizon.
    pub hitting_time: Option<u64>,
    /// Iterations executed in this replicate.
    pub iterations: u64,
}

/// Aggregate of independent replicates of one hitting-time question:
/// `Pr[T < horizon]` estimated by the hit fraction.
#[derive(Clone, Debug)]
pub struct ExperimentSummary {
    pub reps: u64,
    pub horizon: u64,
    pub hits: u64,
    pub censored: u64,
    pub empirical_pr_hit: f64,
    pub mean_uncensored: Option<f64>,
    pub master_seed: u64,
    pub replicates: Vec<ReplicateOutcome>,
}

/// Run `reps` independent replicates, each censored so that a hit means
/// exactly `T < horizon`. Deterministic given the master seed; replicates
/// execute on the current rayon pool and are reduced in replicate order.
pub fn hitting_time_experiment(
    proc: &PsmProcess,
    target_level: usize,
    horizon: u64,
    kappa: f64,
    reps: u64,
    master_seed: u64,
) -> Result<ExperimentSummary> {
    if reps < 1 {
        return Err(Error::argument("experiment needs reps >= 1"));
    }
    if horizon < 1 {
        return Err(Error::argument("experiment needs horizon L >= 1"));
    }
    let cfg = RunConfig {
        target_level,
        // T < horizon is exactly "hit within horizon - 1 executed iterations".
        max_iterations: horizon - 1,
        kappa,
    };
    let outcomes: Vec<ReplicateOutcome> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let seed = derive_replicate_seed(master_seed, rep);
            let trace = run_until(proc, &cfg, seed)?;
            Ok(ReplicateOutcome {
                replicate: rep,
                seed,
                hit: trace.hit(),
                hitting_time: trace.hit_time,
                iterations: trace.iterations(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let hits = outcomes.iter().filter(|o| o.hit).count() as u64;
    let censored = reps - hits;
    let mean_uncensored = if hits > 0 {
        let total: u64 = outcomes.iter().filter_map(|o| o.hitting_time).sum();
        Some(total as f64 / hits as f64)
    } else {
        None
    };
    Ok(ExperimentSummary {
        reps,
        horizon,
        hits,
        censored,
        empirical_pr_hit: hits as f64 / reps as f64,
        mean_uncensored,
        master_seed,
        replicates: outcomes,
    })
}

/// One CSV row per inspected iteration: `t,min_g,log_potential,hit`.
pub fn write_trace_csv(trace: &RunTrace, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "t,min_g,log_potential,hit")?;
    for row in &trace.rows {
        writeln!(
            out,
            "{},{},{},{}",
            row.iteration,
            row.min_potential,
            format_float(row.log_potential),
            row.hit
        )?;
    }
    Ok(())
}

/// One CSV row per replicate: `rep,seed,hit,t_hit,iterations`
/// (`t_hit` empty for censored replicates).
pub fn write_experiment_csv(summary: &ExperimentSummary, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "rep,seed,hit,t_hit,iterations")?;
    for o in &summary.replicates {
        let t_hit = o.hitting_time.map(|t| t.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{}",
            o.replicate, o.seed, o.hit, t_hit, o.iterations
        )?;
    }
    Ok(())
}
