//! `verify` subcommands: analytic condition checks, empirical drift
//! measurement, domination tests, and the randomized finite-chain oracle
//! suite for the drift lemma.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use negadrift::bitstring::onemax;
use negadrift::driftlab::{
    chain_drift_check, chain_exact_hitting, domination_test_exact, domination_test_statistical,
    measure_drift, random_drifty_chain, verify_condition_ii, verify_condition_iii,
    ExpectedHittingTime,
};
use negadrift::engine::{derive_replicate_seed, init_population, step};
use negadrift::mutation::offspring_distance_pmf;
use negadrift::report::Record;

use crate::bound_cmd::build_operator;
use crate::sim_cmd::ProcessArgs;
use crate::support::{
    emit_record, require, resolve_seed, with_pool, CliError, CliResult, ConfigMap, OutTarget,
};

#[derive(Subcommand)]
pub enum VerifyCommand {
    /// Per-level analytic check of the two drift conditions of the
    /// population bound.
    Conditions(ConditionsArgs),
    /// Empirical one-generation drift of the exponential population
    /// potential against its analytic cap.
    Drift(DriftArgs),
    /// Stochastic-domination tests.
    #[command(subcommand)]
    Domination(DominationCommand),
    /// Randomized finite chains: accepted drift pairs must agree with the
    /// exact hitting oracle.
    Lemma1Oracle(Lemma1OracleArgs),
}

pub fn run_verify(cmd: &VerifyCommand) -> CliResult<()> {
    match cmd {
        VerifyCommand::Conditions(args) => run_conditions(args),
        VerifyCommand::Drift(args) => run_drift(args),
        VerifyCommand::Domination(cmd) => run_domination(cmd),
        VerifyCommand::Lemma1Oracle(args) => run_lemma1_oracle(args),
    }
}

#[derive(Args)]
pub struct ConditionsArgs {
    #[arg(long)]
    n: Option<u64>,
    /// Fixed mutation rate.
    #[arg(long)]
    p: Option<f64>,
    /// Rate mixture as comma-separated p:q pairs.
    #[arg(long)]
    rates: Option<String>,
    #[arg(long = "heavy-tailed-beta")]
    heavy_tailed_beta: Option<f64>,
    #[arg(long = "heavy-tailed-cap")]
    heavy_tailed_cap: Option<u64>,
    /// Potential scale; alternatively pass the base B (kappa = ln B).
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long = "B")]
    base: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
    #[arg(long = "D")]
    big_d: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_conditions(args: &ConditionsArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::load(args.config.as_deref())?;
    let n = require(args.n, cfg.u64("n")?, "n")?;
    let rates = args.rates.clone().or(cfg.string("rates")?);
    let ht_beta = args.heavy_tailed_beta.or(cfg.f64("heavy_tailed_beta")?);
    let ht_cap = args.heavy_tailed_cap.or(cfg.u64("heavy_tailed_cap")?);
    let p = args.p.or(cfg.f64("p")?);
    let op = build_operator(rates.as_deref(), ht_beta, ht_cap, p, n)?;
    let kappa = match (
        args.kappa.or(cfg.f64("kappa")?),
        args.base.or(cfg.f64("B")?),
    ) {
        (Some(k), None) => k,
        (None, Some(b)) => b.ln(),
        _ => {
            return Err(CliError::schema(
                "pass exactly one of --kappa, --B".to_string(),
            ))
        }
    };
    let alpha = require(args.alpha, cfg.f64("alpha")?, "alpha")?;
    let delta = require(args.delta, cfg.f64("delta")?, "delta")?;
    let a = require(args.a, cfg.u64("a")?, "a")? as usize;
    let b = require(args.b, cfg.u64("b")?, "b")? as usize;
    let big_d = require(args.big_d, cfg.f64("D")?, "D")?;
    cfg.finish()?;

    let report_ii = verify_condition_ii(&op, n as usize, kappa, alpha, delta, a, b)?;
    let report_iii = verify_condition_iii(&op, n as usize, kappa, b, big_d)?;

    let mut out = OutTarget::create(args.out.as_ref())?;
    for rec in report_ii.to_records() {
        emit_record(&mut out, &rec)?;
    }
    emit_record(&mut out, &report_iii.to_record())?;
    let mut summary = Record::new()
        .with("check", "conditions-summary")
        .with("condition_ii_all_hold", report_ii.all_hold)
        .with("condition_iii_holds", report_iii.holds);
    if let Some(t) = report_ii.tightest {
        summary.push("tightest_level", t as u64);
    }
    emit_record(&mut out, &summary)?;
    out.flush()?;
    Ok(())
}

#[derive(Args)]
pub struct DriftArgs {
    #[command(flatten)]
    process: ProcessArgs,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long = "D")]
    big_d: Option<f64>,
    #[arg(long)]
    b: Option<u64>,
    /// Monte Carlo generations per sampled population.
    #[arg(long)]
    reps: Option<u64>,
    /// Number of initial populations to sample.
    #[arg(long)]
    populations: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_drift(args: &DriftArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::load(args.config.as_deref())?;
    let proc = args.process.resolve(&mut cfg)?;
    let kappa = require(args.kappa, cfg.f64("kappa")?, "kappa")?;
    let delta = require(args.delta, cfg.f64("delta")?, "delta")?;
    let big_d = require(args.big_d, cfg.f64("D")?, "D")?;
    let b = require(args.b, cfg.u64("b")?, "b")?;
    let reps = args.reps.or(cfg.u64("reps")?).unwrap_or(400) as usize;
    let populations = args.populations.or(cfg.u64("populations")?).unwrap_or(20);
    let seed = resolve_seed(args.seed, cfg.u64("seed")?)?;
    cfg.finish()?;

    // Disturbance term of the analytic right side.
    let disturbance = proc.lambda as f64 * big_d * (-kappa * b as f64).exp();

    struct Row {
        index: u64,
        current: f64,
        mean: f64,
        half_width: f64,
        rhs: f64,
        ok: bool,
    }

    let rows: Vec<Row> = with_pool(args.workers, || {
        (0..populations)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_replicate_seed(seed, i));
                let pop = init_population(&proc, &mut rng)?;
                let m = measure_drift(&proc, &pop, kappa, reps, &mut rng)?;
                let rhs = (1.0 - delta) * m.current + disturbance;
                Ok(Row {
                    index: i,
                    current: m.current,
                    mean: m.mean,
                    half_width: m.half_width,
                    rhs,
                    ok: m.mean <= rhs + 3.0 * m.half_width,
                })
            })
            .collect::<negadrift::Result<Vec<_>>>()
    })??;

    let mut out = OutTarget::create(args.out.as_ref())?;
    let mut ok_count = 0u64;
    for row in &rows {
        if row.ok {
            ok_count += 1;
        }
        emit_record(
            &mut out,
            &Record::new()
                .with("check", "drift")
                .with("population", row.index)
                .with("current", row.current)
                .with("mean_next", row.mean)
                .with("half_width", row.half_width)
                .with("rhs", row.rhs)
                .with("ok", row.ok),
        )?;
    }
    emit_record(
        &mut out,
        &Record::new()
            .with("check", "drift-summary")
            .with("populations", populations)
            .with("ok", ok_count)
            .with("fraction_ok", ok_count as f64 / populations as f64),
    )?;
    out.flush()?;
    Ok(())
}

#[derive(Subcommand)]
pub enum DominationCommand {
    /// Exact CDF comparison of offspring-distance distributions.
    Exact(DominationExactArgs),
    /// Statistical check that GA fitness samples dominate random search.
    FitnessFloor(FitnessFloorArgs),
}

#[derive(Args)]
pub struct DominationExactArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    p: f64,
    /// Check one pair of parent distances (both required)...
    #[arg(long = "d-high")]
    d_high: Option<u64>,
    #[arg(long = "d-low")]
    d_low: Option<u64>,
    /// ...or sweep every pair d_high > d_low.
    #[arg(long, default_value_t = false)]
    all: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct FitnessFloorArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    mu: Option<u64>,
    /// Checkpoints (iteration numbers) at which to test.
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<u64>>,
    /// Independent runs; one sampled individual per run.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    significance: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_domination(cmd: &DominationCommand) -> CliResult<()> {
    match cmd {
        DominationCommand::Exact(args) => {
            let n = args.n as usize;
            let mut out = OutTarget::create(args.out.as_ref())?;
            let pairs: Vec<(usize, usize)> = if args.all {
                (0..=n)
                    .flat_map(|low| (low + 1..=n).map(move |high| (high, low)))
                    .collect()
            } else {
                let high = args.d_high.ok_or_else(|| {
                    CliError::schema("need --d-high and --d-low (or --all)".to_string())
                })? as usize;
                let low = args.d_low.ok_or_else(|| {
                    CliError::schema("need --d-high and --d-low (or --all)".to_string())
                })? as usize;
                vec![(high, low)]
            };
            let mut violations = 0u64;
            for (high, low) in &pairs {
                if *high > n {
                    return Err(CliError::schema(format!("d-high {high} exceeds n {n}")));
                }
                let pmf_low = offspring_distance_pmf(*low, n, args.p);
                let pmf_high = offspring_distance_pmf(*high, n, args.p);
                let verdict = domination_test_exact(&pmf_low, &pmf_high)?;
                if !verdict.holds {
                    violations += 1;
                }
                if !args.all || !verdict.holds {
                    let mut rec = verdict.to_record();
                    rec.push("d_high", *high as u64);
                    rec.push("d_low", *low as u64);
                    rec.push("p", args.p);
                    emit_record(&mut out, &rec)?;
                }
            }
            emit_record(
                &mut out,
                &Record::new()
                    .with("check", "domination-exact-summary")
                    .with("pairs", pairs.len() as u64)
                    .with("violations", violations),
            )?;
            out.flush()?;
            Ok(())
        }
        DominationCommand::FitnessFloor(args) => run_fitness_floor(args),
    }
}

fn run_fitness_floor(args: &FitnessFloorArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::load(args.config.as_deref())?;
    let n = require(args.n, cfg.u64("n")?, "n")? as usize;
    let mu = require(args.mu, cfg.u64("mu")?, "mu")? as usize;
    let times = args.times.clone().unwrap_or_else(|| vec![1, 5, 10, 25, 50]);
    let samples = args.samples.or(cfg.u64("samples")?).unwrap_or(10_000);
    let significance = args
        .significance
        .or(cfg.f64("significance")?)
        .unwrap_or(1e-3);
    let seed = resolve_seed(args.seed, cfg.u64("seed")?)?;
    cfg.finish()?;
    if times.is_empty() {
        return Err(CliError::schema(
            "need at least one checkpoint in --times".to_string(),
        ));
    }

    let proc = negadrift::engine::PsmProcess::simple_ga(n, mu)?;
    let max_t = *times.iter().max().expect("non-empty");

    // One sampled individual (member 0) per independent run, so the DKW
    // test sees independent draws.
    let per_run: Vec<Vec<usize>> = with_pool(args.workers, || {
        (0..samples)
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_replicate_seed(seed, k));
                let mut pop = init_population(&proc, &mut rng)?;
                let mut values = Vec::with_capacity(times.len());
                for t in 1..=max_t {
                    pop = step(&proc, &pop, &mut rng)?;
                    if times.contains(&t) {
                        values.push(onemax(pop.member(0)));
                    }
                }
                Ok(values)
            })
            .collect::<negadrift::Result<Vec<_>>>()
    })??;

    let pmf = offspring_distance_pmf(0, n, 0.5);
    let mut acc = 0.0;
    let reference_cdf: Vec<f64> = pmf
        .iter()
        .map(|&q| {
            acc += q;
            acc
        })
        .collect();

    let mut sorted_times = times.clone();
    sorted_times.sort_unstable();
    let mut out = OutTarget::create(args.out.as_ref())?;
    let mut all_hold = true;
    for (idx, &t) in sorted_times.iter().enumerate() {
        let values: Vec<usize> = per_run.iter().map(|v| v[idx]).collect();
        let verdict = domination_test_statistical(&values, &reference_cdf, significance)?;
        all_hold &= verdict.holds;
        let mut rec = verdict.to_record();
        rec.push("t", t);
        rec.push("samples", values.len() as u64);
        emit_record(&mut out, &rec)?;
    }
    emit_record(
        &mut out,
        &Record::new()
            .with("check", "fitness-floor-summary")
            .with("n", n as u64)
            .with("mu", mu as u64)
            .with("all_hold", all_hold),
    )?;
    out.flush()?;
    Ok(())
}

#[derive(Args)]
pub struct Lemma1OracleArgs {
    /// Number of accepted chains to verify.
    #[arg(long)]
    chains: Option<u64>,
    /// Maximum state count per chain.
    #[arg(long, default_value_t = 30)]
    states: usize,
    #[arg(long = "L", default_value_t = 1000)]
    horizon: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct ChainVerdict {
    index: u64,
    states: usize,
    drift_rate: f64,
    disturbance: f64,
    threshold: f64,
    pr_ok: bool,
    worst_pr_margin: f64,
    et_kind: &'static str,
    et_value: f64,
    et_bound: f64,
    et_ok: bool,
}

fn run_lemma1_oracle(args: &Lemma1OracleArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::load(args.config.as_deref())?;
    let chains = args.chains.or(cfg.u64("chains")?).unwrap_or(200);
    let seed = resolve_seed(args.seed, cfg.u64("seed")?)?;
    cfg.finish()?;

    // Generate sequentially (cheap, deterministic), analyze in parallel.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted = Vec::new();
    let mut attempts = 0u64;
    while (accepted.len() as u64) < chains {
        attempts += 1;
        if attempts > chains.saturating_mul(100).max(1_000) {
            return Err(CliError::schema(format!(
                "chain generator accepted only {} of the requested {chains} chains",
                accepted.len()
            )));
        }
        let chain = random_drifty_chain(args.states, &mut rng);
        if let Some(params) = chain_drift_check(&chain) {
            accepted.push((chain, params));
        }
    }

    let horizon = args.horizon;
    let verdicts: Vec<ChainVerdict> = with_pool(args.workers, || {
        accepted
            .par_iter()
            .enumerate()
            .map(|(i, (chain, params))| {
                let analysis = chain_exact_hitting(chain, horizon);
                let m = chain.threshold();
                let mut pr_ok = true;
                let mut worst_margin = f64::INFINITY;
                for l in 1..=horizon {
                    let bound = (l as f64 * params.disturbance / (params.drift_rate * m)).min(1.0);
                    let margin = bound * (1.0 + 1e-9) + 1e-12 - analysis.pr_below[l];
                    if margin < worst_margin {
                        worst_margin = margin;
                    }
                    if margin < 0.0 {
                        pr_ok = false;
                    }
                }
                let et_bound = params.drift_rate * m / (2.0 * params.disturbance) - 0.5;
                let (et_kind, et_value) = match analysis.expected {
                    ExpectedHittingTime::Exact(v) => ("exact", v),
                    ExpectedHittingTime::TruncatedLowerBound(v) => ("truncated", v),
                    ExpectedHittingTime::Infinite => ("infinite", f64::INFINITY),
                };
                let et_ok = match analysis.expected {
                    ExpectedHittingTime::Exact(v) => v >= et_bound * (1.0 - 1e-9) - 1e-9,
                    ExpectedHittingTime::TruncatedLowerBound(v) => v >= et_bound,
                    ExpectedHittingTime::Infinite => true,
                };
                ChainVerdict {
                    index: i as u64,
                    states: chain.state_count(),
                    drift_rate: params.drift_rate,
                    disturbance: params.disturbance,
                    threshold: m,
                    pr_ok,
                    worst_pr_margin: worst_margin,
                    et_kind,
                    et_value,
                    et_bound,
                    et_ok,
                }
            })
            .collect()
    })?;

    let mut out = OutTarget::create(args.out.as_ref())?;
    let mut violations = 0u64;
    for v in &verdicts {
        if !(v.pr_ok && v.et_ok) {
            violations += 1;
        }
        emit_record(
            &mut out,
            &Record::new()
                .with("check", "lemma1-oracle")
                .with("chain", v.index)
                .with("states", v.states as u64)
                .with("delta", v.drift_rate)
                .with("Delta", v.disturbance)
                .with("M", v.threshold)
                .with("pr_ok", v.pr_ok)
                .with("worst_pr_margin", v.worst_pr_margin)
                .with("e_t_kind", v.et_kind)
                .with("e_t_value", v.et_value)
                .with("e_t_bound", v.et_bound)
                .with("e_t_ok", v.et_ok),
        )?;
    }
    emit_record(
        &mut out,
        &Record::new()
            .with("check", "lemma1-oracle-summary")
            .with("chains", verdicts.len() as u64)
            .with("attempts", attempts)
            .with("violations", violations),
    )?;
    out.flush()?;
    Ok(())
}
