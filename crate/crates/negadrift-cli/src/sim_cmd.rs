//! `simulate` (single trace) and `experiment hitting-time` (replicated
//! hitting-time estimation with a worker pool).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Subcommand};

use negadrift::engine::{
    hitting_time_experiment, run_until, write_experiment_csv, write_trace_csv, FitnessRule,
    Initializer, PsmProcess, RunConfig,
};
use negadrift::potential::PotentialSpec;
use negadrift::report::Record;
use negadrift::selection::SelectionOperator;

use crate::bound_cmd::build_operator;
use crate::support::{
    emit_record, require, resolve_seed, with_pool, CliError, CliResult, ConfigMap, OutTarget,
};

/// Flags that describe a concrete process preset.
#[derive(Args, Clone)]
pub struct ProcessArgs {
    /// Process preset: "mu-lambda" or "simple-ga".
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    mu: Option<u64>,
    #[arg(long)]
    lambda: Option<u64>,
    /// Fixed mutation rate (default 1/n).
    #[arg(long)]
    p: Option<f64>,
    /// Use the heavy-tailed operator with this exponent instead of a fixed
    /// rate.
    #[arg(long = "heavy-tailed-beta")]
    heavy_tailed_beta: Option<f64>,
    #[arg(long = "heavy-tailed-cap")]
    heavy_tailed_cap: Option<u64>,
}

impl ProcessArgs {
    pub fn resolve(&self, cfg: &mut ConfigMap) -> CliResult<PsmProcess> {
        let preset = require(self.preset.clone(), cfg.string("preset")?, "preset")?;
        let n = require(self.n, cfg.u64("n")?, "n")? as usize;
        let mu = require(self.mu, cfg.u64("mu")?, "mu")? as usize;
        let rate = self.p.or(cfg.f64("p")?);
        let ht_beta = self.heavy_tailed_beta.or(cfg.f64("heavy_tailed_beta")?);
        let ht_cap = self.heavy_tailed_cap.or(cfg.u64("heavy_tailed_cap")?);
        if rate.is_some() && ht_beta.is_some() {
            return Err(CliError::schema(
                "pass either --p or --heavy-tailed-beta, not both".to_string(),
            ));
        }
        let mutation = if ht_beta.is_some() {
            build_operator(None, ht_beta, ht_cap, None, n as u64)?
        } else {
            build_operator(
                None,
                None,
                None,
                Some(rate.unwrap_or(1.0 / n as f64)),
                n as u64,
            )?
        };
        match preset.as_str() {
            "mu-lambda" => {
                let lambda = require(self.lambda, cfg.u64("lambda")?, "lambda")? as usize;
                Ok(PsmProcess::new(
                    n,
                    lambda,
                    SelectionOperator::TruncationUniform { mu },
                    mutation,
                    Initializer::MuLambdaSeeded { mu },
                    PotentialSpec::onemax_target(n)?,
                    FitnessRule::OneMax,
                )?)
            }
            "simple-ga" => Ok(PsmProcess::new(
                n,
                mu,
                SelectionOperator::FitnessProportionate,
                mutation,
                Initializer::UniformRandom,
                PotentialSpec::onemax_target(n)?,
                FitnessRule::OneMax,
            )?),
            other => Err(CliError::schema(format!(
                "unknown preset {other:?}; expected \"mu-lambda\" or \"simple-ga\""
            ))),
        }
    }
}

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    process: ProcessArgs,
    /// Stop once some member is within this Hamming distance of the target.
    #[arg(long)]
    a: Option<u64>,
    /// Maximum iterations to execute.
    #[arg(long = "L")]
    horizon: Option<u64>,
    /// Scale of the logged population potential (default ln 2).
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Trace CSV destination (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run_simulate(args: &SimulateArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::load(args.config.as_deref())?;
    let proc = args.process.resolve(&mut cfg)?;
    let target_level = args.a.or(cfg.u64("a")?).unwrap_or(0) as usize;
    let horizon = require(args.horizon, cfg.u64("L")?, "L")?;
    let kappa = args.kappa.or(cfg.f64("kappa")?).unwrap_or(2f64.ln());
    let seed = resolve_seed(args.seed, cfg.u64("seed")?)?;
    cfg.finish()?;

    let trace = run_until(
        &proc,
        &RunConfig {
            target_level,
            max_iterations: horizon,
            kappa,
        },
        seed,
    )?;
    let mut out = OutTarget::create(args.out.as_ref())?;
    write_trace_csv(&trace, &mut out)?;
    out.flush()?;
    Ok(())
}

#[derive(Subcommand)]
pub enum ExperimentCommand {
    /// Replicated hitting-time estimation: empirical `Pr[T < L]` with
    /// per-replicate seeds.
    HittingTime(HittingTimeArgs),
}

#[derive(Args)]
pub struct HittingTimeArgs {
    #[command(flatten)]
    process: ProcessArgs,
    #[arg(long)]
    a: Option<u64>,
    /// Horizon: a replicate counts as a hit exactly when T < L.
    #[arg(long = "L")]
    horizon: Option<u64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker pool size (default: machine parallelism).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Per-replicate CSV destination; with --out the summary JSON goes to
    /// stdout, without it the CSV itself goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run_experiment(cmd: &ExperimentCommand) -> CliResult<()> {
    let ExperimentCommand::HittingTime(args) = cmd;
    let mut cfg = ConfigMap::load(args.config.as_deref())?;
    let proc = args.process.resolve(&mut cfg)?;
    let target_level = args.a.or(cfg.u64("a")?).unwrap_or(0) as usize;
    let horizon = require(args.horizon, cfg.u64("L")?, "L")?;
    let kappa = args.kappa.or(cfg.f64("kappa")?).unwrap_or(2f64.ln());
    let reps = require(args.reps, cfg.u64("reps")?, "reps")?;
    let seed = resolve_seed(args.seed, cfg.u64("seed")?)?;
    cfg.finish()?;

    let summary = with_pool(args.workers, || {
        hitting_time_experiment(&proc, target_level, horizon, kappa, reps, seed)
    })??;

    let mut csv_target = OutTarget::create(args.out.as_ref())?;
    write_experiment_csv(&summary, &mut csv_target)?;
    csv_target.flush()?;

    if args.out.is_some() {
        let mut record = Record::new()
            .with("op", "hitting-time")
            .with("reps", summary.reps)
            .with("L", summary.horizon)
            .with("hits", summary.hits)
            .with("censored", summary.censored)
            .with("empirical_pr_hit", summary.empirical_pr_hit)
            .with("master_seed", summary.master_seed);
        if let Some(mean) = summary.mean_uncensored {
            record.push("mean_uncensored", mean);
        }
        emit_record(&mut OutTarget::create(None)?, &record)?;
    }
    Ok(())
}
