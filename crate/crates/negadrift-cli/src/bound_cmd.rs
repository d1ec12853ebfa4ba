//! `bound` subcommands (single reports) and `sweep` (Cartesian grids of the
//! same calculators, one CSV record per grid point).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Subcommand};

use negadrift::bounds::{
    mixed_bounds, mixed_params_from_gamma, negdrift_lemma_bounds, populations_bounds, sbm_bounds,
    sbm_corollary_bounds, simple_ga_parameters, BoundReport, DriftBoundInput, MixedBoundInput,
    PopulationBoundInput, SbmBoundInput,
};
use negadrift::mutation::MutationOperator;

use crate::support::{csv_field, emit_record, require, CliError, CliResult, ConfigMap, OutTarget};

#[derive(Subcommand)]
pub enum BoundCommand {
    /// Negative multiplicative drift bound from (delta, Delta, M, L).
    Lemma1(Lemma1Args),
    /// Generic population bound from (kappa, a, b, alpha, delta, D).
    Psm(PsmArgs),
    /// Standard-bit-mutation bound from (n, p, alpha, delta, a, b).
    Sbm(SbmArgs),
    /// Delta-free specialization from (n, p, alpha, a).
    Corollary(CorollaryArgs),
    /// Random-mutation-rate bound from a rate mixture and (alpha, delta, B)
    /// or gamma.
    Mixed(MixedArgs),
    /// Constants of the fitness-proportionate GA pipeline.
    SimpleGa(SimpleGaArgs),
}

pub fn run_bound(cmd: BoundCommand) -> CliResult<()> {
    match cmd {
        BoundCommand::Lemma1(args) => args.run(),
        BoundCommand::Psm(args) => args.run(),
        BoundCommand::Sbm(args) => args.run(),
        BoundCommand::Corollary(args) => args.run(),
        BoundCommand::Mixed(args) => args.run(),
        BoundCommand::SimpleGa(args) => args.run(),
    }
}

fn emit_report(report: &BoundReport, op: &str, out: Option<&PathBuf>) -> CliResult<()> {
    let mut target = OutTarget::create(out)?;
    emit_record(&mut target, &report.to_record(op))
}

#[derive(Args)]
pub struct Lemma1Args {
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long = "Delta")]
    big_delta: Option<f64>,
    #[arg(long = "M")]
    threshold: Option<f64>,
    #[arg(long = "L")]
    horizon: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Lemma1Args {
    fn input(&self, cfg: &mut ConfigMap) -> CliResult<DriftBoundInput> {
        Ok(DriftBoundInput {
            drift_rate: require(self.delta, cfg.f64("delta")?, "delta")?,
            disturbance: require(self.big_delta, cfg.f64("Delta")?, "Delta")?,
            threshold: require(self.threshold, cfg.f64("M")?, "M")?,
            horizon: require(self.horizon, cfg.u64("L")?, "L")?,
        })
    }

    fn run(&self) -> CliResult<()> {
        let mut cfg = ConfigMap::load(self.config.as_deref())?;
        let input = self.input(&mut cfg)?;
        cfg.finish()?;
        emit_report(&negdrift_lemma_bounds(&input)?, "lemma1", self.out.as_ref())
    }
}

#[derive(Args)]
pub struct PsmArgs {
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long = "D")]
    big_d: Option<f64>,
    #[arg(long)]
    lambda: Option<u64>,
    #[arg(long = "L")]
    horizon: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl PsmArgs {
    fn run(&self) -> CliResult<()> {
        let mut cfg = ConfigMap::load(self.config.as_deref())?;
        let input = PopulationBoundInput {
            kappa: require(self.kappa, cfg.f64("kappa")?, "kappa")?,
            target_level: require(self.a, cfg.u64("a")?, "a")?,
            safe_level: require(self.b, cfg.u64("b")?, "b")?,
            rate_cap: require(self.alpha, cfg.f64("alpha")?, "alpha")?,
            drift_rate: require(self.delta, cfg.f64("delta")?, "delta")?,
            disturbance_factor: require(self.big_d, cfg.f64("D")?, "D")?,
            lambda: require(self.lambda, cfg.u64("lambda")?, "lambda")?,
            horizon: require(self.horizon, cfg.u64("L")?, "L")?,
        };
        cfg.finish()?;
        emit_report(&populations_bounds(&input)?, "psm", self.out.as_ref())
    }
}

#[derive(Args)]
pub struct SbmArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
    #[arg(long)]
    lambda: Option<u64>,
    #[arg(long = "L")]
    horizon: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SbmArgs {
    fn run(&self) -> CliResult<()> {
        let mut cfg = ConfigMap::load(self.config.as_deref())?;
        let input = SbmBoundInput {
            n: require(self.n, cfg.u64("n")?, "n")?,
            rate: require(self.p, cfg.f64("p")?, "p")?,
            rate_cap: require(self.alpha, cfg.f64("alpha")?, "alpha")?,
            drift_rate: require(self.delta, cfg.f64("delta")?, "delta")?,
            target_level: require(self.a, cfg.u64("a")?, "a")?,
            safe_level: require(self.b, cfg.u64("b")?, "b")?,
            lambda: require(self.lambda, cfg.u64("lambda")?, "lambda")?,
            horizon: require(self.horizon, cfg.u64("L")?, "L")?,
        };
        cfg.finish()?;
        emit_report(&sbm_bounds(&input)?, "sbm", self.out.as_ref())
    }
}

#[derive(Args)]
pub struct CorollaryArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    lambda: Option<u64>,
    #[arg(long = "L")]
    horizon: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CorollaryArgs {
    fn run(&self) -> CliResult<()> {
        let mut cfg = ConfigMap::load(self.config.as_deref())?;
        let n = require(self.n, cfg.u64("n")?, "n")?;
        let p = require(self.p, cfg.f64("p")?, "p")?;
        let alpha = require(self.alpha, cfg.f64("alpha")?, "alpha")?;
        let a = require(self.a, cfg.u64("a")?, "a")?;
        let lambda = require(self.lambda, cfg.u64("lambda")?, "lambda")?;
        let horizon = require(self.horizon, cfg.u64("L")?, "L")?;
        cfg.finish()?;
        let report = sbm_corollary_bounds(n, p, alpha, a, lambda, horizon)?;
        emit_report(&report, "corollary", self.out.as_ref())
    }
}

/// Parse "p:q,p:q" rate-weight pairs.
pub fn parse_rates(text: &str) -> CliResult<Vec<(f64, f64)>> {
    text.split(',')
        .map(|pair| {
            let (p, q) = pair.split_once(':').ok_or_else(|| {
                CliError::schema(format!("rate entry {pair:?} must look like p:q"))
            })?;
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| CliError::schema(format!("bad rate {p:?}")))?;
            let q: f64 = q
                .trim()
                .parse()
                .map_err(|_| CliError::schema(format!("bad weight {q:?}")))?;
            Ok((p, q))
        })
        .collect()
}

/// Build the mutation operator shared by mixed / verify / simulate flags.
pub fn build_operator(
    rates: Option<&str>,
    heavy_tailed_beta: Option<f64>,
    heavy_tailed_cap: Option<u64>,
    fixed_rate: Option<f64>,
    n: u64,
) -> CliResult<MutationOperator> {
    let picked = [
        rates.is_some(),
        heavy_tailed_beta.is_some(),
        fixed_rate.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if picked != 1 {
        return Err(CliError::schema(
            "specify exactly one of --p, --rates, --heavy-tailed-beta".to_string(),
        ));
    }
    if let Some(text) = rates {
        return Ok(MutationOperator::mixed_rate(&parse_rates(text)?)?);
    }
    if let Some(beta) = heavy_tailed_beta {
        return Ok(match heavy_tailed_cap {
            Some(cap) => MutationOperator::heavy_tailed(beta, cap as usize)?,
            None => MutationOperator::heavy_tailed_for_length(beta, n as usize)?,
        });
    }
    Ok(MutationOperator::fixed_rate(
        fixed_rate.expect("picked == 1"),
    )?)
}

#[derive(Args)]
pub struct MixedArgs {
    #[arg(long)]
    n: Option<u64>,
    /// Rate mixture as comma-separated p:q pairs.
    #[arg(long)]
    rates: Option<String>,
    /// Power-law exponent of the heavy-tailed operator.
    #[arg(long = "heavy-tailed-beta")]
    heavy_tailed_beta: Option<f64>,
    /// Cap of the heavy-tailed rate index (default floor(n/2)).
    #[arg(long = "heavy-tailed-cap")]
    heavy_tailed_cap: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long = "B")]
    base: Option<f64>,
    /// Derive (delta, B) from the simpler sufficient condition instead of
    /// passing them explicitly.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
    #[arg(long)]
    lambda: Option<u64>,
    #[arg(long = "L")]
    horizon: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl MixedArgs {
    fn run(&self) -> CliResult<()> {
        let mut cfg = ConfigMap::load(self.config.as_deref())?;
        let n = require(self.n, cfg.u64("n")?, "n")?;
        let rates_text = self.rates.clone().or(cfg.string("rates")?);
        let ht_beta = self.heavy_tailed_beta.or(cfg.f64("heavy_tailed_beta")?);
        let ht_cap = self.heavy_tailed_cap.or(cfg.u64("heavy_tailed_cap")?);
        let op = build_operator(rates_text.as_deref(), ht_beta, ht_cap, None, n)?;
        let alpha = require(self.alpha, cfg.f64("alpha")?, "alpha")?;
        let gamma = self.gamma.or(cfg.f64("gamma")?);
        let delta_flag = self.delta.or(cfg.f64("delta")?);
        let base_flag = self.base.or(cfg.f64("B")?);
        let (drift_rate, base) = match (gamma, delta_flag, base_flag) {
            (Some(g), None, None) => mixed_params_from_gamma(alpha, g)?,
            (None, Some(d), Some(b)) => (d, b),
            _ => {
                return Err(CliError::schema(
                    "pass either --gamma or both --delta and --B".to_string(),
                ))
            }
        };
        let input = MixedBoundInput {
            n,
            op,
            rate_cap: alpha,
            drift_rate,
            base,
            target_level: require(self.a, cfg.u64("a")?, "a")?,
            safe_level: require(self.b, cfg.u64("b")?, "b")?,
            lambda: require(self.lambda, cfg.u64("lambda")?, "lambda")?,
            horizon: require(self.horizon, cfg.u64("L")?, "L")?,
        };
        cfg.finish()?;
        let report = mixed_bounds(&input)?;
        let mut record = report.to_record("mixed");
        if let Some(g) = gamma {
            record.push("gamma", g);
        }
        let mut target = OutTarget::create(self.out.as_ref())?;
        emit_record(&mut target, &record)
    }
}

#[derive(Args)]
pub struct SimpleGaArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long = "a-frac")]
    a_frac: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SimpleGaArgs {
    fn run(&self) -> CliResult<()> {
        let mut cfg = ConfigMap::load(self.config.as_deref())?;
        let n = require(self.n, cfg.u64("n")?, "n")?;
        let eps = require(self.eps, cfg.f64("eps")?, "eps")?;
        let a_frac = require(self.a_frac, cfg.f64("a_frac")?, "a-frac")?;
        cfg.finish()?;
        let params = simple_ga_parameters(n, eps, a_frac)?;
        let mut target = OutTarget::create(self.out.as_ref())?;
        emit_record(&mut target, &params.to_record())
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[derive(Subcommand)]
pub enum SweepCommand {
    /// Grid over the drift-lemma calculator.
    Lemma1(SweepLemma1Args),
    /// Grid over the generic population bound.
    Psm(SweepPsmArgs),
    /// Grid over the standard-bit-mutation bound.
    Sbm(SweepSbmArgs),
    /// Grid over the delta-free specialization.
    Corollary(SweepCorollaryArgs),
    /// Grid over the simple-GA constant pipeline.
    SimpleGa(SweepSimpleGaArgs),
}

pub fn run_sweep(cmd: SweepCommand) -> CliResult<()> {
    match cmd {
        SweepCommand::Lemma1(args) => args.run(),
        SweepCommand::Psm(args) => args.run(),
        SweepCommand::Sbm(args) => args.run(),
        SweepCommand::Corollary(args) => args.run(),
        SweepCommand::SimpleGa(args) => args.run(),
    }
}

/// Iterate every index combination of the given dimension lengths.
fn cartesian(lengths: &[usize]) -> Vec<Vec<usize>> {
    let mut combos = vec![vec![]];
    for &len in lengths {
        let mut next = Vec::with_capacity(combos.len() * len);
        for combo in &combos {
            for i in 0..len {
                let mut c = combo.clone();
                c.push(i);
                next.push(c);
            }
        }
        combos = next;
    }
    combos
}

fn csv_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

const REPORT_COLUMNS: [&str; 6] = [
    "ln_e_t_term",
    "e_t_lower",
    "lambda_e_t_lower",
    "ln_pr_raw",
    "ln_pr_clamped",
    "pr_upper",
];

fn report_columns(result: &Result<BoundReport, negadrift::Error>) -> Vec<String> {
    let mut fields = Vec::with_capacity(2 + REPORT_COLUMNS.len());
    match result {
        Ok(report) => {
            fields.push("ok".to_string());
            fields.push(String::new());
            fields.push(csv_float(report.ln_e_t_term));
            fields.push(report.e_t_lower.map(csv_float).unwrap_or_default());
            fields.push(report.lambda_e_t_lower().map(csv_float).unwrap_or_default());
            fields.push(csv_float(report.ln_pr_raw));
            fields.push(csv_float(report.ln_pr_clamped));
            fields.push(csv_float(report.pr_upper));
        }
        Err(e) => {
            fields.push("rejected".to_string());
            fields.push(csv_field(&e.to_string()));
            for _ in REPORT_COLUMNS {
                fields.push(String::new());
            }
        }
    }
    fields
}

fn write_sweep_csv(
    out: Option<&PathBuf>,
    input_names: &[&str],
    rows: Vec<(Vec<String>, Result<BoundReport, negadrift::Error>)>,
) -> CliResult<()> {
    let mut target = OutTarget::create(out)?;
    let mut header: Vec<String> = input_names.iter().map(|s| s.to_string()).collect();
    header.push("status".to_string());
    header.push("reason".to_string());
    header.extend(REPORT_COLUMNS.iter().map(|s| s.to_string()));
    writeln!(target, "{}", header.join(","))?;
    for (inputs, result) in rows {
        let mut fields = inputs;
        fields.extend(report_columns(&result));
        writeln!(target, "{}", fields.join(","))?;
    }
    Ok(())
}

#[derive(Args)]
pub struct SweepLemma1Args {
    #[arg(long, value_delimiter = ',', required = true)]
    delta: Vec<f64>,
    #[arg(long = "Delta", value_delimiter = ',', required = true)]
    big_delta: Vec<f64>,
    #[arg(long = "M", value_delimiter = ',', required = true)]
    threshold: Vec<f64>,
    #[arg(long = "L", value_delimiter = ',', required = true)]
    horizon: Vec<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SweepLemma1Args {
    fn run(&self) -> CliResult<()> {
        let mut rows = Vec::new();
        for combo in cartesian(&[
            self.delta.len(),
            self.big_delta.len(),
            self.threshold.len(),
            self.horizon.len(),
        ]) {
            let input = DriftBoundInput {
                drift_rate: self.delta[combo[0]],
                disturbance: self.big_delta[combo[1]],
                threshold: self.threshold[combo[2]],
                horizon: self.horizon[combo[3]],
            };
            rows.push((
                vec![
                    csv_float(input.drift_rate),
                    csv_float(input.disturbance),
                    csv_float(input.threshold),
                    input.horizon.to_string(),
                ],
                negdrift_lemma_bounds(&input),
            ));
        }
        write_sweep_csv(self.out.as_ref(), &["delta", "Delta", "M", "L"], rows)
    }
}

#[derive(Args)]
pub struct SweepPsmArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    kappa: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    b: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    delta: Vec<f64>,
    #[arg(long = "D", value_delimiter = ',', required = true)]
    big_d: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<u64>,
    #[arg(long = "L", value_delimiter = ',', required = true)]
    horizon: Vec<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SweepPsmArgs {
    fn run(&self) -> CliResult<()> {
        let mut rows = Vec::new();
        for c in cartesian(&[
            self.kappa.len(),
            self.a.len(),
            self.b.len(),
            self.alpha.len(),
            self.delta.len(),
            self.big_d.len(),
            self.lambda.len(),
            self.horizon.len(),
        ]) {
            let input = PopulationBoundInput {
                kappa: self.kappa[c[0]],
                target_level: self.a[c[1]],
                safe_level: self.b[c[2]],
                rate_cap: self.alpha[c[3]],
                drift_rate: self.delta[c[4]],
                disturbance_factor: self.big_d[c[5]],
                lambda: self.lambda[c[6]],
                horizon: self.horizon[c[7]],
            };
            rows.push((
                vec![
                    csv_float(input.kappa),
                    input.target_level.to_string(),
                    input.safe_level.to_string(),
                    csv_float(input.rate_cap),
                    csv_float(input.drift_rate),
                    csv_float(input.disturbance_factor),
                    input.lambda.to_string(),
                    input.horizon.to_string(),
                ],
                populations_bounds(&input),
            ));
        }
        write_sweep_csv(
            self.out.as_ref(),
            &["kappa", "a", "b", "alpha", "delta", "D", "lambda", "L"],
            rows,
        )
    }
}

#[derive(Args)]
pub struct SweepSbmArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    delta: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    b: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<u64>,
    #[arg(long = "L", value_delimiter = ',', required = true)]
    horizon: Vec<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SweepSbmArgs {
    fn run(&self) -> CliResult<()> {
        let mut rows = Vec::new();
        for c in cartesian(&[
            self.n.len(),
            self.p.len(),
            self.alpha.len(),
            self.delta.len(),
            self.a.len(),
            self.b.len(),
            self.lambda.len(),
            self.horizon.len(),
        ]) {
            let input = SbmBoundInput {
                n: self.n[c[0]],
                rate: self.p[c[1]],
                rate_cap: self.alpha[c[2]],
                drift_rate: self.delta[c[3]],
                target_level: self.a[c[4]],
                safe_level: self.b[c[5]],
                lambda: self.lambda[c[6]],
                horizon: self.horizon[c[7]],
            };
            rows.push((
                vec![
                    input.n.to_string(),
                    csv_float(input.rate),
                    csv_float(input.rate_cap),
                    csv_float(input.drift_rate),
                    input.target_level.to_string(),
                    input.safe_level.to_string(),
                    input.lambda.to_string(),
                    input.horizon.to_string(),
                ],
                sbm_bounds(&input),
            ));
        }
        write_sweep_csv(
            self.out.as_ref(),
            &["n", "p", "alpha", "delta", "a", "b", "lambda", "L"],
            rows,
        )
    }
}

#[derive(Args)]
pub struct SweepCorollaryArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<u64>,
    #[arg(long = "L", value_delimiter = ',', required = true)]
    horizon: Vec<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SweepCorollaryArgs {
    fn run(&self) -> CliResult<()> {
        let mut rows = Vec::new();
        for c in cartesian(&[
            self.n.len(),
            self.p.len(),
            self.alpha.len(),
            self.a.len(),
            self.lambda.len(),
            self.horizon.len(),
        ]) {
            let (n, p, alpha, a, lambda, horizon) = (
                self.n[c[0]],
                self.p[c[1]],
                self.alpha[c[2]],
                self.a[c[3]],
                self.lambda[c[4]],
                self.horizon[c[5]],
            );
            rows.push((
                vec![
                    n.to_string(),
                    csv_float(p),
                    csv_float(alpha),
                    a.to_string(),
                    lambda.to_string(),
                    horizon.to_string(),
                ],
                sbm_corollary_bounds(n, p, alpha, a, lambda, horizon),
            ));
        }
        write_sweep_csv(
            self.out.as_ref(),
            &["n", "p", "alpha", "a", "lambda", "L"],
            rows,
        )
    }
}

#[derive(Args)]
pub struct SweepSimpleGaArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    #[arg(long = "a-frac", value_delimiter = ',', required = true)]
    a_frac: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SweepSimpleGaArgs {
    fn run(&self) -> CliResult<()> {
        let mut target = OutTarget::create(self.out.as_ref())?;
        writeln!(target, "n,eps,a_frac,status,reason,alpha,gamma,b,s")?;
        for c in cartesian(&[self.n.len(), self.eps.len(), self.a_frac.len()]) {
            let (n, eps, a_frac) = (self.n[c[0]], self.eps[c[1]], self.a_frac[c[2]]);
            let prefix = format!("{n},{},{}", csv_float(eps), csv_float(a_frac));
            match simple_ga_parameters(n, eps, a_frac) {
                Ok(p) => writeln!(
                    target,
                    "{prefix},ok,,{},{},{},{}",
                    csv_float(p.rate_cap),
                    csv_float(p.gamma),
                    p.safe_level,
                    csv_float(p.fitness_floor)
                )?,
                Err(e) => writeln!(
                    target,
                    "{prefix},rejected,{},,,,",
                    csv_field(&e.to_string())
                )?,
            }
        }
        Ok(())
    }
}
