//! Command-line workbench for population selection-mutation processes:
//! explicit lower-bound calculators, reproducible simulations and
//! hitting-time experiments, verification suites, and parameter sweeps.

mod bound_cmd;
mod schema_cmd;
mod sim_cmd;
mod support;
mod verify_cmd;

use clap::{Parser, Subcommand};

use bound_cmd::{run_bound, run_sweep, BoundCommand, SweepCommand};
use sim_cmd::{run_experiment, run_simulate, ExperimentCommand, SimulateArgs};
use support::CliResult;
use verify_cmd::{run_verify, VerifyCommand};

#[derive(Parser)]
#[command(
    name = "negadrift",
    version,
    about = "Lower-bound calculators and simulation experiments for non-elitist population processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an explicit lower-bound report (pure, no seed involved).
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Run one process and emit its trace as CSV.
    Simulate(SimulateArgs),
    /// Replicated experiments with derived per-replicate seeds.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Verification suites: analytic checks, oracles, domination tests.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Cartesian parameter grids over the bound calculators.
    #[command(subcommand)]
    Sweep(SweepCommand),
    /// Document the output formats.
    Schema,
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Bound(cmd) => run_bound(cmd),
        Command::Simulate(args) => run_simulate(&args),
        Command::Experiment(cmd) => run_experiment(&cmd),
        Command::Verify(cmd) => run_verify(&cmd),
        Command::Sweep(cmd) => run_sweep(cmd),
        Command::Schema => {
            print!("{}", schema_cmd::SCHEMA_TEXT);
            Ok(())
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                std::process::exit(0);
            }
            let record = negadrift::report::Record::new()
                .with("error", "usage")
                .with("message", err.to_string());
            eprintln!("{}", record.to_json_line());
            std::process::exit(2);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("{}", err.to_record().to_json_line());
        std::process::exit(err.exit_code());
    }
}
