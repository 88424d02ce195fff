//! Command-line interface to the review-game solvers and simulator.
//!
//! Exit codes: 0 on success, 1 on invalid or infeasible input, 2 on an
//! internal numerical or output failure. Human tables go to stdout,
//! machine output (CSV, or JSON with --json) to --out or stdout, and
//! diagnostics to stderr.

mod commands;
mod output;
mod scenario;

use clap::{Args, Parser, Subcommand, ValueEnum};
use review_game::sweep::{SweepParameter, SweepSolver};
use scenario::Overrides;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "review-game",
    version,
    about = "Equilibrium solvers and a seeded agent simulator for peer-review threshold policies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario config file (flat TOML; flags override file values)
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
    /// Emit a single JSON document instead of CSV
    #[arg(long)]
    json: bool,
    /// Write machine output to this path (human table stays on stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Authors use the brute-force grid oracle instead of closed forms
    #[arg(long)]
    grid_oracle: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParamArg {
    Alpha,
    ThetaSkilled,
    ThetaUnskilled,
    Sigma,
    N,
    Kappa,
    ZBar,
}

impl From<ParamArg> for SweepParameter {
    fn from(p: ParamArg) -> Self {
        match p {
            ParamArg::Alpha => SweepParameter::Alpha,
            ParamArg::ThetaSkilled => SweepParameter::ThetaSkilled,
            ParamArg::ThetaUnskilled => SweepParameter::ThetaUnskilled,
            ParamArg::Sigma => SweepParameter::Sigma,
            ParamArg::N => SweepParameter::N,
            ParamArg::Kappa => SweepParameter::Kappa,
            ParamArg::ZBar => SweepParameter::ZBar,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    FirstBest,
    OneShot,
    Dynamic,
    DynamicFixed,
}

impl From<SolverArg> for SweepSolver {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::FirstBest => SweepSolver::FirstBest,
            SolverArg::OneShot => SweepSolver::OneShotEquilibrium,
            SolverArg::Dynamic => SweepSolver::DynamicEquilibrium,
            SolverArg::DynamicFixed => SweepSolver::DynamicFixedPolicy,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Parameter to sweep
    #[arg(long)]
    param: ParamArg,
    /// Lower end of the sweep range
    #[arg(long)]
    lo: f64,
    /// Upper end of the sweep range
    #[arg(long)]
    hi: f64,
    /// Number of grid points
    #[arg(long, default_value_t = 21)]
    steps: usize,
    /// Problem solved at each grid point
    #[arg(long, value_enum, default_value_t = SolverArg::OneShot)]
    solver: SolverArg,
}

#[derive(Args)]
struct FocArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of scan points over the threshold bracket
    #[arg(long, default_value_t = 1000)]
    steps: usize,
}

#[derive(Subcommand)]
enum Command {
    /// First-best efforts and the implementing acceptance probability
    FirstBest(CommonArgs),
    /// One-shot equilibrium threshold and aggregates
    OneShot(CommonArgs),
    /// Dynamic-review aggregates at a given or capacity-solved threshold
    Dynamic(CommonArgs),
    /// Optimal (threshold, challenge-cost) policy under the capacity constraint
    Optimize(CommonArgs),
    /// Monte Carlo estimates side by side with the analytic values
    Simulate(SimulateArgs),
    /// Comparative-statics table over one parameter
    Sweep(SweepArgs),
    /// First-order-condition residual scan and the interior optimum
    Foc(FocArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };

    let (common, report) = match &cli.command {
        Command::FirstBest(c) => (c, load_and(c, commands::first_best)),
        Command::OneShot(c) => (c, load_and(c, commands::one_shot)),
        Command::Dynamic(c) => (c, load_and(c, commands::dynamic)),
        Command::Optimize(c) => (c, load_and(c, commands::optimize)),
        Command::Simulate(a) => (
            &a.common,
            load_and(&a.common, |s| commands::simulate(s, a.grid_oracle)),
        ),
        Command::Sweep(a) => (
            &a.common,
            load_and(&a.common, |s| {
                commands::run_sweep(s, a.param.into(), a.lo, a.hi, a.steps, a.solver.into())
            }),
        ),
        Command::Foc(a) => (&a.common, load_and(&a.common, |s| commands::foc(s, a.steps))),
    };

    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    if let Err(e) = report.emit(common.json, common.out.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}

fn load_and(
    common: &CommonArgs,
    run: impl FnOnce(&scenario::Scenario) -> anyhow::Result<output::Report>,
) -> anyhow::Result<output::Report> {
    let scenario = scenario::load(common.config.as_deref(), &common.overrides)?;
    run(&scenario)
}

/// 1 for invalid or infeasible input, 2 for internal numerical failure.
fn exit_code_for(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(core) = cause.downcast_ref::<review_game::Error>() {
            return if core.is_input_error() { 1 } else { 2 };
        }
    }
    1
}
