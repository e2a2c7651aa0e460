//! `gai`: simulate good arm identification algorithms, sweep confidence
//! levels, and evaluate sample-complexity bounds.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gai_core::analysis::{AnalysisError, BoundReport, Instance};
use gai_core::harness::{
    emit_csv, emit_sweep_csv, figure1_sweep, render_table, resolve_scenario, Execution,
    ExperimentConfig, HarnessError, SweepConfig,
};
use gai_core::{RunConfig, Strategy};

mod grid;

#[derive(Debug, Parser)]
#[command(
    name = "gai",
    version,
    about = "Good arm identification simulator and bound calculator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run repeated simulations of one algorithm on one scenario.
    Simulate(SimulateArgs),
    /// Mean tau_lambda against log(1/delta), with the Gaussian lower bound.
    Sweep(SweepArgs),
    /// Lower bound, HDoC upper bounds and asymptotic coefficients.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Algo {
    Hdoc,
    LucbG,
    AptG,
}

impl From<Algo> for Strategy {
    fn from(a: Algo) -> Self {
        match a {
            Algo::Hdoc => Strategy::Hdoc,
            Algo::LucbG => Strategy::LucbG,
            Algo::AptG => Strategy::AptG,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Debug, Args)]
#[group(required = false, multiple = false)]
struct Confidence {
    /// Acceptance error rate.
    #[arg(long)]
    delta: Option<f64>,
    /// Acceptance error rate given as log(1/delta).
    #[arg(long = "log-inv-delta")]
    log_inv_delta: Option<f64>,
}

impl Confidence {
    fn delta(&self) -> f64 {
        match (self.delta, self.log_inv_delta) {
            (Some(d), _) => d,
            (None, Some(l)) => (-l).exp(),
            (None, None) => 0.05,
        }
    }
}

#[derive(Debug, Args)]
struct Common {
    /// Base seed; replication i uses stream (seed, i).
    #[arg(long, env = "GAI_SEED", default_value_t = 0)]
    seed: u64,
    /// Forced pulls per arm before adaptive sampling.
    #[arg(long = "burn-in", default_value_t = ExperimentConfig::DEFAULT_BURN_IN)]
    burn_in: u64,
    /// Maximum pulls per replication.
    #[arg(long, default_value_t = RunConfig::DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads for replications (output does not depend on it).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output path, or `-` for standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

impl Common {
    fn execution(&self) -> Execution {
        match self.jobs {
            Some(1) => Execution::Sequential,
            jobs => Execution::Parallel { jobs },
        }
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Built-in scenario name or path to a scenario JSON file.
    #[arg(long)]
    scenario: String,
    #[arg(long, value_enum)]
    algo: Algo,
    #[command(flatten)]
    confidence: Confidence,
    #[arg(long, default_value_t = ExperimentConfig::DEFAULT_RUNS)]
    runs: u64,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Columns with a larger censored fraction are shown as missing.
    #[arg(long = "censor-threshold", default_value_t = ExperimentConfig::DEFAULT_CENSOR_REPORT_THRESHOLD)]
    censor_threshold: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value = "medical2")]
    scenario: String,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "hdoc,lucb-g")]
    algos: Vec<Algo>,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    lambdas: Vec<usize>,
    /// Grid of log(1/delta): `start:stop:step`, a comma list, or one value.
    #[arg(long = "log-inv-delta", default_value = "5:50:5", value_parser = grid::parse_grid)]
    log_inv_delta: grid::Grid,
    #[arg(long, default_value_t = ExperimentConfig::DEFAULT_RUNS)]
    runs: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    scenario: String,
    #[command(flatten)]
    confidence: Confidence,
    #[arg(long, default_value_t = 1)]
    lambda: usize,
    /// Slack in the upper bounds; defaults to half the instance's minimum gap.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::UnknownScenario(_)
            | HarnessError::UnknownAlgorithm(_)
            | HarnessError::InvalidConfig(_)
            | HarnessError::Core(_)
            | HarnessError::Json(_)
            | HarnessError::Analysis(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn open_out(path: &str) -> Result<Box<dyn Write>, Failure> {
    if path == "-" {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        let file = File::create(PathBuf::from(path))
            .map_err(|e| Failure::Runtime(format!("{path}: {e}")))?;
        Ok(Box::new(BufWriter::new(file)))
    }
}

fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let scenario = resolve_scenario(&args.scenario)?;
    let strategy = Strategy::from(args.algo);
    let mut config = ExperimentConfig::new(scenario, strategy, args.confidence.delta())
        .runs(args.runs)
        .seed(args.common.seed)
        .burn_in(args.common.burn_in)
        .budget(args.common.budget)
        .execution(args.common.execution());
    config.censor_report_threshold = args.censor_threshold;
    eprintln!(
        "simulating {} with {} ({} runs, delta {})",
        config.scenario.name(),
        strategy,
        config.runs,
        config.delta
    );
    let experiment = gai_core::harness::run_experiment(&config)?;
    let mut out = open_out(&args.common.out)?;
    match args.format {
        Format::Table => out.write_all(render_table(&experiment.row).as_bytes())?,
        Format::Csv => emit_csv(std::slice::from_ref(&experiment.row), &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let mut config = SweepConfig::new(resolve_scenario(&args.scenario)?);
    config.strategies = args.algos.into_iter().map(Strategy::from).collect();
    config.lambdas = args.lambdas;
    config.log_inv_deltas = args.log_inv_delta.0;
    config.runs = args.runs;
    config.base_seed = args.common.seed;
    config.burn_in = args.common.burn_in;
    config.budget = args.common.budget;
    config.execution = args.common.execution();
    if config.lambdas.contains(&0) {
        return Err(Failure::Usage("lambdas must be at least 1".into()));
    }
    eprintln!(
        "sweeping {} over {} grid points ({} runs each)",
        config.scenario.name(),
        config.log_inv_deltas.len(),
        config.runs
    );
    let rows = figure1_sweep(&config)?;
    let mut out = open_out(&args.common.out)?;
    emit_sweep_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(())
}

fn describe<T>(value: &Result<T, AnalysisError>, show: impl Fn(&T) -> String) -> String {
    match value {
        Ok(v) => show(v),
        Err(e) => format!("unbounded ({e})"),
    }
}

fn bounds(args: BoundsArgs) -> Result<(), Failure> {
    let scenario = resolve_scenario(&args.scenario)?;
    let delta = args.confidence.delta();
    let instance =
        Instance::from_scenario(&scenario, delta).map_err(|e| Failure::Usage(e.to_string()))?;
    let good = instance.good_count();
    if args.lambda == 0 || args.lambda > good {
        return Err(Failure::Usage(format!(
            "--lambda {} must lie in 1..={good} for {}",
            args.lambda,
            scenario.name()
        )));
    }
    let report = BoundReport::compute(&instance, args.lambda, args.epsilon);
    if args.epsilon.is_some() {
        if let Err(e @ AnalysisError::Hypothesis(_)) = &report.upper {
            return Err(Failure::Usage(format!("--epsilon rejected: {e}")));
        }
    }

    let mut out = open_out("-")?;
    let lambda = args.lambda;
    writeln!(
        out,
        "scenario {}  K {}  m {}  delta {}  lambda {}  epsilon {}",
        scenario.name(),
        instance.num_arms(),
        good,
        delta,
        lambda,
        report.epsilon
    )?;
    writeln!(out, "sorted means {:?}", instance.means())?;
    writeln!(
        out,
        "lower bound tau_{lambda}: {}",
        describe(&report.lower_tau, |lb| format!(
            "{:.4} (raw {:.4})",
            lb.clamped, lb.raw
        ))
    )?;
    writeln!(
        out,
        "n_i: {}",
        describe(&report.n_terms, |n| n
            .iter()
            .map(|x| format!("{x:.4}"))
            .collect::<Vec<_>>()
            .join(", "))
    )?;
    writeln!(
        out,
        "upper bound tau_{lambda}: {}",
        describe(&report.upper, |u| format!("{:.4}", u.tau_lambda))
    )?;
    writeln!(
        out,
        "upper bound tau_stop: {}",
        describe(&report.upper, |u| format!("{:.4}", u.tau_stop))
    )?;
    writeln!(
        out,
        "asymptotic coefficient tau_{lambda}: {}",
        describe(&report.coeff_tau_lambda, |c| format!("{c:.4}"))
    )?;
    writeln!(
        out,
        "asymptotic coefficient tau_stop: {}",
        describe(&report.coeff_tau_stop, |c| format!("{c:.4}"))
    )?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Sweep(args) => sweep(args),
        Command::Bounds(args) => bounds(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
