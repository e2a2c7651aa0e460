//! Scenario registry, replication engine, aggregation and output formats.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{gaussian_lower_bound_curve, AnalysisError, Instance};
use crate::arms::RngStream;
use crate::bandit::{run, CoreError, RunConfig, RunRecord, Scenario};
use crate::strategies::{Strategy, UnknownStrategy};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown scenario {0:?} (not a built-in name or a readable file)")]
    UnknownScenario(String),
    #[error(transparent)]
    UnknownAlgorithm(#[from] UnknownStrategy),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("scenario file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub const BUILTIN_NAMES: [&str; 5] = [
    "threshold1",
    "threshold2",
    "threshold3",
    "medical1",
    "medical2",
];

/// The five experiment instances, arms in their published order.
pub fn builtin_scenarios() -> BTreeMap<&'static str, Scenario> {
    let mut threshold3 = vec![0.55; 3];
    threshold3.extend([0.45; 7]);
    let build = |name: &'static str| -> Scenario {
        match name {
            "threshold1" => Scenario::bernoulli(
                name,
                &[0.1, 0.1, 0.1, 0.35, 0.45, 0.55, 0.65, 0.9, 0.9, 0.9],
                0.5,
            ),
            "threshold2" => Scenario::bernoulli(name, &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6], 0.35),
            "threshold3" => Scenario::bernoulli(name, &threshold3, 0.5),
            "medical1" => Scenario::bernoulli(name, &[0.36, 0.34, 0.469, 0.465, 0.537], 0.5),
            "medical2" => Scenario::gaussian(name, &[0.5, 0.7, 1.6, 1.8, 1.2, 1.0, 0.6], 1.44, 1.2),
            _ => unreachable!(),
        }
        .expect("built-in scenario is valid")
    };
    BUILTIN_NAMES.iter().map(|&n| (n, build(n))).collect()
}

pub fn builtin_scenario(name: &str) -> Option<Scenario> {
    builtin_scenarios().remove(name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindTag {
    Bernoulli,
    Gaussian,
}

/// On-disk scenario description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    kind: KindTag,
    pub means: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance: Option<f64>,
    pub threshold: f64,
}

impl ScenarioFile {
    pub fn into_scenario(self) -> Result<Scenario, HarnessError> {
        match (self.kind, self.variance) {
            (KindTag::Bernoulli, None) => {
                Ok(Scenario::bernoulli(self.name, &self.means, self.threshold)?)
            }
            (KindTag::Bernoulli, Some(_)) => Err(HarnessError::InvalidConfig(
                "bernoulli scenarios take no variance".into(),
            )),
            (KindTag::Gaussian, Some(v)) => Ok(Scenario::gaussian(
                self.name,
                &self.means,
                v,
                self.threshold,
            )?),
            (KindTag::Gaussian, None) => Err(HarnessError::InvalidConfig(
                "gaussian scenarios need a variance".into(),
            )),
        }
    }

    pub fn from_scenario(scenario: &Scenario) -> Self {
        let variance = scenario.kind().variance();
        Self {
            name: scenario.name().to_string(),
            kind: if variance.is_some() {
                KindTag::Gaussian
            } else {
                KindTag::Bernoulli
            },
            means: scenario.means(),
            variance,
            threshold: scenario.threshold(),
        }
    }
}

pub fn parse_scenario_json(text: &str) -> Result<Scenario, HarnessError> {
    serde_json::from_str::<ScenarioFile>(text)?.into_scenario()
}

/// Resolves an existing file path first, then a built-in name.
pub fn resolve_scenario(name_or_path: &str) -> Result<Scenario, HarnessError> {
    let path = Path::new(name_or_path);
    if path.is_file() {
        return parse_scenario_json(&std::fs::read_to_string(path)?);
    }
    builtin_scenario(name_or_path).ok_or_else(|| HarnessError::UnknownScenario(name_or_path.into()))
}

/// How replications are scheduled. Results never depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon fan-out; `jobs` caps the worker count. Falls back to sequential
    /// when the crate is built without the `parallel` feature.
    Parallel {
        jobs: Option<usize>,
    },
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel { jobs: None }
        } else {
            Execution::Sequential
        }
    }
}

fn replicate_one(
    scenario: &Scenario,
    strategy: Strategy,
    config: &RunConfig,
    base_seed: u64,
    run_index: u64,
) -> Result<RunRecord, CoreError> {
    run(
        scenario,
        strategy,
        config,
        &mut RngStream::new(base_seed, run_index),
    )
}

pub fn replicate_sequential(
    scenario: &Scenario,
    strategy: Strategy,
    config: &RunConfig,
    base_seed: u64,
    runs: u64,
) -> Result<Vec<RunRecord>, CoreError> {
    (0..runs)
        .map(|i| replicate_one(scenario, strategy, config, base_seed, i))
        .collect()
}

#[cfg(feature = "parallel")]
pub fn replicate_parallel(
    scenario: &Scenario,
    strategy: Strategy,
    config: &RunConfig,
    base_seed: u64,
    runs: u64,
) -> Result<Vec<RunRecord>, CoreError> {
    use rayon::prelude::*;
    // Indexed collect keeps records in run-index order.
    (0..runs)
        .into_par_iter()
        .map(|i| replicate_one(scenario, strategy, config, base_seed, i))
        .collect()
}

/// Runs `runs` replications with streams `(base_seed, 0..runs)`, returned in
/// run-index order.
pub fn replicate(
    scenario: &Scenario,
    strategy: Strategy,
    config: &RunConfig,
    base_seed: u64,
    runs: u64,
    execution: Execution,
) -> Result<Vec<RunRecord>, HarnessError> {
    config.validate(scenario.num_arms())?;
    match execution {
        Execution::Sequential => Ok(replicate_sequential(
            scenario, strategy, config, base_seed, runs,
        )?),
        #[cfg(feature = "parallel")]
        Execution::Parallel { jobs: None } => Ok(replicate_parallel(
            scenario, strategy, config, base_seed, runs,
        )?),
        #[cfg(feature = "parallel")]
        Execution::Parallel { jobs: Some(n) } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
            Ok(pool.install(|| replicate_parallel(scenario, strategy, config, base_seed, runs))?)
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel { .. } => Ok(replicate_sequential(
            scenario, strategy, config, base_seed, runs,
        )?),
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub strategy: Strategy,
    pub delta: f64,
    pub runs: u64,
    pub base_seed: u64,
    pub burn_in: u64,
    pub budget: u64,
    /// A column is reported as missing when more than this fraction of runs is censored.
    pub censor_report_threshold: f64,
    pub execution: Execution,
}

impl ExperimentConfig {
    pub const DEFAULT_RUNS: u64 = 1000;
    pub const DEFAULT_BURN_IN: u64 = 5;
    pub const DEFAULT_CENSOR_REPORT_THRESHOLD: f64 = 0.5;

    pub fn new(scenario: Scenario, strategy: Strategy, delta: f64) -> Self {
        Self {
            scenario,
            strategy,
            delta,
            runs: Self::DEFAULT_RUNS,
            base_seed: 0,
            burn_in: Self::DEFAULT_BURN_IN,
            budget: RunConfig::DEFAULT_BUDGET,
            censor_report_threshold: Self::DEFAULT_CENSOR_REPORT_THRESHOLD,
            execution: Execution::default(),
        }
    }

    pub fn from_names(scenario: &str, algorithm: &str, delta: f64) -> Result<Self, HarnessError> {
        let strategy: Strategy = algorithm.parse()?;
        Ok(Self::new(resolve_scenario(scenario)?, strategy, delta))
    }

    pub fn runs(mut self, runs: u64) -> Self {
        self.runs = runs;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.base_seed = seed;
        self
    }

    pub fn burn_in(mut self, burn_in: u64) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    fn run_config(&self) -> RunConfig {
        RunConfig::new(self.delta)
            .burn_in(self.burn_in)
            .budget(self.budget)
    }

    fn validate(&self) -> Result<(), HarnessError> {
        if self.runs == 0 {
            return Err(HarnessError::InvalidConfig(
                "runs must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.censor_report_threshold) {
            return Err(HarnessError::InvalidConfig(
                "censor report threshold must lie in [0, 1]".into(),
            ));
        }
        self.run_config().validate(self.scenario.num_arms())?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    /// 1-based index of the output.
    Tau(usize),
    Stop,
}

impl Quantity {
    fn value(&self, record: &RunRecord) -> Option<u64> {
        match *self {
            Quantity::Tau(lambda) => record.tau_lambda(lambda),
            Quantity::Stop => record.stop,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Tau(l) => write!(f, "tau_{l}"),
            Quantity::Stop => f.write_str("tau_stop"),
        }
    }
}

/// Mean and population standard deviation over the uncensored runs.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantityStats {
    pub quantity: Quantity,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub censored: u64,
    /// False when too many runs were censored to report the column.
    pub reported: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub scenario: String,
    pub algorithm: Strategy,
    pub delta: f64,
    pub runs: u64,
    pub seed: u64,
    /// `tau_1 .. tau_m` followed by `tau_stop`.
    pub columns: Vec<QuantityStats>,
    /// Fraction of runs that output a bad arm or stopped missing a good one.
    pub error_rate: f64,
}

impl AggregateRow {
    pub fn column(&self, quantity: Quantity) -> Option<&QuantityStats> {
        self.columns.iter().find(|c| c.quantity == quantity)
    }
}

pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Some((mean, var.sqrt()))
}

/// Summarizes records against the scenario's true good-arm count.
pub fn aggregate(
    scenario: &Scenario,
    algorithm: Strategy,
    delta: f64,
    seed: u64,
    records: &[RunRecord],
    censor_report_threshold: f64,
) -> AggregateRow {
    let runs = records.len() as u64;
    let quantities = (1..=scenario.good_count())
        .map(Quantity::Tau)
        .chain(std::iter::once(Quantity::Stop));
    let columns = quantities
        .map(|quantity| {
            let values: Vec<f64> = records
                .iter()
                .filter_map(|r| quantity.value(r))
                .map(|v| v as f64)
                .collect();
            let censored = runs - values.len() as u64;
            let summary = mean_std(&values);
            QuantityStats {
                quantity,
                mean: summary.map(|s| s.0),
                std: summary.map(|s| s.1),
                censored,
                reported: summary.is_some()
                    && (censored as f64) <= censor_report_threshold * runs as f64,
            }
        })
        .collect();
    let errors = records.iter().filter(|r| r.is_error()).count();
    AggregateRow {
        scenario: scenario.name().to_string(),
        algorithm,
        delta,
        runs,
        seed,
        columns,
        error_rate: if runs == 0 {
            0.0
        } else {
            errors as f64 / runs as f64
        },
    }
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub row: AggregateRow,
    pub records: Vec<RunRecord>,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Experiment, HarnessError> {
    config.validate()?;
    let records = replicate(
        &config.scenario,
        config.strategy,
        &config.run_config(),
        config.base_seed,
        config.runs,
        config.execution,
    )?;
    let row = aggregate(
        &config.scenario,
        config.strategy,
        config.delta,
        config.base_seed,
        &records,
        config.censor_report_threshold,
    );
    Ok(Experiment { row, records })
}

pub const CSV_HEADER: [&str; 9] = [
    "scenario",
    "algorithm",
    "delta",
    "quantity",
    "mean",
    "std",
    "censored",
    "runs",
    "seed",
];

fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One CSV line per (row, quantity); unreported columns leave mean and std empty.
pub fn emit_csv<W: io::Write>(rows: &[AggregateRow], out: W) -> Result<(), HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::InvalidConfig("no rows to write".into()));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        for col in &row.columns {
            let (mean, std) = if col.reported {
                (col.mean, col.std)
            } else {
                (None, None)
            };
            w.write_record([
                row.scenario.clone(),
                row.algorithm.to_string(),
                row.delta.to_string(),
                col.quantity.to_string(),
                opt_cell(mean),
                opt_cell(std),
                col.censored.to_string(),
                row.runs.to_string(),
                row.seed.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// A parsed line of [`emit_csv`] output.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CsvLine {
    pub scenario: String,
    pub algorithm: String,
    pub delta: f64,
    pub quantity: String,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub censored: u64,
    pub runs: u64,
    pub seed: u64,
}

pub fn parse_csv<R: io::Read>(input: R) -> Result<Vec<CsvLine>, HarnessError> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<Vec<CsvLine>, _>>()?)
}

pub const MISSING_CELL: &str = "–";

/// Human-readable table in the `mean ± std` layout.
pub fn render_table(row: &AggregateRow) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "scenario {}  algorithm {}  delta {}  runs {}  seed {}",
        row.scenario, row.algorithm, row.delta, row.runs, row.seed
    );
    let _ = writeln!(
        out,
        "{:<10} {:>24} {:>9}",
        "quantity", "mean ± std", "censored"
    );
    for col in &row.columns {
        let cell = match (col.reported, col.mean, col.std) {
            (true, Some(m), Some(s)) => format!("{m:.1} ± {s:.1}"),
            _ => MISSING_CELL.to_string(),
        };
        let _ = writeln!(
            out,
            "{:<10} {:>24} {:>9}",
            col.quantity.to_string(),
            cell,
            col.censored
        );
    }
    let _ = writeln!(out, "error rate {:.4}", row.error_rate);
    out
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub scenario: Scenario,
    pub strategies: Vec<Strategy>,
    pub lambdas: Vec<usize>,
    pub log_inv_deltas: Vec<f64>,
    pub runs: u64,
    pub base_seed: u64,
    pub burn_in: u64,
    pub budget: u64,
    pub execution: Execution,
}

impl SweepConfig {
    pub fn default_log_inv_deltas() -> Vec<f64> {
        (1..=10).map(|i| 5.0 * i as f64).collect()
    }

    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            strategies: vec![Strategy::Hdoc, Strategy::LucbG],
            lambdas: vec![1, 2],
            log_inv_deltas: Self::default_log_inv_deltas(),
            runs: ExperimentConfig::DEFAULT_RUNS,
            base_seed: 0,
            burn_in: ExperimentConfig::DEFAULT_BURN_IN,
            budget: RunConfig::DEFAULT_BUDGET,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub log_inv_delta: f64,
    /// Strategy name or `lower-bound`.
    pub algorithm: String,
    pub lambda: usize,
    pub mean: Option<f64>,
    pub std: Option<f64>,
}

pub const LOWER_BOUND_LABEL: &str = "lower-bound";

/// Mean `tau_lambda` per strategy at `delta = exp(-l)` for each grid point,
/// next to the Gaussian asymptotic lower bound. Runs halt once the largest
/// requested lambda has been output.
pub fn figure1_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, HarnessError> {
    if config.runs == 0 {
        return Err(HarnessError::InvalidConfig(
            "runs must be at least 1".into(),
        ));
    }
    let max_lambda = *config
        .lambdas
        .iter()
        .max()
        .ok_or_else(|| HarnessError::InvalidConfig("no lambdas given".into()))?;
    let mut rows = Vec::new();
    for &ell in &config.log_inv_deltas {
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(HarnessError::InvalidConfig(format!(
                "log(1/delta) must be positive, got {ell}"
            )));
        }
        let delta = (-ell).exp();
        let instance = Instance::from_scenario(&config.scenario, delta)?;
        for &strategy in &config.strategies {
            let run_config = RunConfig::new(delta)
                .burn_in(config.burn_in)
                .budget(config.budget)
                .max_outputs(Some(max_lambda));
            let records = replicate(
                &config.scenario,
                strategy,
                &run_config,
                config.base_seed,
                config.runs,
                config.execution,
            )?;
            for &lambda in &config.lambdas {
                let values: Vec<f64> = records
                    .iter()
                    .filter_map(|r| r.tau.get(lambda - 1).map(|&t| t as f64))
                    .collect();
                let summary = mean_std(&values);
                rows.push(SweepRow {
                    log_inv_delta: ell,
                    algorithm: strategy.name().to_string(),
                    lambda,
                    mean: summary.map(|s| s.0),
                    std: summary.map(|s| s.1),
                });
            }
        }
        for &lambda in &config.lambdas {
            rows.push(SweepRow {
                log_inv_delta: ell,
                algorithm: LOWER_BOUND_LABEL.to_string(),
                lambda,
                mean: Some(gaussian_lower_bound_curve(&instance, lambda, ell)?),
                std: Some(0.0),
            });
        }
    }
    Ok(rows)
}

pub fn emit_sweep_csv<W: io::Write>(rows: &[SweepRow], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["log_inv_delta", "algorithm", "lambda", "mean", "std"])?;
    for row in rows {
        w.write_record([
            row.log_inv_delta.to_string(),
            row.algorithm.clone(),
            row.lambda.to_string(),
            opt_cell(row.mean),
            opt_cell(row.std),
        ])?;
    }
    w.flush()?;
    Ok(())
}
