//! Per-arm statistics, confidence scores, the identification criterion and
//! the sequential run loop.
//!
//! Every algorithm shares the same criterion: after an arm is pulled it is
//! output as good once its lower confidence bound reaches the threshold, and
//! discarded once its upper confidence bound falls below it. The bounds use
//! the union-bound radius `sqrt(c * ln(4 K n^2 / delta) / n)` with `c = 1/2`
//! for Bernoulli rewards and `c = 2 sigma^2` for Gaussian rewards. Strategies
//! only decide which active arm is pulled next.

use thiserror::Error;

use crate::arms::{ModelError, RewardKind, RewardModel, RngStream};
use crate::strategies::Strategy;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("empirical mean is undefined for an arm with zero pulls")]
    UndefinedMean,
    #[error("arm {0} is not in the active set")]
    ArmNotActive(usize),
    #[error("arm index {index} out of range for {arms} arms")]
    ArmOutOfRange { index: usize, arms: usize },
    #[error("no active arms left to select from")]
    EmptyActive,
    #[error("run already stopped")]
    Stopped,
    #[error("delta must lie in (0, 1), got {0}")]
    InvalidDelta(f64),
    #[error("scenario needs at least one arm")]
    NoArms,
    #[error("threshold {0} must lie strictly inside (0, 1) for bernoulli arms")]
    InvalidThreshold(f64),
    #[error("all arms of a scenario must share one reward kind")]
    MixedKinds,
    #[error("burn-in must be at least 1")]
    InvalidBurnIn,
    #[error("budget {budget} is smaller than the burn-in phase ({burn_in_pulls} pulls)")]
    BudgetTooSmall { budget: u64, burn_in_pulls: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Ground-truth problem instance: arms in their listed order plus a threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    name: String,
    kind: RewardKind,
    arms: Vec<RewardModel>,
    threshold: f64,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        arms: Vec<RewardModel>,
        threshold: f64,
    ) -> Result<Self, CoreError> {
        let first = arms.first().ok_or(CoreError::NoArms)?;
        let kind = first.kind();
        if arms.iter().any(|a| a.kind() != kind) {
            return Err(CoreError::MixedKinds);
        }
        let valid = match kind {
            RewardKind::Bernoulli => threshold > 0.0 && threshold < 1.0,
            RewardKind::Gaussian { .. } => threshold.is_finite(),
        };
        if !valid {
            return Err(CoreError::InvalidThreshold(threshold));
        }
        Ok(Self {
            name: name.into(),
            kind,
            arms,
            threshold,
        })
    }

    pub fn bernoulli(
        name: impl Into<String>,
        means: &[f64],
        threshold: f64,
    ) -> Result<Self, CoreError> {
        let arms = means
            .iter()
            .map(|&m| RewardModel::bernoulli(m))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(name, arms, threshold)
    }

    pub fn gaussian(
        name: impl Into<String>,
        means: &[f64],
        variance: f64,
        threshold: f64,
    ) -> Result<Self, CoreError> {
        let arms = means
            .iter()
            .map(|&m| RewardModel::gaussian(m, variance))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(name, arms, threshold)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> RewardKind {
        self.kind
    }

    pub fn arms(&self) -> &[RewardModel] {
        &self.arms
    }

    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(RewardModel::mean).collect()
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn is_good(&self, arm: usize) -> bool {
        self.arms[arm].mean() >= self.threshold
    }

    /// Number of arms with mean at or above the threshold.
    pub fn good_count(&self) -> usize {
        (0..self.arms.len()).filter(|&i| self.is_good(i)).count()
    }
}

/// Pull count and reward sum of one arm.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ArmStats {
    pub pulls: u64,
    pub reward_sum: f64,
}

impl ArmStats {
    pub fn new(pulls: u64, reward_sum: f64) -> Self {
        Self { pulls, reward_sum }
    }

    pub fn empirical_mean(&self) -> Result<f64, CoreError> {
        if self.pulls == 0 {
            Err(CoreError::UndefinedMean)
        } else {
            Ok(self.mean_unchecked())
        }
    }

    #[inline]
    fn mean_unchecked(&self) -> f64 {
        self.reward_sum / self.pulls as f64
    }
}

/// HDoC sampling score `mean + sqrt(c * ln(round) / pulls)`.
///
/// Requires `pulls >= 1` and `round >= 1`.
#[inline]
pub fn hdoc_score(stats: &ArmStats, round: u64, kind: RewardKind) -> f64 {
    debug_assert!(stats.pulls >= 1 && round >= 1);
    hdoc_score_with_log(stats, (round as f64).ln(), kind.radius_scale())
}

#[inline]
pub(crate) fn hdoc_score_with_log(stats: &ArmStats, log_round: f64, scale: f64) -> f64 {
    let n = stats.pulls as f64;
    stats.mean_unchecked() + (scale * log_round / n).sqrt()
}

/// Radius of the identification confidence interval after `pulls` samples.
#[inline]
pub fn confidence_radius(pulls: u64, arms: usize, delta: f64, kind: RewardKind) -> f64 {
    let n = pulls as f64;
    let log_term = (4.0 * arms as f64).ln() + 2.0 * n.ln() - delta.ln();
    (kind.radius_scale() * log_term / n).sqrt()
}

/// Upper confidence bound used by LUCB-G sampling and for bad-arm elimination.
pub fn lucb_ucb_score(stats: &ArmStats, arms: usize, delta: f64, kind: RewardKind) -> f64 {
    debug_assert!(stats.pulls >= 1);
    stats.mean_unchecked() + confidence_radius(stats.pulls, arms, delta, kind)
}

/// Lower confidence bound used to output good arms.
pub fn lcb_score(stats: &ArmStats, arms: usize, delta: f64, kind: RewardKind) -> f64 {
    debug_assert!(stats.pulls >= 1);
    stats.mean_unchecked() - confidence_radius(stats.pulls, arms, delta, kind)
}

/// APT-G sampling score `sqrt(pulls) * |threshold - mean|`.
#[inline]
pub fn apt_score(stats: &ArmStats, threshold: f64) -> f64 {
    debug_assert!(stats.pulls >= 1);
    (stats.pulls as f64).sqrt() * (threshold - stats.mean_unchecked()).abs()
}

/// Constants of the identification criterion for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Criterion {
    arms: usize,
    delta: f64,
    threshold: f64,
    kind: RewardKind,
}

impl Criterion {
    pub fn new(
        arms: usize,
        delta: f64,
        threshold: f64,
        kind: RewardKind,
    ) -> Result<Self, CoreError> {
        if arms == 0 {
            return Err(CoreError::NoArms);
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(CoreError::InvalidDelta(delta));
        }
        Ok(Self {
            arms,
            delta,
            threshold,
            kind,
        })
    }

    pub fn for_scenario(scenario: &Scenario, delta: f64) -> Result<Self, CoreError> {
        Self::new(
            scenario.num_arms(),
            delta,
            scenario.threshold(),
            scenario.kind(),
        )
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn kind(&self) -> RewardKind {
        self.kind
    }

    #[inline]
    pub fn radius(&self, pulls: u64) -> f64 {
        confidence_radius(pulls, self.arms, self.delta, self.kind)
    }

    /// Good/bad verdict for a stats snapshot. Independent of any sampling strategy.
    pub fn decide(&self, stats: &ArmStats) -> Decision {
        if stats.pulls == 0 {
            return Decision::Undecided;
        }
        let mean = stats.mean_unchecked();
        let radius = self.radius(stats.pulls);
        if mean - radius >= self.threshold {
            Decision::Good
        } else if mean + radius < self.threshold {
            Decision::Bad
        } else {
            Decision::Undecided
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Good,
    Bad,
    Undecided,
}

/// Mutable state of one run: statistics, active set and output log.
#[derive(Debug, Clone)]
pub struct AgentState {
    criterion: Criterion,
    round: u64,
    stats: Vec<ArmStats>,
    // Identification radius per arm; refreshed whenever the arm is pulled.
    radius: Vec<f64>,
    active: Vec<usize>,
    good_outputs: Vec<(usize, u64)>,
    stop_round: Option<u64>,
}

impl AgentState {
    pub fn new(criterion: Criterion) -> Self {
        let k = criterion.arms;
        Self {
            criterion,
            round: 0,
            stats: vec![ArmStats::default(); k],
            radius: vec![f64::INFINITY; k],
            active: (0..k).collect(),
            good_outputs: Vec::new(),
            stop_round: None,
        }
    }

    /// Builds a state from an arbitrary snapshot, with every arm active and
    /// the round equal to the total pull count.
    pub fn from_stats(criterion: Criterion, stats: Vec<ArmStats>) -> Result<Self, CoreError> {
        if stats.len() != criterion.arms {
            return Err(CoreError::ArmOutOfRange {
                index: stats.len(),
                arms: criterion.arms,
            });
        }
        let radius = stats
            .iter()
            .map(|s| {
                if s.pulls == 0 {
                    f64::INFINITY
                } else {
                    criterion.radius(s.pulls)
                }
            })
            .collect();
        Ok(Self {
            round: stats.iter().map(|s| s.pulls).sum(),
            active: (0..stats.len()).collect(),
            radius,
            stats,
            criterion,
            good_outputs: Vec::new(),
            stop_round: None,
        })
    }

    /// Overrides the round counter; used to evaluate HDoC scores at a chosen time.
    pub fn with_round(mut self, round: u64) -> Self {
        self.round = round;
        self
    }

    pub fn criterion(&self) -> &Criterion {
        &self.criterion
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn stats(&self) -> &[ArmStats] {
        &self.stats
    }

    /// Active arm indices in increasing order.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn is_active(&self, arm: usize) -> bool {
        self.active.binary_search(&arm).is_ok()
    }

    pub fn good_outputs(&self) -> &[(usize, u64)] {
        &self.good_outputs
    }

    pub fn stop_round(&self) -> Option<u64> {
        self.stop_round
    }

    pub fn is_stopped(&self) -> bool {
        self.stop_round.is_some()
    }

    /// Identification radius of `arm` at its current pull count.
    pub fn radius(&self, arm: usize) -> f64 {
        self.radius[arm]
    }

    pub fn ucb(&self, arm: usize) -> f64 {
        self.stats[arm].mean_unchecked() + self.radius[arm]
    }

    pub fn lcb(&self, arm: usize) -> f64 {
        self.stats[arm].mean_unchecked() - self.radius[arm]
    }

    /// Records one pull of an active arm and advances the round.
    pub fn record_pull(&mut self, arm: usize, reward: f64) -> Result<(), CoreError> {
        if self.stop_round.is_some() {
            return Err(CoreError::Stopped);
        }
        if !self.is_active(arm) {
            return Err(CoreError::ArmNotActive(arm));
        }
        let s = &mut self.stats[arm];
        s.pulls += 1;
        s.reward_sum += reward;
        self.radius[arm] = self.criterion.radius(s.pulls);
        self.round += 1;
        Ok(())
    }

    /// Applies the identification criterion to `arm`.
    ///
    /// A good arm is logged with the current round and leaves the active set;
    /// a bad arm just leaves it. When the active set empties the stop round is
    /// set to the current round, so a final good output and the stop share it.
    pub fn identify(&mut self, arm: usize) -> Result<Decision, CoreError> {
        if self.stop_round.is_some() {
            return Err(CoreError::Stopped);
        }
        let pos = self
            .active
            .binary_search(&arm)
            .map_err(|_| CoreError::ArmNotActive(arm))?;
        let stats = &self.stats[arm];
        if stats.pulls == 0 {
            return Err(CoreError::UndefinedMean);
        }
        let mean = stats.mean_unchecked();
        let radius = self.radius[arm];
        let threshold = self.criterion.threshold;
        let decision = if mean - radius >= threshold {
            self.good_outputs.push((arm, self.round));
            Decision::Good
        } else if mean + radius < threshold {
            Decision::Bad
        } else {
            Decision::Undecided
        };
        if decision != Decision::Undecided {
            self.active.remove(pos);
            if self.active.is_empty() {
                self.stop_round = Some(self.round);
            }
        }
        Ok(decision)
    }
}

/// Outcome of a single replication.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    /// Rounds at which the 1st, 2nd, ... good arms were output.
    pub tau: Vec<u64>,
    /// Round at which the run stopped with no arms left.
    pub stop: Option<u64>,
    /// Output arm indices, in output order.
    pub outputs: Vec<usize>,
    /// Some output arm has a mean below the threshold.
    pub bad_output: bool,
    /// The run stopped having output fewer arms than there are good arms.
    pub missed_good: bool,
    /// The pull budget ran out before the run stopped.
    pub censored: bool,
    /// Total pulls made.
    pub rounds: u64,
}

impl RunRecord {
    pub fn is_error(&self) -> bool {
        self.bad_output || self.missed_good
    }

    /// Round of the `lambda`-th output (1-based).
    ///
    /// When the run stopped with fewer than `lambda` outputs this is the stop
    /// round; `None` when the run never reached either event.
    pub fn tau_lambda(&self, lambda: usize) -> Option<u64> {
        debug_assert!(lambda >= 1);
        self.tau.get(lambda - 1).copied().or(self.stop)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub delta: f64,
    /// Forced pulls of every arm before adaptive sampling starts.
    pub burn_in: u64,
    /// Maximum total pulls.
    pub budget: u64,
    /// End the run as soon as this many arms have been output.
    pub max_outputs: Option<usize>,
}

impl RunConfig {
    pub const DEFAULT_BUDGET: u64 = 100_000;

    pub fn new(delta: f64) -> Self {
        Self {
            delta,
            burn_in: 1,
            budget: Self::DEFAULT_BUDGET,
            max_outputs: None,
        }
    }

    pub fn burn_in(mut self, burn_in: u64) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn max_outputs(mut self, max_outputs: Option<usize>) -> Self {
        self.max_outputs = max_outputs;
        self
    }

    pub fn validate(&self, arms: usize) -> Result<(), CoreError> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(CoreError::InvalidDelta(self.delta));
        }
        if self.burn_in == 0 {
            return Err(CoreError::InvalidBurnIn);
        }
        let burn_in_pulls = self.burn_in.saturating_mul(arms as u64);
        if self.budget < burn_in_pulls {
            return Err(CoreError::BudgetTooSmall {
                budget: self.budget,
                burn_in_pulls,
            });
        }
        Ok(())
    }
}

/// Runs one replication until the active set is empty, the budget is spent,
/// or `max_outputs` arms have been output.
pub fn run(
    scenario: &Scenario,
    strategy: Strategy,
    config: &RunConfig,
    rng: &mut RngStream,
) -> Result<RunRecord, CoreError> {
    config.validate(scenario.num_arms())?;
    let criterion = Criterion::for_scenario(scenario, config.delta)?;
    let mut state = AgentState::new(criterion);
    let arms = scenario.arms();
    let wanted = config.max_outputs.unwrap_or(usize::MAX);

    let mut pull = |state: &mut AgentState, arm: usize| -> Result<(), CoreError> {
        state.record_pull(arm, arms[arm].sample(rng))?;
        state.identify(arm)?;
        Ok(())
    };

    let done = |state: &AgentState| state.is_stopped() || state.good_outputs.len() >= wanted;

    // Burn-in: round-robin passes over the arms still active.
    'burn_in: for _ in 0..config.burn_in {
        for arm in 0..arms.len() {
            if done(&state) || state.round >= config.budget {
                break 'burn_in;
            }
            if state.is_active(arm) {
                pull(&mut state, arm)?;
            }
        }
    }

    while !done(&state) && state.round < config.budget {
        let arm = strategy.select(&state)?;
        pull(&mut state, arm)?;
    }

    let censored = !done(&state);
    Ok(finish(scenario, &state, censored))
}

fn finish(scenario: &Scenario, state: &AgentState, censored: bool) -> RunRecord {
    let outputs: Vec<usize> = state.good_outputs.iter().map(|&(a, _)| a).collect();
    let stop = state.stop_round;
    RunRecord {
        tau: state.good_outputs.iter().map(|&(_, t)| t).collect(),
        bad_output: outputs.iter().any(|&a| !scenario.is_good(a)),
        missed_good: stop.is_some() && outputs.len() < scenario.good_count(),
        censored,
        stop,
        outputs,
        rounds: state.round,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn bern() -> RewardKind {
        RewardKind::Bernoulli
    }

    #[test]
    fn empirical_mean_examples() {
        assert_eq!(ArmStats::new(4, 2.0).empirical_mean(), Ok(0.5));
        assert_eq!(ArmStats::new(1, 0.0).empirical_mean(), Ok(0.0));
        assert_relative_eq!(ArmStats::new(3, 2.0).empirical_mean().unwrap(), 2.0 / 3.0);
        assert_eq!(
            ArmStats::new(0, 0.0).empirical_mean(),
            Err(CoreError::UndefinedMean)
        );
    }

    #[test]
    fn hdoc_score_examples() {
        assert_eq!(hdoc_score(&ArmStats::new(1, 1.0), 1, bern()), 1.0);
        let s = hdoc_score(&ArmStats::new(8, 4.0), 100, bern());
        assert_relative_eq!(s, 0.5 + (100f64.ln() / 16.0).sqrt(), epsilon = 1e-12);
        assert_relative_eq!(s, 1.03650, epsilon = 1e-5);
        let g = RewardKind::gaussian(1.44).unwrap();
        let round_e = std::f64::consts::E;
        let s = hdoc_score_with_log(&ArmStats::new(10, 12.0), round_e.ln(), g.radius_scale());
        assert_relative_eq!(s, 1.2 + 0.53666, epsilon = 1e-5);
    }

    #[test]
    fn lucb_examples() {
        let s = lucb_ucb_score(&ArmStats::new(1, 0.0), 1, 0.5, bern());
        assert_relative_eq!(s, (8f64.ln() / 2.0).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(s, 1.019667, epsilon = 1e-6);
        let s = lucb_ucb_score(&ArmStats::new(100, 55.0), 10, 0.05, bern());
        assert_relative_eq!(s, 0.55 + (8e6f64.ln() / 200.0).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(s, 0.831913, epsilon = 1e-6);
        let l = lcb_score(&ArmStats::new(1, 0.0), 1, 0.5, bern());
        assert_relative_eq!(l, -1.019667, epsilon = 1e-6);
        let l = lcb_score(&ArmStats::new(1000, 900.0), 10, 0.05, bern());
        assert_relative_eq!(l, 0.79875, epsilon = 1e-5);
    }

    #[test]
    fn gaussian_radius_matches_closed_form() {
        let g = RewardKind::gaussian(1.44).unwrap();
        let r = confidence_radius(20, 7, 0.05, g);
        let expected = (2.0 * 1.44 * (4.0 * 7.0 * 400.0 / 0.05f64).ln() / 20.0).sqrt();
        assert_relative_eq!(r, expected, epsilon = 1e-12);
    }

    #[test]
    fn radius_decreases_when_constant_large() {
        for &(k, delta) in &[(1usize, 0.5), (10, 0.05), (3, 0.2)] {
            assert!(4.0 * k as f64 / delta >= std::f64::consts::E.powi(2));
            for n in 1..2000 {
                assert!(
                    confidence_radius(n + 1, k, delta, bern())
                        < confidence_radius(n, k, delta, bern())
                );
            }
        }
    }

    #[test]
    fn apt_examples() {
        assert_eq!(apt_score(&ArmStats::new(7, 3.5), 0.5), 0.0);
        assert_relative_eq!(apt_score(&ArmStats::new(16, 12.0), 0.5), 1.0);
        assert_relative_eq!(
            apt_score(&ArmStats::new(9, 0.9), 0.35),
            0.75,
            epsilon = 1e-12
        );
    }

    fn criterion(k: usize) -> Criterion {
        Criterion::new(k, 0.05, 0.5, bern()).unwrap()
    }

    #[test]
    fn identify_good_removes_and_logs() {
        let mut state = AgentState::from_stats(
            criterion(10),
            (0..10).map(|_| ArmStats::new(1000, 900.0)).collect(),
        )
        .unwrap();
        assert_relative_eq!(state.lcb(3), 0.79875, epsilon = 1e-5);
        assert_eq!(state.identify(3), Ok(Decision::Good));
        assert!(!state.is_active(3));
        assert_eq!(state.good_outputs(), &[(3, 10_000)]);
        assert_eq!(state.identify(3), Err(CoreError::ArmNotActive(3)));
    }

    #[test]
    fn identify_bad_and_undecided() {
        // One pull per arm: radius sqrt(ln(800)/2) > 1 dominates any mean.
        let mut fresh =
            AgentState::from_stats(criterion(10), vec![ArmStats::new(1, 1.0); 10]).unwrap();
        assert!(fresh.radius(0) > 1.8);
        assert_eq!(fresh.identify(0), Ok(Decision::Undecided));

        let crit = Criterion::new(2, 0.05, 0.5, bern()).unwrap();
        // ucb below 0.5 after enough pulls of a zero-reward arm.
        let mut state =
            AgentState::from_stats(crit, vec![ArmStats::new(5000, 0.0), ArmStats::new(1, 0.0)])
                .unwrap();
        assert!(state.ucb(0) < 0.5);
        assert_eq!(state.identify(0), Ok(Decision::Bad));
        assert!(state.good_outputs().is_empty());
        assert!(!state.is_stopped());
    }

    #[test]
    fn last_arm_sets_stop_round() {
        let crit = Criterion::new(1, 0.05, 0.5, bern()).unwrap();
        let mut state = AgentState::from_stats(crit, vec![ArmStats::new(1000, 1000.0)]).unwrap();
        assert_eq!(state.identify(0), Ok(Decision::Good));
        assert_eq!(state.stop_round(), Some(1000));
        assert_eq!(state.good_outputs(), &[(0, 1000)]);
        assert_eq!(state.record_pull(0, 1.0), Err(CoreError::Stopped));
    }

    #[test]
    fn decide_agrees_with_identify() {
        let crit = criterion(3);
        for (pulls, sum) in [(1u64, 1.0), (200, 190.0), (200, 10.0), (50, 25.0)] {
            let stats = ArmStats::new(pulls, sum);
            let mut state = AgentState::from_stats(crit, vec![stats; 3]).unwrap();
            assert_eq!(crit.decide(&stats), state.identify(1).unwrap());
        }
    }

    fn brute_force_single_arm() -> u64 {
        (1..=100u64)
            .find(|&n| {
                let n = n as f64;
                ((4.0 * n * n / 0.05).ln() / (2.0 * n)).sqrt() <= 0.5
            })
            .unwrap()
    }

    #[test]
    fn single_good_arm_deterministic() {
        let n = brute_force_single_arm();
        // ln(80 * 21^2) / 42 = 0.2493 <= 0.25 while n = 20 gives 0.2593.
        assert_eq!(n, 21);
        let scenario = Scenario::bernoulli("one", &[1.0], 0.5).unwrap();
        let config = RunConfig::new(0.05);
        let rec = run(
            &scenario,
            Strategy::Hdoc,
            &config,
            &mut RngStream::new(0, 0),
        )
        .unwrap();
        assert_eq!(rec.tau, vec![n]);
        assert_eq!(rec.stop, Some(n));
        assert_eq!(rec.outputs, vec![0]);
        assert!(!rec.is_error() && !rec.censored);
    }

    #[test]
    fn single_bad_arm_deterministic() {
        let scenario = Scenario::bernoulli("one", &[0.0], 0.5).unwrap();
        let rec = run(
            &scenario,
            Strategy::LucbG,
            &RunConfig::new(0.05),
            &mut RngStream::new(0, 0),
        )
        .unwrap();
        assert!(rec.tau.is_empty());
        assert_eq!(rec.stop, Some(brute_force_single_arm()));
        assert!(!rec.missed_good && !rec.bad_output && !rec.censored);
    }

    #[test]
    fn budget_equal_to_burn_in_censors() {
        let scenario = Scenario::bernoulli("s", &[0.45, 0.55, 0.5], 0.5).unwrap();
        let config = RunConfig::new(0.05).burn_in(5).budget(15);
        let rec = run(
            &scenario,
            Strategy::Hdoc,
            &config,
            &mut RngStream::new(3, 1),
        )
        .unwrap();
        assert!(rec.censored);
        assert!(rec.tau.is_empty());
        assert_eq!(rec.stop, None);
        assert_eq!(rec.rounds, 15);
    }

    #[test]
    fn max_outputs_halts_without_censoring() {
        let scenario = Scenario::bernoulli("s", &[0.9, 0.9, 0.1], 0.5).unwrap();
        let config = RunConfig::new(0.05).max_outputs(Some(1));
        let rec = run(
            &scenario,
            Strategy::Hdoc,
            &config,
            &mut RngStream::new(3, 1),
        )
        .unwrap();
        assert_eq!(rec.tau.len(), 1);
        assert!(!rec.censored);
        assert_eq!(rec.stop, None);
    }

    #[test]
    fn invalid_run_configs() {
        let scenario = Scenario::bernoulli("s", &[0.2, 0.8], 0.5).unwrap();
        let mut rng = RngStream::new(0, 0);
        let bad = |c: RunConfig, rng: &mut RngStream| run(&scenario, Strategy::Hdoc, &c, rng);
        assert_eq!(
            bad(RunConfig::new(1.0), &mut rng),
            Err(CoreError::InvalidDelta(1.0))
        );
        assert_eq!(
            bad(RunConfig::new(0.1).burn_in(0), &mut rng),
            Err(CoreError::InvalidBurnIn)
        );
        assert_eq!(
            bad(RunConfig::new(0.1).burn_in(5).budget(9), &mut rng),
            Err(CoreError::BudgetTooSmall {
                budget: 9,
                burn_in_pulls: 10
            })
        );
    }

    #[test]
    fn scenario_validation() {
        assert_eq!(Scenario::bernoulli("e", &[], 0.5), Err(CoreError::NoArms));
        assert_eq!(
            Scenario::bernoulli("t", &[0.5], 1.0),
            Err(CoreError::InvalidThreshold(1.0))
        );
        let mixed = vec![
            RewardModel::bernoulli(0.5).unwrap(),
            RewardModel::gaussian(0.5, 1.0).unwrap(),
        ];
        assert_eq!(Scenario::new("m", mixed, 0.5), Err(CoreError::MixedKinds));
        let g = Scenario::gaussian("g", &[1.2, 3.0], 1.44, 1.2).unwrap();
        assert_eq!(g.good_count(), 2);
    }

    #[test]
    fn tau_lambda_falls_back_to_stop() {
        let rec = RunRecord {
            tau: vec![10, 20],
            stop: Some(30),
            outputs: vec![0, 1],
            bad_output: false,
            missed_good: true,
            censored: false,
            rounds: 30,
        };
        assert_eq!(rec.tau_lambda(2), Some(20));
        assert_eq!(rec.tau_lambda(3), Some(30));
    }
}
