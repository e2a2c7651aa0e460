//! Sampling strategies: which active arm to pull next.
//!
//! All three are memoryless functions of the current [`AgentState`]. Ties go
//! to the lowest arm index.

use std::fmt;
use std::str::FromStr;

use crate::arms::RewardKind;
use crate::bandit::{apt_score, hdoc_score_with_log, AgentState, CoreError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// UCB1-style bonus `sqrt(c ln t / N_i)`.
    Hdoc,
    /// Largest identification upper bound.
    LucbG,
    /// Smallest `sqrt(N_i) |xi - mean_i|`.
    AptG,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Hdoc, Strategy::LucbG, Strategy::AptG];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Hdoc => "hdoc",
            Strategy::LucbG => "lucb-g",
            Strategy::AptG => "apt-g",
        }
    }

    pub fn select(&self, state: &AgentState) -> Result<usize, CoreError> {
        match self {
            Strategy::Hdoc => select_hdoc(state, state.criterion().kind()),
            Strategy::LucbG => select_lucb_g(state),
            Strategy::AptG => select_apt_g(state, state.criterion().threshold()),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown algorithm {0:?} (expected hdoc, lucb-g or apt-g)")]
pub struct UnknownStrategy(pub String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hdoc" => Ok(Strategy::Hdoc),
            "lucb-g" => Ok(Strategy::LucbG),
            "apt-g" => Ok(Strategy::AptG),
            other => Err(UnknownStrategy(other.to_string())),
        }
    }
}

// Strict comparisons while scanning in index order keep the lowest index on ties.
#[inline]
fn arg_best<F>(active: &[usize], mut score: F, maximize: bool) -> Result<usize, CoreError>
where
    F: FnMut(usize) -> f64,
{
    let (&first, rest) = active.split_first().ok_or(CoreError::EmptyActive)?;
    let mut best = first;
    let mut best_score = score(first);
    for &arm in rest {
        let s = score(arm);
        let better = if maximize {
            s > best_score
        } else {
            s < best_score
        };
        if better {
            best = arm;
            best_score = s;
        }
    }
    Ok(best)
}

pub fn select_hdoc(state: &AgentState, kind: RewardKind) -> Result<usize, CoreError> {
    let log_round = (state.round().max(1) as f64).ln();
    let scale = kind.radius_scale();
    let stats = state.stats();
    arg_best(
        state.active(),
        |i| hdoc_score_with_log(&stats[i], log_round, scale),
        true,
    )
}

pub fn select_lucb_g(state: &AgentState) -> Result<usize, CoreError> {
    arg_best(state.active(), |i| state.ucb(i), true)
}

pub fn select_apt_g(state: &AgentState, threshold: f64) -> Result<usize, CoreError> {
    let stats = state.stats();
    arg_best(state.active(), |i| apt_score(&stats[i], threshold), false)
}
