//! Good arm identification in the fixed-confidence setting.
//!
//! An agent pulls arms of a stochastic bandit and outputs, one at a time,
//! arms whose mean is at least a threshold `xi`, each with confidence
//! `1 - delta`, then stops once no good arm can remain. The crate provides
//! the HDoC, LUCB-G and APT-G sampling strategies over a shared
//! identification criterion, closed-form sample-complexity bounds, and a
//! seeded replication harness.
//!
//! Replications run on rayon when the `parallel` feature (on by default) is
//! enabled; results are identical either way.

pub mod analysis;
pub mod arms;
pub mod bandit;
pub mod harness;
pub mod strategies;

pub use analysis::{AnalysisError, BoundReport, Instance};
pub use arms::{RewardKind, RewardModel, RngStream};
pub use bandit::{
    run, AgentState, ArmStats, CoreError, Criterion, Decision, RunConfig, RunRecord, Scenario,
};
pub use harness::{AggregateRow, Execution, ExperimentConfig, HarnessError, Quantity};
pub use strategies::Strategy;
