//! Reward models and the per-replication random stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("bernoulli mean {0} is outside [0, 1]")]
    BernoulliMean(f64),
    #[error("gaussian variance must be positive and finite, got {0}")]
    Variance(f64),
    #[error("mean must be finite, got {0}")]
    NonFiniteMean(f64),
}

/// Reward family shared by every arm of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RewardKind {
    Bernoulli,
    Gaussian { variance: f64 },
}

impl RewardKind {
    pub fn gaussian(variance: f64) -> Result<Self, ModelError> {
        if variance.is_finite() && variance > 0.0 {
            Ok(RewardKind::Gaussian { variance })
        } else {
            Err(ModelError::Variance(variance))
        }
    }

    /// Multiplier `c` in the confidence radius `sqrt(c * L / n)`.
    ///
    /// Hoeffding gives `c = 1/2` for rewards in [0, 1]; the Gaussian tail
    /// bound with known variance gives `c = 2 sigma^2`.
    #[inline]
    pub fn radius_scale(&self) -> f64 {
        match *self {
            RewardKind::Bernoulli => 0.5,
            RewardKind::Gaussian { variance } => 2.0 * variance,
        }
    }

    pub fn variance(&self) -> Option<f64> {
        match *self {
            RewardKind::Bernoulli => None,
            RewardKind::Gaussian { variance } => Some(variance),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RewardKind::Bernoulli => "bernoulli",
            RewardKind::Gaussian { .. } => "gaussian",
        }
    }
}

/// Distribution of a single arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardModel {
    kind: RewardKind,
    mean: f64,
    std_dev: f64,
}

impl RewardModel {
    pub fn bernoulli(mean: f64) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&mean) {
            return Err(ModelError::BernoulliMean(mean));
        }
        Ok(Self {
            kind: RewardKind::Bernoulli,
            mean,
            std_dev: 0.0,
        })
    }

    pub fn gaussian(mean: f64, variance: f64) -> Result<Self, ModelError> {
        if !mean.is_finite() {
            return Err(ModelError::NonFiniteMean(mean));
        }
        let kind = RewardKind::gaussian(variance)?;
        Ok(Self {
            kind,
            mean,
            std_dev: variance.sqrt(),
        })
    }

    pub fn new(kind: RewardKind, mean: f64) -> Result<Self, ModelError> {
        match kind {
            RewardKind::Bernoulli => Self::bernoulli(mean),
            RewardKind::Gaussian { variance } => Self::gaussian(mean, variance),
        }
    }

    pub fn kind(&self) -> RewardKind {
        self.kind
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Draws one reward. Bernoulli rewards come back as 0.0 or 1.0.
    #[inline]
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match self.kind {
            RewardKind::Bernoulli => {
                // random::<f64>() lies in [0, 1), so mean 0 never fires and mean 1 always does.
                if rng.inner.random::<f64>() < self.mean {
                    1.0
                } else {
                    0.0
                }
            }
            RewardKind::Gaussian { .. } => {
                let z: f64 = rng.inner.sample(StandardNormal);
                self.mean + self.std_dev * z
            }
        }
    }
}

/// Deterministic random stream for one replication.
///
/// Backed by ChaCha8 seeded from `base_seed`, with `run_index` selecting one
/// of the 2^64 independent ChaCha streams. The same `(base_seed, run_index)`
/// always reproduces the same reward sequence, independent of which thread
/// runs the replication.
#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(base_seed: u64, run_index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(base_seed);
        inner.set_stream(run_index);
        Self { inner }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(model: RewardModel, n: usize, seed: u64) -> (f64, f64) {
        let mut rng = RngStream::new(seed, 0);
        let draws: Vec<f64> = (0..n).map(|_| model.sample(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        (mean, var)
    }

    #[test]
    fn degenerate_bernoulli() {
        let mut rng = RngStream::new(7, 3);
        let zero = RewardModel::bernoulli(0.0).unwrap();
        let one = RewardModel::bernoulli(1.0).unwrap();
        for _ in 0..10_000 {
            assert_eq!(zero.sample(&mut rng), 0.0);
            assert_eq!(one.sample(&mut rng), 1.0);
        }
    }

    #[test]
    fn bernoulli_half_mean() {
        let (mean, _) = moments(RewardModel::bernoulli(0.5).unwrap(), 1_000_000, 11);
        assert!((mean - 0.5).abs() < 0.003, "mean {mean}");
    }

    #[test]
    fn gaussian_moments() {
        let (mean, var) = moments(RewardModel::gaussian(1.2, 1.44).unwrap(), 1_000_000, 5);
        assert!((mean - 1.2).abs() < 0.01, "mean {mean}");
        assert!((var - 1.44).abs() < 0.05, "var {var}");
    }

    #[test]
    fn bernoulli_mean_within_six_sigma_band() {
        let mu = 0.3;
        let n = 2_000;
        let band = 6.0 * (mu * (1.0 - mu) / n as f64).sqrt();
        let model = RewardModel::bernoulli(mu).unwrap();
        for run in 0..200 {
            let mut rng = RngStream::new(99, run);
            let mean = (0..n).map(|_| model.sample(&mut rng)).sum::<f64>() / n as f64;
            assert!((mean - mu).abs() <= band, "run {run}: {mean}");
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let model = RewardModel::gaussian(0.0, 1.0).unwrap();
        let draw = |seed, run| {
            let mut rng = RngStream::new(seed, run);
            (0..64).map(|_| model.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(1, 2), draw(1, 2));
        assert_ne!(draw(1, 2), draw(1, 3));
        assert_ne!(draw(1, 2), draw(2, 2));
    }

    #[test]
    fn rejects_invalid_models() {
        assert_eq!(
            RewardModel::bernoulli(1.5),
            Err(ModelError::BernoulliMean(1.5))
        );
        assert!(RewardModel::bernoulli(-0.1).is_err());
        assert!(RewardModel::bernoulli(f64::NAN).is_err());
        assert_eq!(
            RewardModel::gaussian(0.0, 0.0),
            Err(ModelError::Variance(0.0))
        );
        assert!(RewardModel::gaussian(f64::INFINITY, 1.0).is_err());
    }
}
