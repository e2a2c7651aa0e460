//! Closed-form sample-complexity bounds.
//!
//! Covers the change-of-measure lower bound on `E[tau_lambda]`, the
//! finite-delta upper bounds for HDoC (through the per-arm terms `n_i`), their
//! `delta -> 0` coefficients, and the asymptotic Gaussian lower-bound curve.
//! All logarithms are natural.

use thiserror::Error;

use crate::arms::RewardKind;
use crate::bandit::Scenario;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("binary relative entropy arguments must lie in [0, 1], got ({0}, {1})")]
    Domain(f64, f64),
    #[error("lambda = {lambda} must satisfy 1 <= lambda <= m = {good}")]
    InvalidLambda { lambda: usize, good: usize },
    #[error("arm {arm} (sorted by mean) sits exactly on the threshold; the bound is unbounded")]
    ZeroGap { arm: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("delta must lie in (0, 1), got {0}")]
    InvalidDelta(f64),
    #[error("this bound is defined for gaussian instances only")]
    NotGaussian,
    #[error("instance needs at least one arm")]
    Empty,
}

/// Instance with means sorted in decreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    means: Vec<f64>,
    threshold: f64,
    delta: f64,
    kind: RewardKind,
}

impl Instance {
    pub fn new(
        means: &[f64],
        threshold: f64,
        delta: f64,
        kind: RewardKind,
    ) -> Result<Self, AnalysisError> {
        if means.is_empty() {
            return Err(AnalysisError::Empty);
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(AnalysisError::InvalidDelta(delta));
        }
        let mut means = means.to_vec();
        means.sort_by(|a, b| b.total_cmp(a));
        Ok(Self {
            means,
            threshold,
            delta,
            kind,
        })
    }

    pub fn from_scenario(scenario: &Scenario, delta: f64) -> Result<Self, AnalysisError> {
        Self::new(
            &scenario.means(),
            scenario.threshold(),
            delta,
            scenario.kind(),
        )
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self, AnalysisError> {
        Self::new(&self.means, self.threshold, delta, self.kind)
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn kind(&self) -> RewardKind {
        self.kind
    }

    pub fn num_arms(&self) -> usize {
        self.means.len()
    }

    pub fn good_count(&self) -> usize {
        self.means.iter().filter(|&&m| m >= self.threshold).count()
    }

    /// `|mu_i - xi|` for every arm, in sorted order.
    pub fn gaps(&self) -> Vec<f64> {
        self.means
            .iter()
            .map(|m| (m - self.threshold).abs())
            .collect()
    }

    /// `mu_i - mu_j` with 1-based sorted indices.
    pub fn pair_gap(&self, i: usize, j: usize) -> f64 {
        self.means[i - 1] - self.means[j - 1]
    }

    /// `min { min_i gap_i, min_l (mu_l - mu_{l+1}) / 2 }`.
    pub fn min_gap(&self) -> f64 {
        let arm_gap = self.gaps().into_iter().fold(f64::INFINITY, f64::min);
        let pair = self
            .means
            .windows(2)
            .map(|w| (w[0] - w[1]) / 2.0)
            .fold(f64::INFINITY, f64::min);
        arm_gap.min(pair)
    }

    /// Half of [`Instance::min_gap`].
    pub fn default_epsilon(&self) -> f64 {
        self.min_gap() / 2.0
    }

    fn check_lambda(&self, lambda: usize) -> Result<(), AnalysisError> {
        let good = self.good_count();
        if lambda == 0 || lambda > good {
            Err(AnalysisError::InvalidLambda { lambda, good })
        } else {
            Ok(())
        }
    }

    /// KL divergence between the arm with mean `mean` and one sitting on the threshold.
    fn divergence_to_threshold(&self, mean: f64) -> Result<f64, AnalysisError> {
        match self.kind {
            RewardKind::Bernoulli => binary_relative_entropy(mean, self.threshold),
            RewardKind::Gaussian { variance } => {
                Ok((mean - self.threshold).powi(2) / (2.0 * variance))
            }
        }
    }
}

// 0 * log(0 / y) = 0 by continuity.
fn xlogx_over(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if y == 0.0 {
        f64::INFINITY
    } else {
        x * (x / y).ln()
    }
}

/// Kullback-Leibler divergence between Bernoulli(x) and Bernoulli(y).
///
/// Returns `+inf` when `y` sits on a boundary that `x` does not.
pub fn binary_relative_entropy(x: f64, y: f64) -> Result<f64, AnalysisError> {
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
        return Err(AnalysisError::Domain(x, y));
    }
    Ok(xlogx_over(x, y) + xlogx_over(1.0 - x, 1.0 - y))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    /// The bound as displayed; may be negative for moderate delta.
    pub raw: f64,
    /// `max(0, raw)`.
    pub clamped: f64,
}

/// Lower bound on `E[tau_lambda]` for any algorithm that is correct with
/// probability `1 - delta`.
///
/// Bernoulli instances use the binary relative entropy; Gaussian instances
/// use the Gaussian divergence `(mu - xi)^2 / (2 sigma^2)`.
pub fn lower_bound_tau(instance: &Instance, lambda: usize) -> Result<LowerBound, AnalysisError> {
    instance.check_lambda(lambda)?;
    let log_term = (1.0 / (2.0 * instance.delta)).ln();
    let mut sum = 0.0;
    for (i, &mean) in instance.means[..lambda].iter().enumerate() {
        let d = instance.divergence_to_threshold(mean)?;
        if d == 0.0 {
            return Err(AnalysisError::ZeroGap { arm: i + 1 });
        }
        sum += log_term / d;
    }
    let d_lambda = instance.divergence_to_threshold(instance.means[lambda - 1])?;
    let raw = sum - instance.good_count() as f64 / d_lambda;
    Ok(LowerBound {
        raw,
        clamped: raw.max(0.0),
    })
}

/// Asymptotic Gaussian lower bound `sum_{i <= lambda} 2 sigma^2 log(1/delta) / gap_i^2`.
pub fn gaussian_lower_bound_curve(
    instance: &Instance,
    lambda: usize,
    log_inv_delta: f64,
) -> Result<f64, AnalysisError> {
    let RewardKind::Gaussian { variance } = instance.kind else {
        return Err(AnalysisError::NotGaussian);
    };
    instance.check_lambda(lambda)?;
    let mut total = 0.0;
    for (i, gap) in instance.gaps()[..lambda].iter().enumerate() {
        if *gap == 0.0 {
            return Err(AnalysisError::ZeroGap { arm: i + 1 });
        }
        total += 2.0 * variance * log_inv_delta / (gap * gap);
    }
    Ok(total)
}

/// Per-arm sample count `n_i` of the HDoC upper bound.
pub fn n_term(gap: f64, epsilon: f64, arms: usize, delta: f64) -> Result<f64, AnalysisError> {
    if !(epsilon > 0.0 && epsilon < gap) {
        return Err(AnalysisError::Hypothesis(format!(
            "0 < epsilon < gap_i (epsilon = {epsilon}, gap_i = {gap})"
        )));
    }
    if arms == 0 {
        return Err(AnalysisError::Empty);
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(AnalysisError::InvalidDelta(delta));
    }
    let g2 = (gap - epsilon).powi(2);
    let c = (arms as f64 / delta).sqrt();
    Ok((4.0 * c / g2 * (5.0 * c / g2).ln()).ln() / g2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBounds {
    pub tau_lambda: f64,
    pub tau_stop: f64,
}

fn check_epsilon(instance: &Instance, lambda: usize, epsilon: f64) -> Result<(), AnalysisError> {
    let min_gap = instance.gaps().into_iter().fold(f64::INFINITY, f64::min);
    if min_gap == 0.0 {
        let arm = instance.gaps().iter().position(|&g| g == 0.0).unwrap() + 1;
        return Err(AnalysisError::ZeroGap { arm });
    }
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    if !(epsilon > 0.0) {
        return Err(AnalysisError::Hypothesis(format!(
            "epsilon > 0 (epsilon = {epsilon})"
        )));
    }
    if epsilon >= min_gap {
        return Err(AnalysisError::Hypothesis(format!(
            "epsilon < min_i gap_i (epsilon = {epsilon}, min gap = {min_gap})"
        )));
    }
    if lambda < instance.num_arms() {
        let separation = instance.pair_gap(lambda, lambda + 1);
        if separation <= 0.0 {
            return Err(AnalysisError::Hypothesis(format!(
                "mu_{lambda} - mu_{} > 0 (the two are tied)",
                lambda + 1
            )));
        }
        if epsilon >= separation / 2.0 {
            return Err(AnalysisError::Hypothesis(format!(
                "epsilon < (mu_{lambda} - mu_{}) / 2 (epsilon = {epsilon}, half gap = {})",
                lambda + 1,
                separation / 2.0
            )));
        }
    }
    Ok(())
}

/// All `n_i` at the given epsilon, in sorted-arm order.
pub fn n_terms(instance: &Instance, epsilon: f64) -> Result<Vec<f64>, AnalysisError> {
    let k = instance.num_arms();
    instance
        .gaps()
        .into_iter()
        .map(|g| n_term(g, epsilon, k, instance.delta))
        .collect()
}

/// Upper bounds on `E[tau_lambda]` and `E[tau_stop]` for HDoC.
///
/// The `K^(2 - eps^2 / (min gap - eps)^2) / (2 eps^2)` term is evaluated with
/// the exponent grouped exactly as written.
pub fn upper_bounds(
    instance: &Instance,
    lambda: usize,
    epsilon: f64,
) -> Result<UpperBounds, AnalysisError> {
    instance.check_lambda(lambda)?;
    check_epsilon(instance, lambda, epsilon)?;
    let k = instance.num_arms();
    let kf = k as f64;
    let delta = instance.delta;
    let n = n_terms(instance, epsilon)?;
    let n_max = n.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_gap = instance.gaps().into_iter().fold(f64::INFINITY, f64::min);
    let eps2 = epsilon * epsilon;

    let mut tau_lambda: f64 = n[..lambda].iter().sum();
    for i in (lambda + 1)..=k {
        let sep = instance.pair_gap(lambda, i) - 2.0 * epsilon;
        tau_lambda += (kf * n_max).ln() / (2.0 * sep * sep) + delta * n[i - 1];
    }
    let exponent = 2.0 - eps2 / (min_gap - epsilon).powi(2);
    tau_lambda += kf.powf(exponent) / (2.0 * eps2);
    tau_lambda += kf * (5.0 + (1.0 / (2.0 * eps2)).ln()) / (4.0 * eps2);

    let tau_stop = n.iter().sum::<f64>() + kf / (2.0 * eps2);
    Ok(UpperBounds {
        tau_lambda,
        tau_stop,
    })
}

fn inverse_gap_sum(gaps: &[f64]) -> Result<f64, AnalysisError> {
    gaps.iter().enumerate().try_fold(0.0, |acc, (i, &g)| {
        if g == 0.0 {
            Err(AnalysisError::ZeroGap { arm: i + 1 })
        } else {
            Ok(acc + 1.0 / (2.0 * g * g))
        }
    })
}

/// `limsup E[tau_lambda] / log(1/delta)` coefficient: `sum_{i <= lambda} 1 / (2 gap_i^2)`.
pub fn asymptotic_coeff_tau_lambda(
    instance: &Instance,
    lambda: usize,
) -> Result<f64, AnalysisError> {
    instance.check_lambda(lambda)?;
    inverse_gap_sum(&instance.gaps()[..lambda])
}

/// `limsup E[tau_stop] / log(1/delta)` coefficient: `sum_i 1 / (2 gap_i^2)`.
pub fn asymptotic_coeff_tau_stop(instance: &Instance) -> Result<f64, AnalysisError> {
    inverse_gap_sum(&instance.gaps())
}

pub fn asymptotic_coefficients(
    instance: &Instance,
    lambda: usize,
) -> Result<(f64, f64), AnalysisError> {
    Ok((
        asymptotic_coeff_tau_lambda(instance, lambda)?,
        asymptotic_coeff_tau_stop(instance)?,
    ))
}

/// Everything the `bounds` command prints. Each part fails independently so
/// a degenerate instance still reports what is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub lambda: usize,
    pub epsilon: f64,
    pub lower_tau: Result<LowerBound, AnalysisError>,
    pub n_terms: Result<Vec<f64>, AnalysisError>,
    pub upper: Result<UpperBounds, AnalysisError>,
    pub coeff_tau_lambda: Result<f64, AnalysisError>,
    pub coeff_tau_stop: Result<f64, AnalysisError>,
}

impl BoundReport {
    pub fn compute(instance: &Instance, lambda: usize, epsilon: Option<f64>) -> Self {
        let epsilon = epsilon.unwrap_or_else(|| instance.default_epsilon());
        let n_terms = check_epsilon(instance, instance.num_arms(), epsilon)
            .and_then(|_| n_terms(instance, epsilon));
        Self {
            lambda,
            epsilon,
            lower_tau: lower_bound_tau(instance, lambda),
            n_terms,
            upper: upper_bounds(instance, lambda, epsilon),
            coeff_tau_lambda: asymptotic_coeff_tau_lambda(instance, lambda),
            coeff_tau_stop: asymptotic_coeff_tau_stop(instance),
        }
    }
}
