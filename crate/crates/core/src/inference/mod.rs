//! Exact posterior filtering, posterior-predictive future sampling and
//! conditional-mean smoothing.

mod discrete;
mod future;
mod gaussian;

pub use discrete::{
    bernoulli_update, hmm_observe, hmm_transition, mix_with_prior, smooth_mean, smooth_posterior, DiscreteBelief,
};
pub use future::{sample_arm_future, sample_future, sample_theta, FutureSample};
pub use gaussian::{
    ar1_d_star, ar1_pivots, ar1_ps_conditional_finite, ar1_ps_variance, ar1_x_star, kalman_observe, kalman_predict,
    kalman_step, kalman_update, GaussianBelief,
};

use serde::{Deserialize, Serialize};

use crate::envs::{ArmModel, DiscreteDist};
use crate::error::{config, contract, Result};
use crate::numerics::{DEFAULT_EPSILON, DEFAULT_MAX_HORIZON};

/// How far into the future predictive sampling and the baseline look.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_max_horizon")]
    pub max_horizon: usize,
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_max_horizon() -> usize {
    DEFAULT_MAX_HORIZON
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { epsilon: DEFAULT_EPSILON, max_horizon: DEFAULT_MAX_HORIZON }
    }
}

impl Truncation {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(config(format!("truncation epsilon {} must lie in (0, 1)", self.epsilon)));
        }
        if self.max_horizon == 0 {
            return Err(config("truncation max_horizon must be at least 1"));
        }
        Ok(())
    }

    /// Per-arm horizons, warning once per capped arm.
    pub fn horizons(&self, arms: &[ArmModel]) -> Vec<usize> {
        arm_horizons(arms, self.epsilon, self.max_horizon)
    }
}

/// Posterior over one arm's current latent mean `theta_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ArmBelief {
    Discrete(DiscreteDist),
    Gaussian { mean: f64, var: f64 },
}

impl ArmBelief {
    /// The belief before any observation: the arm's stationary distribution.
    pub fn prior(arm: &ArmModel) -> Self {
        match arm {
            ArmModel::Bernoulli { prior, .. } => ArmBelief::Discrete(prior.clone()),
            ArmModel::Gaussian(g) => ArmBelief::Gaussian { mean: g.init_mean, var: g.init_var },
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            ArmBelief::Discrete(d) => d.mean(),
            ArmBelief::Gaussian { mean, .. } => *mean,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        match self {
            ArmBelief::Discrete(d) => d.is_degenerate(),
            ArmBelief::Gaussian { var, .. } => *var == 0.0,
        }
    }

    /// Conditions on a reward emitted from `theta_t`.
    pub fn observe(&self, arm: &ArmModel, reward: f64) -> Result<Self> {
        match (self, arm) {
            (ArmBelief::Discrete(d), ArmModel::Bernoulli { .. }) => Ok(ArmBelief::Discrete(bernoulli_update(d, reward)?)),
            (ArmBelief::Gaussian { mean, var }, ArmModel::Gaussian(g)) => {
                let (mean, var) = kalman_update(*mean, *var, reward, g.sigma_sq)?;
                Ok(ArmBelief::Gaussian { mean, var })
            }
            _ => Err(contract("belief kind does not match arm kind")),
        }
    }

    /// Propagates `theta_t -> theta_{t+1}` through the arm's dynamics.
    pub fn transition(&self, arm: &ArmModel) -> Result<Self> {
        match (self, arm) {
            (ArmBelief::Discrete(d), ArmModel::Bernoulli { q, prior }) => {
                Ok(ArmBelief::Discrete(mix_with_prior(d, *q, prior)?))
            }
            (ArmBelief::Gaussian { mean, var }, ArmModel::Gaussian(g)) => {
                let (mean, var) = kalman_step(*mean, *var, g.gamma, g.delta_sq);
                Ok(ArmBelief::Gaussian { mean, var })
            }
            _ => Err(contract("belief kind does not match arm kind")),
        }
    }
}

/// Smallest `N >= 1` with `persistence^N <= epsilon`, capped at
/// `max_horizon`. Returns whether the cap was applied.
pub fn truncation_horizon(persistence: f64, epsilon: f64, max_horizon: usize) -> (usize, bool) {
    let max_horizon = max_horizon.max(1);
    if persistence <= epsilon {
        return (1, false);
    }
    if persistence >= 1.0 {
        return (max_horizon, true);
    }
    let mut n = (epsilon.ln() / persistence.ln()).ceil().max(1.0) as usize;
    while n > 1 && persistence.powi(n as i32 - 1) <= epsilon {
        n -= 1;
    }
    while persistence.powi(n as i32) > epsilon {
        n += 1;
    }
    if n > max_horizon {
        (max_horizon, true)
    } else {
        (n, false)
    }
}

/// Per-arm truncation horizons; logs a warning when an arm hits the cap.
pub fn arm_horizons(arms: &[ArmModel], epsilon: f64, max_horizon: usize) -> Vec<usize> {
    arms.iter()
        .enumerate()
        .map(|(i, arm)| {
            let (n, capped) = truncation_horizon(arm.persistence(), epsilon, max_horizon);
            if capped {
                log::warn!(
                    "arm {i}: persistence {} needs more than {max_horizon} future steps for epsilon {epsilon}; truncating at {n}",
                    arm.persistence()
                );
            }
            n
        })
        .collect()
}
