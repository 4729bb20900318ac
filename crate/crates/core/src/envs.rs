//! Bandit environments: samplable latent-state processes emitting a full
//! reward vector every step.
//!
//! Every concrete environment lowers to a list of independent [`ArmModel`]s.
//! Bernoulli arms carry a finite-support prior over the success probability
//! and a reset probability `q` (stationary Bernoulli is `q = 0`). Gaussian
//! arms follow `theta' = gamma * theta + W` with `W ~ N(0, delta_sq)` and
//! observe `theta + Z` with `Z ~ N(0, sigma_sq)` (stationary Gaussian is
//! `gamma = 1, delta_sq = 0`).

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::domain::RewardVector;
use crate::error::{config, Result};
use crate::numerics::PROB_SUM_TOL;
use crate::stream::RandomStream;

/// A probability distribution over finitely many real values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDist {
    support: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(support: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != probs.len() {
            return Err(config(format!(
                "support has {} points but {} probabilities",
                support.len(),
                probs.len()
            )));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(config("probabilities must be finite and non-negative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(config(format!("probabilities sum to {total}, not 1")));
        }
        if support.iter().any(|x| !x.is_finite()) {
            return Err(config("support values must be finite"));
        }
        Ok(DiscreteDist { support, probs })
    }

    pub fn point(x: f64) -> Self {
        DiscreteDist { support: vec![x], probs: vec![1.0] }
    }

    pub fn uniform(support: Vec<f64>) -> Result<Self> {
        let n = support.len();
        Self::new(support, vec![1.0 / n as f64; n])
    }

    /// Builds without the sum check; callers guarantee a normalized, non-negative vector.
    pub(crate) fn from_parts_unchecked(support: Vec<f64>, probs: Vec<f64>) -> Self {
        debug_assert_eq!(support.len(), probs.len());
        DiscreteDist { support, probs }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.support.iter().zip(&self.probs).map(|(x, p)| x * p).sum()
    }

    /// True when all mass sits on a single support point.
    pub fn is_degenerate(&self) -> bool {
        self.probs.iter().filter(|&&p| p > 0.0).count() == 1
    }

    /// Index of a support point drawn by inversion.
    pub fn sample_index(&self, rng: &mut RandomStream) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > 0.0 {
                last_positive = i;
                acc += p;
                if u < acc {
                    return i;
                }
            }
        }
        last_positive
    }

    pub fn sample(&self, rng: &mut RandomStream) -> f64 {
        self.support[self.sample_index(rng)]
    }

    fn check_unit_support(&self) -> Result<()> {
        if self.support.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(config("Bernoulli success probabilities must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Gaussian-reward arm with AR(1) latent mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianArm {
    pub gamma: f64,
    pub delta_sq: f64,
    pub sigma_sq: f64,
    /// Mean of the stationary (and initial) distribution of theta.
    pub init_mean: f64,
    /// Variance of the stationary (and initial) distribution of theta.
    pub init_var: f64,
}

impl GaussianArm {
    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(config(format!("gamma {} outside [0, 1]", self.gamma)));
        }
        if !(self.delta_sq >= 0.0) || !self.delta_sq.is_finite() {
            return Err(config(format!("innovation variance {} must be >= 0", self.delta_sq)));
        }
        if !(self.sigma_sq > 0.0) || !self.sigma_sq.is_finite() {
            return Err(config(format!("noise variance {} must be > 0", self.sigma_sq)));
        }
        if self.gamma == 1.0 && self.delta_sq != 0.0 {
            return Err(config("gamma = 1 requires zero innovation variance"));
        }
        if !(self.init_var >= 0.0) || !self.init_var.is_finite() || !self.init_mean.is_finite() {
            return Err(config("initial distribution must have finite mean and variance >= 0"));
        }
        Ok(())
    }
}

/// One independent arm of an environment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ArmModel {
    /// Bernoulli rewards; theta resets to a fresh prior draw with probability `q` each step.
    Bernoulli { q: f64, prior: DiscreteDist },
    Gaussian(GaussianArm),
}

impl ArmModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            ArmModel::Bernoulli { q, prior } => {
                if !(0.0..=1.0).contains(q) {
                    return Err(config(format!("transition probability {q} outside [0, 1]")));
                }
                prior.check_unit_support()
            }
            ArmModel::Gaussian(g) => g.validate(),
        }
    }

    /// Mean reward under the stationary marginal of theta.
    pub fn stationary_mean(&self) -> f64 {
        match self {
            ArmModel::Bernoulli { prior, .. } => prior.mean(),
            ArmModel::Gaussian(g) => g.init_mean,
        }
    }

    /// Geometric rate at which the influence of a future reward on the current
    /// latent state decays: `1 - q` or `gamma`.
    pub fn persistence(&self) -> f64 {
        match self {
            ArmModel::Bernoulli { q, .. } => 1.0 - q,
            ArmModel::Gaussian(g) => g.gamma,
        }
    }

    fn sample_initial(&self, rng: &mut RandomStream) -> f64 {
        match self {
            ArmModel::Bernoulli { prior, .. } => prior.sample(rng),
            ArmModel::Gaussian(g) => {
                if g.init_var == 0.0 {
                    g.init_mean
                } else {
                    let z: f64 = rng.sample(StandardNormal);
                    g.init_mean + g.init_var.sqrt() * z
                }
            }
        }
    }

    /// Draws `R_{t+1}` given `theta_t`.
    pub fn sample_reward(&self, theta: f64, rng: &mut RandomStream) -> f64 {
        match self {
            ArmModel::Bernoulli { .. } => {
                if rng.random::<f64>() < theta {
                    1.0
                } else {
                    0.0
                }
            }
            ArmModel::Gaussian(g) => {
                let z: f64 = rng.sample(StandardNormal);
                theta + g.sigma_sq.sqrt() * z
            }
        }
    }

    /// Draws `theta_{t+1}` given `theta_t`.
    pub fn sample_transition(&self, theta: f64, rng: &mut RandomStream) -> f64 {
        match self {
            ArmModel::Bernoulli { q, prior } => {
                if *q > 0.0 && rng.random::<f64>() < *q {
                    prior.sample(rng)
                } else {
                    theta
                }
            }
            ArmModel::Gaussian(g) => {
                if g.delta_sq == 0.0 {
                    g.gamma * theta
                } else {
                    let w: f64 = rng.sample(StandardNormal);
                    g.gamma * theta + g.delta_sq.sqrt() * w
                }
            }
        }
    }
}

/// Stationary Bernoulli bandit: per-arm finite prior over the success probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryBernoulliConfig {
    pub priors: Vec<DiscreteDist>,
}

/// Per-arm parameters of a stationary Gaussian bandit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryGaussianArm {
    pub prior_mean: f64,
    pub prior_var: f64,
    pub noise_var: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryGaussianConfig {
    pub arms: Vec<StationaryGaussianArm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulatedArm {
    pub q: f64,
    pub prior: DiscreteDist,
}

/// Modulated Bernoulli bandit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulatedBernoulliConfig {
    pub arms: Vec<ModulatedArm>,
}

/// One arm of an AR(1) bandit. `fixed_mean` is required when `gamma = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ar1ArmConfig {
    pub gamma: f64,
    pub delta_sq: f64,
    pub sigma_sq: f64,
    pub fixed_mean: Option<f64>,
}

impl Ar1ArmConfig {
    pub fn to_arm(&self) -> Result<GaussianArm> {
        let (init_mean, init_var) = if self.gamma == 1.0 {
            if self.delta_sq != 0.0 {
                return Err(config("AR(1) arm with gamma = 1 requires delta_sq = 0"));
            }
            let m = self
                .fixed_mean
                .ok_or_else(|| config("AR(1) arm with gamma = 1 requires a fixed initial mean"))?;
            (m, 0.0)
        } else {
            if self.fixed_mean.is_some() {
                return Err(config(
                    "fixed_mean is only valid for gamma = 1; other arms start from the steady state",
                ));
            }
            (0.0, self.delta_sq / (1.0 - self.gamma * self.gamma))
        };
        let arm = GaussianArm {
            gamma: self.gamma,
            delta_sq: self.delta_sq,
            sigma_sq: self.sigma_sq,
            init_mean,
            init_var,
        };
        arm.validate()?;
        Ok(arm)
    }
}

/// The environment families supported by the simulator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EnvConfig {
    StationaryBernoulli(StationaryBernoulliConfig),
    StationaryGaussian(StationaryGaussianConfig),
    ModulatedBernoulli(ModulatedBernoulliConfig),
    Ar1(Vec<Ar1ArmConfig>),
}

impl EnvConfig {
    /// Lowers to validated per-arm models.
    pub fn arms(&self) -> Result<Vec<ArmModel>> {
        let arms: Vec<ArmModel> = match self {
            EnvConfig::StationaryBernoulli(c) => c
                .priors
                .iter()
                .map(|p| ArmModel::Bernoulli { q: 0.0, prior: p.clone() })
                .collect(),
            EnvConfig::StationaryGaussian(c) => c
                .arms
                .iter()
                .map(|a| {
                    ArmModel::Gaussian(GaussianArm {
                        gamma: 1.0,
                        delta_sq: 0.0,
                        sigma_sq: a.noise_var,
                        init_mean: a.prior_mean,
                        init_var: a.prior_var,
                    })
                })
                .collect(),
            EnvConfig::ModulatedBernoulli(c) => c
                .arms
                .iter()
                .map(|a| ArmModel::Bernoulli { q: a.q, prior: a.prior.clone() })
                .collect(),
            EnvConfig::Ar1(arms) => arms
                .iter()
                .map(|a| a.to_arm().map(ArmModel::Gaussian))
                .collect::<Result<_>>()?,
        };
        if arms.is_empty() {
            return Err(config("environment needs at least one arm"));
        }
        for arm in &arms {
            arm.validate()?;
        }
        Ok(arms)
    }

    pub fn num_arms(&self) -> usize {
        match self {
            EnvConfig::StationaryBernoulli(c) => c.priors.len(),
            EnvConfig::StationaryGaussian(c) => c.arms.len(),
            EnvConfig::ModulatedBernoulli(c) => c.arms.len(),
            EnvConfig::Ar1(a) => a.len(),
        }
    }
}

/// The latent mean vector `theta_t` together with the static arm parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentState {
    arms: Vec<ArmModel>,
    theta: Vec<f64>,
    t: u64,
}

/// Samples `theta_0` from each arm's stationary distribution.
pub fn env_init(config: &EnvConfig, rng: &mut RandomStream) -> Result<EnvironmentState> {
    EnvironmentState::from_arms(config.arms()?, rng)
}

/// Emits `R_{t+1}` from `theta_t`, then advances to `theta_{t+1}`.
pub fn env_step(mut state: EnvironmentState, rng: &mut RandomStream) -> (RewardVector, EnvironmentState) {
    let r = state.step(rng);
    (r, state)
}

impl EnvironmentState {
    pub fn from_arms(arms: Vec<ArmModel>, rng: &mut RandomStream) -> Result<Self> {
        if arms.is_empty() {
            return Err(config("environment needs at least one arm"));
        }
        for arm in &arms {
            arm.validate()?;
        }
        let theta = arms.iter().map(|a| a.sample_initial(rng)).collect();
        Ok(EnvironmentState { arms, theta, t: 0 })
    }

    pub fn step(&mut self, rng: &mut RandomStream) -> RewardVector {
        let rewards: Vec<f64> = self
            .arms
            .iter()
            .zip(&self.theta)
            .map(|(arm, &th)| arm.sample_reward(th, rng))
            .collect();
        for (arm, th) in self.arms.iter().zip(self.theta.iter_mut()) {
            *th = arm.sample_transition(*th, rng);
        }
        self.t += 1;
        RewardVector::from_finite(rewards)
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn arms(&self) -> &[ArmModel] {
        &self.arms
    }

    pub fn time(&self) -> u64 {
        self.t
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }
}

/// Exact joint `P(theta_0 = x_i, theta_1 = x_j)` of a modulated arm started
/// from its prior.
pub fn modulated_pair_joint(q: f64, prior: &DiscreteDist) -> Vec<Vec<f64>> {
    let p = prior.probs();
    (0..p.len())
        .map(|i| {
            (0..p.len())
                .map(|j| p[i] * ((1.0 - q) * f64::from(u8::from(i == j)) + q * p[j]))
                .collect()
        })
        .collect()
}
