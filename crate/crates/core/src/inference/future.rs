//! Posterior-predictive sampling of future reward paths.

use rand::Rng;
use rand_distr::StandardNormal;

use super::ArmBelief;
use crate::envs::ArmModel;
use crate::error::{contract, Result};
use crate::stream::RandomStream;

/// A sampled future `R^_{t+2..t+N+1}` for each arm. Arms may use different
/// truncation lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct FutureSample {
    pub paths: Vec<Vec<f64>>,
}

impl FutureSample {
    pub fn horizon(&self, arm: usize) -> usize {
        self.paths[arm].len()
    }
}

/// Draws `theta_t` from the arm's belief.
pub fn sample_theta(belief: &ArmBelief, rng: &mut RandomStream) -> f64 {
    match belief {
        ArmBelief::Discrete(d) => d.sample(rng),
        ArmBelief::Gaussian { mean, var } => {
            if *var == 0.0 {
                *mean
            } else {
                let z: f64 = rng.sample(StandardNormal);
                mean + var.sqrt() * z
            }
        }
    }
}

/// Samples one arm's future: draw `theta_t`, roll the chain forward, and emit
/// `R^_{t+k+1}` from `theta_{t+k}` for `k = 1..=n`.
pub fn sample_arm_future(belief: &ArmBelief, arm: &ArmModel, n: usize, rng: &mut RandomStream) -> Vec<f64> {
    let mut theta = sample_theta(belief, rng);
    (0..n)
        .map(|_| {
            theta = arm.sample_transition(theta, rng);
            arm.sample_reward(theta, rng)
        })
        .collect()
}

pub fn sample_future(
    beliefs: &[ArmBelief],
    arms: &[ArmModel],
    horizons: &[usize],
    rng: &mut RandomStream,
) -> Result<FutureSample> {
    if beliefs.len() != arms.len() || horizons.len() != arms.len() {
        return Err(contract("beliefs, arms and horizons must have equal length"));
    }
    if horizons.contains(&0) {
        return Err(contract("future horizon must be at least 1"));
    }
    let paths = beliefs
        .iter()
        .zip(arms)
        .zip(horizons)
        .map(|((b, a), &n)| sample_arm_future(b, a, n, rng))
        .collect();
    Ok(FutureSample { paths })
}
