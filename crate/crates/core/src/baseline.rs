//! The almost-clairvoyant baseline `theta_bar_t = E[R_{t+1} | R_{t+2..t+N+1}]`
//! and per-run regret.

use serde::{Deserialize, Serialize};

use crate::domain::{argmax_set, ActionId, RewardVector};
use crate::envs::ArmModel;
use crate::error::{contract, Result};
use crate::inference::{kalman_step, kalman_update, smooth_mean};

/// Baseline quantities at one timestep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClairvoyantRecord {
    pub theta_bar: Vec<f64>,
    /// Lowest-index maximizer of `theta_bar`.
    pub best: ActionId,
    /// `R_{t+1, best}`.
    pub best_reward: f64,
}

/// One simulated run of one agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub seed: u64,
    pub config_fingerprint: u64,
    pub actions: Vec<ActionId>,
    pub rewards: Vec<f64>,
    pub baseline_rewards: Vec<f64>,
    pub regret: Vec<f64>,
}

impl RunResult {
    pub fn horizon(&self) -> usize {
        self.actions.len()
    }
}

/// Per-arm `E[R_{t+1, a} | R_{t+2..t+N_a+1, a}]`, where `rewards[k]` holds
/// `R_{k+1}`. Conditions on nothing but the future window, starting from the
/// stationary marginal of each arm.
pub fn clairvoyant_mean(rewards: &[RewardVector], arms: &[ArmModel], horizons: &[usize], t: usize) -> Result<Vec<f64>> {
    if horizons.len() != arms.len() {
        return Err(contract("one truncation horizon per arm required"));
    }
    arms.iter()
        .zip(horizons)
        .enumerate()
        .map(|(a, (arm, &n))| {
            if rewards.len() < t + 1 + n {
                return Err(contract(format!(
                    "baseline at t = {t} needs {} reward vectors, only {} simulated",
                    t + 1 + n,
                    rewards.len()
                )));
            }
            let window: Vec<f64> = rewards[t + 1..t + 1 + n].iter().map(|r| r.values()[a]).collect();
            arm_clairvoyant_mean(arm, &window)
        })
        .collect()
}

/// `E[R_{t+1} | window]` for one arm, with `window[k] = R_{t+k+2}`.
pub fn arm_clairvoyant_mean(arm: &ArmModel, window: &[f64]) -> Result<f64> {
    match arm {
        ArmModel::Bernoulli { q, prior } => {
            if prior.is_degenerate() || *q == 1.0 || window.is_empty() {
                Ok(prior.mean())
            } else {
                smooth_mean(prior, window, *q, prior)
            }
        }
        ArmModel::Gaussian(g) => {
            // The stationary chain is reversible, so run the filter backwards in time.
            let (mut mean, mut var) = (g.init_mean, g.init_var);
            for &r in window.iter().rev() {
                (mean, var) = kalman_update(mean, var, r, g.sigma_sq)?;
                (mean, var) = kalman_step(mean, var, g.gamma, g.delta_sq);
            }
            Ok(mean)
        }
    }
}

pub fn clairvoyant_record(
    rewards: &[RewardVector],
    arms: &[ArmModel],
    horizons: &[usize],
    t: usize,
) -> Result<ClairvoyantRecord> {
    let theta_bar = clairvoyant_mean(rewards, arms, horizons, t)?;
    let best = ActionId(argmax_set(&theta_bar)?[0]);
    let best_reward = rewards[t].get(best);
    Ok(ClairvoyantRecord { theta_bar, best, best_reward })
}

/// Baseline records for `t = 0..horizon`.
pub fn baseline_records(
    rewards: &[RewardVector],
    arms: &[ArmModel],
    horizons: &[usize],
    horizon: usize,
) -> Result<Vec<ClairvoyantRecord>> {
    (0..horizon).map(|t| clairvoyant_record(rewards, arms, horizons, t)).collect()
}

/// Cumulative regret `sum_{s <= t} (R_{s+1,*} - R_{s+1,A_s})`.
pub fn compute_regret(run: &RunResult) -> Vec<f64> {
    run.regret
        .iter()
        .scan(0.0, |acc, r| {
            *acc += r;
            Some(*acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::{Ar1ArmConfig, DiscreteDist, EnvironmentState};
    use crate::inference::ar1_ps_conditional_finite;
    use crate::stream::derive_stream;

    fn simulate(arms: &[ArmModel], steps: usize, seed: u64) -> Vec<RewardVector> {
        let mut rng = derive_stream(seed, &[]);
        let mut env = EnvironmentState::from_arms(arms.to_vec(), &mut rng).unwrap();
        (0..steps).map(|_| env.step(&mut rng)).collect()
    }

    #[test]
    fn gap_instance_baseline_is_constant() {
        let arms = vec![
            ArmModel::Bernoulli { q: 0.0, prior: DiscreteDist::point(0.9) },
            ArmModel::Bernoulli { q: 1.0, prior: DiscreteDist::uniform(vec![0.0, 1.0]).unwrap() },
        ];
        let rewards = simulate(&arms, 40, 1);
        for t in 0..20 {
            let rec = clairvoyant_record(&rewards, &arms, &[20, 1], t).unwrap();
            assert_eq!(rec.theta_bar, vec![0.9, 0.5]);
            assert_eq!(rec.best, ActionId(0));
        }
    }

    #[test]
    fn single_future_success_gives_three_quarters() {
        let arm = ArmModel::Bernoulli { q: 0.5, prior: DiscreteDist::uniform(vec![0.0, 1.0]).unwrap() };
        assert!((arm_clairvoyant_mean(&arm, &[1.0]).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn frozen_binary_arm_is_identified_by_its_future() {
        let arm = ArmModel::Bernoulli { q: 0.0, prior: DiscreteDist::uniform(vec![0.0, 1.0]).unwrap() };
        for seed in 0..20 {
            let rewards = simulate(std::slice::from_ref(&arm), 202, seed);
            let theta_bar = clairvoyant_mean(&rewards, std::slice::from_ref(&arm), &[200], 0).unwrap()[0];
            let theta = rewards[0].values()[0];
            assert!((theta_bar - theta).abs() < 0.01);
        }
        let arm = ArmModel::Bernoulli { q: 0.0, prior: DiscreteDist::uniform(vec![0.2, 0.8]).unwrap() };
        let ones = vec![1.0; 200];
        assert!((arm_clairvoyant_mean(&arm, &ones).unwrap() - 0.8).abs() < 0.01);
    }

    #[test]
    fn reverse_filter_matches_direct_conditioning() {
        for (gamma, fixed) in [(0.0, None), (0.5, None), (0.9, None), (0.999, None), (1.0, Some(1.0))] {
            let cfg = Ar1ArmConfig { gamma, delta_sq: if gamma < 1.0 { 1.0 - gamma * gamma } else { 0.0 }, sigma_sq: 1.0, fixed_mean: fixed };
            let g = cfg.to_arm().unwrap();
            let arm = ArmModel::Gaussian(g);
            let rewards = simulate(std::slice::from_ref(&arm), 60, 3);
            let window: Vec<f64> = rewards[1..41].iter().map(|r| r.values()[0]).collect();
            let reverse = arm_clairvoyant_mean(&arm, &window).unwrap();
            let (direct, _) = ar1_ps_conditional_finite(g.init_mean, g.init_var, &g, &window, 40).unwrap();
            assert!((reverse - direct).abs() < 1e-10, "gamma {gamma}: {reverse} vs {direct}");
        }
    }

    #[test]
    fn oracle_policy_has_zero_regret() {
        let arms = vec![
            ArmModel::Bernoulli { q: 0.3, prior: DiscreteDist::uniform(vec![0.1, 0.9]).unwrap() },
            ArmModel::Bernoulli { q: 0.1, prior: DiscreteDist::uniform(vec![0.4, 0.6]).unwrap() },
        ];
        let horizons = [30, 30];
        let rewards = simulate(&arms, 80, 4);
        let recs = baseline_records(&rewards, &arms, &horizons, 50).unwrap();
        let run = RunResult {
            seed: 4,
            config_fingerprint: 0,
            actions: recs.iter().map(|r| r.best).collect(),
            rewards: recs.iter().map(|r| r.best_reward).collect(),
            baseline_rewards: recs.iter().map(|r| r.best_reward).collect(),
            regret: vec![0.0; 50],
        };
        assert!(compute_regret(&run).iter().all(|&c| c == 0.0));
        assert_eq!(run.horizon(), 50);
    }

    #[test]
    fn short_window_is_a_contract_violation() {
        let arms = vec![ArmModel::Bernoulli { q: 0.5, prior: DiscreteDist::uniform(vec![0.0, 1.0]).unwrap() }];
        let rewards = simulate(&arms, 5, 5);
        assert!(clairvoyant_mean(&rewards, &arms, &[5], 0).is_err());
        assert!(clairvoyant_mean(&rewards, &arms, &[4], 0).is_ok());
    }

    #[test]
    fn regret_partial_sums() {
        let run = RunResult {
            seed: 0,
            config_fingerprint: 0,
            actions: vec![ActionId(0); 3],
            rewards: vec![0.0; 3],
            baseline_rewards: vec![1.0, 0.0, 1.0],
            regret: vec![1.0, -1.0, 1.0],
        };
        assert_eq!(compute_regret(&run), vec![1.0, 0.0, 1.0]);
    }
}
