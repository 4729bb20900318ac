//! Seeded, parallel Monte Carlo experiments with common random numbers.
//!
//! Run `r` draws its environment from stream `(seed, [0, r])` and agent `i`
//! draws its internal randomness from `(seed, [1 + i, r])`, so every agent
//! in a run faces the same reward matrix. Runs are processed in fixed-size
//! chunks whose aggregates are merged in chunk order, which makes results
//! independent of the thread count.

mod aggregate;
mod config;
mod output;

pub use aggregate::{aggregate, AggregateResult, RunningStats, StepStats};
pub use config::{AgentSpec, EnvKind, EnvironmentSpec, ExperimentConfig, OutputFormat, OutputSpec};
pub use output::{density_rows, write_atomic, write_densities, write_results, DensityRow, RESULTS_HEADER};

use rayon::prelude::*;

use crate::agents::AgentState;
use crate::baseline::{baseline_records, RunResult};
use crate::domain::{Policy, RewardVector};
use crate::envs::{ArmModel, EnvConfig, EnvironmentState};
use crate::error::{Error, Result};
use crate::stream::derive_stream;

const CHUNK: usize = 64;

/// A validated configuration with the derived per-arm quantities.
#[derive(Debug, Clone)]
pub struct Experiment {
    config: ExperimentConfig,
    env: EnvConfig,
    arms: Vec<ArmModel>,
    horizons: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub horizons: Vec<usize>,
    pub agents: Vec<AggregateResult>,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let env = config.environment.to_env()?;
        let arms = env.arms()?;
        let horizons = config.truncation.horizons(&arms);
        Ok(Experiment { config, env, arms, horizons })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn env(&self) -> &EnvConfig {
        &self.env
    }

    pub fn horizons(&self) -> &[usize] {
        &self.horizons
    }

    /// Reward matrix `R_1 .. R_{T+N}` for run `r`.
    pub fn simulate_rewards(&self, run: usize) -> Result<Vec<RewardVector>> {
        let mut rng = derive_stream(self.config.seed, &[0, run as u64]);
        let mut env = EnvironmentState::from_arms(self.arms.clone(), &mut rng)?;
        let steps = self.config.horizon + self.horizons.iter().copied().max().unwrap_or(1);
        Ok((0..steps).map(|_| env.step(&mut rng)).collect())
    }

    /// One run of every configured agent against a shared environment draw.
    pub fn simulate_run(&self, run: usize) -> Result<Vec<RunResult>> {
        let rewards = self.simulate_rewards(run)?;
        let records = baseline_records(&rewards, &self.arms, &self.horizons, self.config.horizon)?;
        let fingerprint = self.config.fingerprint();
        self.config
            .agents
            .iter()
            .enumerate()
            .map(|(i, spec)| {
                let mut agent = AgentState::with_horizons(spec.kind, self.arms.clone(), self.horizons.clone())?;
                let mut rng = derive_stream(self.config.seed, &[1 + i as u64, run as u64]);
                let t_max = self.config.horizon;
                let mut out = RunResult {
                    seed: self.config.seed,
                    config_fingerprint: fingerprint,
                    actions: Vec::with_capacity(t_max),
                    rewards: Vec::with_capacity(t_max),
                    baseline_rewards: Vec::with_capacity(t_max),
                    regret: Vec::with_capacity(t_max),
                };
                for (t, rec) in records.iter().enumerate() {
                    let a = agent.select(&mut rng)?;
                    let r = rewards[t].get(a);
                    agent.observe(a, r)?;
                    out.actions.push(a);
                    out.rewards.push(r);
                    out.baseline_rewards.push(rec.best_reward);
                    out.regret.push(rec.best_reward - r);
                }
                Ok(out)
            })
            .collect()
    }

    fn run_chunk(&self, start: usize, end: usize) -> Result<Vec<AggregateResult>> {
        let mut aggs: Vec<AggregateResult> = self
            .config
            .agents
            .iter()
            .map(|a| AggregateResult::empty(a.kind.name(), self.config.horizon))
            .collect();
        for r in start..end {
            for (agg, run) in aggs.iter_mut().zip(self.simulate_run(r)?) {
                agg.push(&run)?;
            }
        }
        Ok(aggs)
    }

    /// Runs all replications on `threads` workers (0 picks the machine default).
    pub fn run(&self, threads: usize) -> Result<ExperimentResult> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Unsupported(format!("cannot start worker pool: {e}")))?;
        let n = self.config.num_runs;
        let chunks: Vec<(usize, usize)> = (0..n).step_by(CHUNK).map(|s| (s, (s + CHUNK).min(n))).collect();
        let parts: Vec<Vec<AggregateResult>> =
            pool.install(|| chunks.par_iter().map(|&(s, e)| self.run_chunk(s, e)).collect::<Result<_>>())?;
        let mut iter = parts.into_iter();
        let mut total = iter.next().expect("at least one run");
        for part in iter {
            total = total.iter().zip(&part).map(|(a, b)| a.merge(b)).collect::<Result<_>>()?;
        }
        Ok(ExperimentResult { config: self.config.clone(), horizons: self.horizons.clone(), agents: total })
    }
}

pub fn run_experiment(config: &ExperimentConfig, threads: usize) -> Result<ExperimentResult> {
    Experiment::new(config.clone())?.run(threads)
}
