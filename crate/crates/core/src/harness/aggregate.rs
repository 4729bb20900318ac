//! Streaming mean/variance with exact pairwise merging.

use serde::{Deserialize, Serialize};

use crate::baseline::RunResult;
use crate::error::{contract, Result};

/// Count, mean and sum of squared deviations of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RunningStats {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Combines two disjoint samples.
    pub fn merge(&self, other: &RunningStats) -> RunningStats {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let (na, nb) = (self.n as f64, other.n as f64);
        RunningStats {
            n,
            mean: self.mean + d * nb / n as f64,
            m2: self.m2 + other.m2 + d * d * na * nb / n as f64,
        }
    }

    /// Sample variance; zero for fewer than two observations.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// `sd / sqrt(n)`; zero for fewer than two observations.
    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

/// Per-timestep statistics for one agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    pub reward: RunningStats,
    pub baseline: RunningStats,
    pub regret: RunningStats,
    pub cum_regret: RunningStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    pub agent: String,
    pub steps: Vec<StepStats>,
}

impl AggregateResult {
    pub fn empty(agent: &str, horizon: usize) -> Self {
        let z = RunningStats::default();
        AggregateResult {
            agent: agent.to_string(),
            steps: vec![StepStats { reward: z, baseline: z, regret: z, cum_regret: z }; horizon],
        }
    }

    pub fn num_runs(&self) -> u64 {
        self.steps.first().map_or(0, |s| s.reward.n)
    }

    /// Standard errors are reported as zero when only one run was aggregated.
    pub fn stderr_is_degenerate(&self) -> bool {
        self.num_runs() < 2
    }

    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    pub fn push(&mut self, run: &RunResult) -> Result<()> {
        if run.horizon() != self.steps.len()
            || run.rewards.len() != run.horizon()
            || run.baseline_rewards.len() != run.horizon()
            || run.regret.len() != run.horizon()
        {
            return Err(contract("run length does not match the aggregate horizon"));
        }
        let mut cum = 0.0;
        for (t, s) in self.steps.iter_mut().enumerate() {
            cum += run.regret[t];
            s.reward.push(run.rewards[t]);
            s.baseline.push(run.baseline_rewards[t]);
            s.regret.push(run.regret[t]);
            s.cum_regret.push(cum);
        }
        Ok(())
    }

    pub fn merge(&self, other: &AggregateResult) -> Result<AggregateResult> {
        if self.steps.len() != other.steps.len() {
            return Err(contract("cannot merge aggregates with different horizons"));
        }
        let steps = self
            .steps
            .iter()
            .zip(&other.steps)
            .map(|(a, b)| StepStats {
                reward: a.reward.merge(&b.reward),
                baseline: a.baseline.merge(&b.baseline),
                regret: a.regret.merge(&b.regret),
                cum_regret: a.cum_regret.merge(&b.cum_regret),
            })
            .collect();
        Ok(AggregateResult { agent: self.agent.clone(), steps })
    }

    /// Mean cumulative regret and its standard error at the last step.
    pub fn final_cum_regret(&self) -> (f64, f64) {
        self.steps.last().map_or((0.0, 0.0), |s| (s.cum_regret.mean, s.cum_regret.stderr()))
    }

    /// Mean per-step reward over the whole horizon.
    pub fn mean_reward_per_step(&self) -> f64 {
        self.steps.iter().map(|s| s.reward.mean).sum::<f64>() / self.steps.len().max(1) as f64
    }
}

/// Aggregates equal-length runs of one agent.
pub fn aggregate(agent: &str, runs: &[RunResult]) -> Result<AggregateResult> {
    let first = runs.first().ok_or_else(|| contract("cannot aggregate zero runs"))?;
    let mut agg = AggregateResult::empty(agent, first.horizon());
    for r in runs {
        agg.push(r)?;
    }
    Ok(agg)
}
