//! Thompson sampling, predictive sampling (sampled-future and AR(1) closed
//! form) and a uniform-random control.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::domain::{argmax_uniform, ActionId, Policy};
use crate::envs::ArmModel;
use crate::error::{config, contract, Result};
use crate::inference::{
    ar1_ps_conditional_finite, ar1_ps_variance, sample_arm_future, sample_theta, smooth_mean, ArmBelief, Truncation,
};
use crate::stream::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    /// Thompson sampling.
    Ts,
    /// Predictive sampling through a sampled future reward path.
    Ps,
    /// Predictive sampling with the AR(1) Gaussian closed form.
    PsClosedForm,
    Uniform,
}

impl AgentKind {
    pub fn name(self) -> &'static str {
        match self {
            AgentKind::Ts => "ts",
            AgentKind::Ps => "ps",
            AgentKind::PsClosedForm => "ps_closed_form",
            AgentKind::Uniform => "uniform",
        }
    }
}

/// Policy kind, per-arm beliefs, the true arm dynamics and the per-arm
/// truncation horizons used by predictive sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    kind: AgentKind,
    arms: Vec<ArmModel>,
    beliefs: Vec<ArmBelief>,
    horizons: Vec<usize>,
}

impl AgentState {
    pub fn new(kind: AgentKind, arms: Vec<ArmModel>, truncation: &Truncation) -> Result<Self> {
        truncation.validate()?;
        let horizons = truncation.horizons(&arms);
        Self::with_horizons(kind, arms, horizons)
    }

    /// Builds an agent with explicit per-arm truncation horizons.
    pub fn with_horizons(kind: AgentKind, arms: Vec<ArmModel>, horizons: Vec<usize>) -> Result<Self> {
        if arms.is_empty() {
            return Err(config("agent needs at least one arm"));
        }
        if horizons.len() != arms.len() || horizons.contains(&0) {
            return Err(config("need one positive truncation horizon per arm"));
        }
        for arm in &arms {
            arm.validate()?;
        }
        if kind == AgentKind::PsClosedForm && arms.iter().any(|a| !matches!(a, ArmModel::Gaussian(_))) {
            return Err(config("ps_closed_form requires every arm to be Gaussian"));
        }
        let beliefs = arms.iter().map(ArmBelief::prior).collect();
        Ok(AgentState { kind, arms, beliefs, horizons })
    }

    /// Replaces the beliefs, e.g. to start from a given posterior.
    pub fn with_beliefs(mut self, beliefs: Vec<ArmBelief>) -> Result<Self> {
        if beliefs.len() != self.arms.len() {
            return Err(contract("one belief per arm required"));
        }
        for (b, a) in beliefs.iter().zip(&self.arms) {
            let matches = matches!(
                (b, a),
                (ArmBelief::Discrete(_), ArmModel::Bernoulli { .. }) | (ArmBelief::Gaussian { .. }, ArmModel::Gaussian(_))
            );
            if !matches {
                return Err(contract("belief kind does not match arm kind"));
            }
        }
        self.beliefs = beliefs;
        Ok(self)
    }

    pub fn kind(&self) -> AgentKind {
        self.kind
    }

    pub fn arms(&self) -> &[ArmModel] {
        &self.arms
    }

    pub fn beliefs(&self) -> &[ArmBelief] {
        &self.beliefs
    }

    pub fn horizons(&self) -> &[usize] {
        &self.horizons
    }

    /// One posterior draw of `theta_t` per arm.
    pub fn ts_sample(&self, rng: &mut RandomStream) -> Vec<f64> {
        self.beliefs.iter().map(|b| sample_theta(b, rng)).collect()
    }

    /// `E[R_{t+1, a} | H_t, sampled R^_{t+2..t+N+1, a}]` for every arm.
    pub fn ps_estimates(&self, rng: &mut RandomStream) -> Result<Vec<f64>> {
        self.beliefs
            .iter()
            .zip(&self.arms)
            .zip(&self.horizons)
            .map(|((b, a), &n)| ps_arm_estimate(b, a, n, rng))
            .collect()
    }

    /// Closed-form draws `N(mu_t, gamma^2 v^2 / (gamma^2 v + x*))` per arm.
    pub fn ps_closed_form_sample(&self, rng: &mut RandomStream) -> Result<Vec<f64>> {
        self.beliefs
            .iter()
            .zip(&self.arms)
            .map(|(b, a)| match (b, a) {
                (ArmBelief::Gaussian { mean, var }, ArmModel::Gaussian(g)) => {
                    let v = ar1_ps_variance(g.gamma, g.delta_sq, g.sigma_sq, *var);
                    if v == 0.0 {
                        Ok(*mean)
                    } else {
                        let z: f64 = rng.sample(StandardNormal);
                        Ok(mean + v.sqrt() * z)
                    }
                }
                _ => Err(contract("closed-form predictive sampling needs Gaussian arms")),
            })
            .collect()
    }
}

/// Predictive-sampling estimate for one arm. Cases in which the future
/// cannot move the estimate skip sampling.
fn ps_arm_estimate(belief: &ArmBelief, arm: &ArmModel, n: usize, rng: &mut RandomStream) -> Result<f64> {
    if belief.is_degenerate() {
        return Ok(belief.mean());
    }
    match (belief, arm) {
        (ArmBelief::Discrete(d), ArmModel::Bernoulli { q, prior }) => {
            if *q == 1.0 {
                return Ok(d.mean());
            }
            let future = sample_arm_future(belief, arm, n, rng);
            smooth_mean(d, &future, *q, prior)
        }
        (ArmBelief::Gaussian { mean, var }, ArmModel::Gaussian(g)) => {
            if g.gamma == 0.0 {
                return Ok(*mean);
            }
            let future = sample_arm_future(belief, arm, n, rng);
            Ok(ar1_ps_conditional_finite(*mean, *var, g, &future, n)?.0)
        }
        _ => Err(contract("belief kind does not match arm kind")),
    }
}

pub fn ts_select(state: &AgentState, rng: &mut RandomStream) -> Result<ActionId> {
    argmax_uniform(&state.ts_sample(rng), rng)
}

pub fn ps_select_generic(state: &AgentState, rng: &mut RandomStream) -> Result<ActionId> {
    let est = state.ps_estimates(rng)?;
    argmax_uniform(&est, rng)
}

pub fn ps_select_ar1(state: &AgentState, rng: &mut RandomStream) -> Result<ActionId> {
    let est = state.ps_closed_form_sample(rng)?;
    argmax_uniform(&est, rng)
}

pub fn uniform_select(state: &AgentState, rng: &mut RandomStream) -> ActionId {
    ActionId(rng.random_range(0..state.arms.len()))
}

/// Conditions the played arm on its reward, then moves every arm's belief
/// one step forward through its dynamics.
pub fn observe(mut state: AgentState, action: ActionId, reward: f64) -> Result<AgentState> {
    Policy::observe(&mut state, action, reward)?;
    Ok(state)
}

impl Policy for AgentState {
    fn num_arms(&self) -> usize {
        self.arms.len()
    }

    fn select(&self, rng: &mut RandomStream) -> Result<ActionId> {
        match self.kind {
            AgentKind::Ts => ts_select(self, rng),
            AgentKind::Ps => ps_select_generic(self, rng),
            AgentKind::PsClosedForm => ps_select_ar1(self, rng),
            AgentKind::Uniform => Ok(uniform_select(self, rng)),
        }
    }

    fn observe(&mut self, action: ActionId, reward: f64) -> Result<()> {
        let a = ActionId::checked(action.0, self.arms.len())?.index();
        if !reward.is_finite() {
            return Err(contract(format!("non-finite reward {reward}")));
        }
        for (i, (b, arm)) in self.beliefs.iter_mut().zip(&self.arms).enumerate() {
            if i == a {
                *b = b.observe(arm, reward)?;
            }
            *b = b.transition(arm)?;
        }
        Ok(())
    }
}
