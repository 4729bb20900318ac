//! Brute-force exact computation on tiny modulated Bernoulli instances.
//!
//! Every quantity is obtained by enumerating latent paths, reward outcomes,
//! future windows and action branches. Posteriors come from explicit
//! per-arm path sums rather than from the filter, so the oracle can serve as
//! an independent reference for it. Arms factorize: priors are independent
//! and each observation depends only on its own arm's latent state.

use serde::Serialize;

use crate::domain::ActionId;
use crate::envs::{DiscreteDist, EnvConfig, ModulatedBernoulliConfig};
use crate::error::{contract, Error, Result};
use crate::infotheory::{entropy, mutual_information, FiniteJoint};
use crate::numerics::{IDENTITY_TOL, ORACLE_BUDGET};

pub const MAX_SUPPORT: usize = 3;
pub const MAX_HORIZON: usize = 4;
pub const MAX_FUTURE: usize = 3;

/// Information below this level counts as zero in the information ratio.
const ZERO_INFO: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct TinyInstance {
    pub config: ModulatedBernoulliConfig,
    pub horizon: usize,
    /// Length of the future window used by predictive sampling, the baseline
    /// and the information-ratio target.
    pub n_or: usize,
}

impl TinyInstance {
    pub fn new(config: ModulatedBernoulliConfig, horizon: usize, n_or: usize) -> Result<Self> {
        if config.arms.is_empty() {
            return Err(contract("instance needs at least one arm"));
        }
        EnvConfig::ModulatedBernoulli(config.clone()).arms()?;
        if let Some(a) = config.arms.iter().position(|a| a.prior.len() > MAX_SUPPORT) {
            return Err(contract(format!("arm {a} has more than {MAX_SUPPORT} support points")));
        }
        if horizon == 0 || horizon > MAX_HORIZON {
            return Err(contract(format!("horizon must lie in 1..={MAX_HORIZON}")));
        }
        if n_or == 0 || n_or > MAX_FUTURE {
            return Err(contract(format!("future window must lie in 1..={MAX_FUTURE}")));
        }
        let inst = TinyInstance { config, horizon, n_or };
        let size = inst.enumeration_size();
        if size > ORACLE_BUDGET {
            return Err(Error::Budget { size, budget: ORACLE_BUDGET });
        }
        Ok(inst)
    }

    /// Builds from an environment config (stationary Bernoulli is `q = 0`).
    pub fn from_env(env: &EnvConfig, horizon: usize, n_or: usize) -> Result<Self> {
        let config = match env {
            EnvConfig::ModulatedBernoulli(c) => c.clone(),
            EnvConfig::StationaryBernoulli(c) => ModulatedBernoulliConfig {
                arms: c
                    .priors
                    .iter()
                    .map(|p| crate::envs::ModulatedArm { q: 0.0, prior: p.clone() })
                    .collect(),
            },
            _ => return Err(Error::Unsupported("the oracle needs a Bernoulli environment".into())),
        };
        Self::new(config, horizon, n_or)
    }

    /// `sum_a s_a^(T + N + 1) 2^N * (2A)^T`.
    pub fn enumeration_size(&self) -> u128 {
        let t = self.horizon as u32;
        let n = self.n_or as u32;
        let per_arm: u128 = self
            .config
            .arms
            .iter()
            .map(|a| (a.prior.len() as u128).pow(t + n + 1) * 2u128.pow(n))
            .sum();
        per_arm * (2 * self.config.arms.len() as u128).pow(t)
    }

    pub fn num_arms(&self) -> usize {
        self.config.arms.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactPolicy {
    Ts,
    /// Predictive sampling with the instance's future window.
    Ps,
    Uniform,
}

/// Per-arm model quantities.
struct ArmSpec {
    x: Vec<f64>,
    p: Vec<f64>,
    q: f64,
}

impl ArmSpec {
    fn s(&self) -> usize {
        self.x.len()
    }

    fn kernel(&self, i: usize, j: usize) -> f64 {
        (1.0 - self.q) * f64::from(u8::from(i == j)) + self.q * self.p[j]
    }

    fn lik(&self, i: usize, r: u8) -> f64 {
        if r == 1 {
            self.x[i]
        } else {
            1.0 - self.x[i]
        }
    }

    /// `g[i][f] = P(R_{t+2..t+N+1} = f | theta_t = i)` by enumerating `theta_{t+1..t+N}`.
    fn future_likelihoods(&self, n: usize) -> Vec<Vec<f64>> {
        let s = self.s();
        let mut g = vec![vec![0.0; 1 << n]; s];
        for (i, gi) in g.iter_mut().enumerate() {
            for path in 0..s.pow(n as u32) {
                let states: Vec<usize> = (0..n).map(|k| path / s.pow((n - 1 - k) as u32) % s).collect();
                let mut w = 1.0;
                let mut prev = i;
                for &st in &states {
                    w *= self.kernel(prev, st);
                    prev = st;
                }
                if w == 0.0 {
                    continue;
                }
                for (f, gf) in gi.iter_mut().enumerate() {
                    let mut l = w;
                    for (k, &st) in states.iter().enumerate() {
                        l *= self.lik(st, ((f >> (n - 1 - k)) & 1) as u8);
                    }
                    *gf += l;
                }
            }
        }
        g
    }

    /// Outcomes `(E[theta_t | window], P(window))` for a distribution `w` over `theta_t`.
    fn window_estimates(&self, w: &[f64], g: &[Vec<f64>]) -> Vec<(f64, f64)> {
        (0..g[0].len())
            .filter_map(|f| {
                let pf: f64 = (0..self.s()).map(|i| w[i] * g[i][f]).sum();
                if pf > 0.0 {
                    let num: f64 = (0..self.s()).map(|i| self.x[i] * w[i] * g[i][f]).sum();
                    Some((num / pf, pf))
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Joint weights of latent paths `theta_{0..t}` of one arm, together with
/// the rewards observed on it so far. Index is the path in base `s`.
#[derive(Clone)]
struct ArmPaths {
    len: usize,
    w: Vec<f64>,
}

impl ArmPaths {
    fn start(arm: &ArmSpec) -> Self {
        ArmPaths { len: 1, w: arm.p.clone() }
    }

    fn observe(&mut self, arm: &ArmSpec, r: u8) {
        let s = arm.s();
        for (idx, w) in self.w.iter_mut().enumerate() {
            *w *= arm.lik(idx % s, r);
        }
    }

    fn extend(&self, arm: &ArmSpec) -> Self {
        let s = arm.s();
        let mut w = vec![0.0; self.w.len() * s];
        for (idx, &wi) in self.w.iter().enumerate() {
            for j in 0..s {
                w[idx * s + j] = wi * arm.kernel(idx % s, j);
            }
        }
        ArmPaths { len: self.len + 1, w }
    }

    fn total(&self) -> f64 {
        self.w.iter().sum()
    }

    /// Posterior over the current state.
    fn current(&self, arm: &ArmSpec) -> Vec<f64> {
        let s = arm.s();
        let mut out = vec![0.0; s];
        for (idx, &w) in self.w.iter().enumerate() {
            out[idx % s] += w;
        }
        let z = self.total();
        out.iter().map(|v| v / z).collect()
    }

    /// Posterior joint over (previous state, current state), row-major.
    fn last_pair(&self, arm: &ArmSpec) -> Vec<f64> {
        let s = arm.s();
        let mut out = vec![0.0; s * s];
        for (idx, &w) in self.w.iter().enumerate() {
            out[(idx / s % s) * s + idx % s] += w;
        }
        let z = self.total();
        out.iter().map(|v| v / z).collect()
    }
}

/// Probability that each arm attains the maximum, with uniform tie-breaking,
/// when arm `a`'s value is drawn from `outcomes[a]` independently.
fn argmax_probabilities(outcomes: &[Vec<(f64, f64)>]) -> Vec<f64> {
    let k = outcomes.len();
    let mut probs = vec![0.0; k];
    let mut idx = vec![0usize; k];
    loop {
        let mut p = 1.0;
        let mut best = f64::NEG_INFINITY;
        for (a, &i) in idx.iter().enumerate() {
            let (v, pv) = outcomes[a][i];
            p *= pv;
            best = best.max(v);
        }
        if p > 0.0 {
            let ties: Vec<usize> = (0..k).filter(|&a| outcomes[a][idx[a]].0 == best).collect();
            for &a in &ties {
                probs[a] += p / ties.len() as f64;
            }
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return probs;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < outcomes[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Exact quantities for one policy on one instance, by timestep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactAnalysis {
    pub policy: ExactPolicy,
    /// `E[R_{t+1, A_t}]`.
    pub step_values: Vec<f64>,
    /// `E[R_{t+1, *}]` under the window-truncated baseline (the same for every `t`).
    pub baseline_value: f64,
    /// `E[H(theta_{t+1} | H_t = h) - H(theta_t | H_t = h)]`.
    pub delta_entropy_form: Vec<f64>,
    /// `E[I(theta_{t+1}; theta_t | H_t = h) - I(theta_t; theta_{t-1} | H_t = h)]`; `NaN` at `t = 0`.
    pub delta_mi_form: Vec<f64>,
    /// `I(theta_1; theta_0)`.
    pub delta_0: f64,
    /// `I(R_{t+2..t+N+1}; A_t, R_{t+1, A_t} | H_t)`.
    pub info_gain: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaValue {
    pub numerator: f64,
    pub denominator: f64,
    /// `None` when the denominator is zero.
    pub ratio: Option<f64>,
}

struct Walker<'a> {
    arms: &'a [ArmSpec],
    futures: Vec<Vec<Vec<f64>>>,
    policy: ExactPolicy,
    horizon: usize,
    out: ExactAnalysis,
}

impl Walker<'_> {
    fn visit(&mut self, t: usize, prob: f64, paths: &[ArmPaths]) -> Result<()> {
        let posts: Vec<Vec<f64>> = paths.iter().zip(self.arms).map(|(p, a)| p.current(a)).collect();
        let means: Vec<f64> = posts
            .iter()
            .zip(self.arms)
            .map(|(w, a)| w.iter().zip(&a.x).map(|(p, x)| p * x).sum())
            .collect();
        let pi = self.action_probs(&posts);

        self.out.step_values[t] += prob * pi.iter().zip(&means).map(|(p, m)| p * m).sum::<f64>();

        let mut d_entropy = 0.0;
        let mut d_mi = 0.0;
        let mut info = 0.0;
        for (a, arm) in self.arms.iter().enumerate() {
            let s = arm.s();
            let next: Vec<f64> = (0..s).map(|j| (0..s).map(|i| posts[a][i] * arm.kernel(i, j)).sum()).collect();
            d_entropy += entropy(&next) - entropy(&posts[a]);
            if t > 0 {
                let forward: Vec<f64> = (0..s * s).map(|ij| posts[a][ij / s] * arm.kernel(ij / s, ij % s)).collect();
                let back = paths[a].last_pair(arm);
                d_mi += mutual_information(&FiniteJoint::new(vec![s, s], forward)?)?
                    - mutual_information(&FiniteJoint::new(vec![s, s], back)?)?;
            }
            if pi[a] > 0.0 {
                let g = &self.futures[a];
                let nf = g[0].len();
                let mut table = vec![0.0; 2 * nf];
                for r in 0..2u8 {
                    for f in 0..nf {
                        table[r as usize * nf + f] = (0..s).map(|i| posts[a][i] * arm.lik(i, r) * g[i][f]).sum();
                    }
                }
                info += pi[a] * mutual_information(&FiniteJoint::from_weights(vec![2, nf], table)?)?;
            }
        }
        self.out.delta_entropy_form[t] += prob * d_entropy;
        if t > 0 {
            self.out.delta_mi_form[t] += prob * d_mi;
        }
        self.out.info_gain[t] += prob * info;

        if t + 1 == self.horizon {
            return Ok(());
        }
        for (a, &pa) in pi.iter().enumerate() {
            if pa == 0.0 {
                continue;
            }
            for r in 0..2u8 {
                let pr = if r == 1 { means[a] } else { 1.0 - means[a] };
                if pr <= 0.0 {
                    continue;
                }
                let child: Vec<ArmPaths> = paths
                    .iter()
                    .zip(self.arms)
                    .enumerate()
                    .map(|(b, (p, arm))| {
                        let mut p = p.clone();
                        if b == a {
                            p.observe(arm, r);
                        }
                        p.extend(arm)
                    })
                    .collect();
                self.visit(t + 1, prob * pa * pr, &child)?;
            }
        }
        Ok(())
    }

    fn action_probs(&self, posts: &[Vec<f64>]) -> Vec<f64> {
        let k = self.arms.len();
        match self.policy {
            ExactPolicy::Uniform => vec![1.0 / k as f64; k],
            ExactPolicy::Ts => {
                let outcomes: Vec<Vec<(f64, f64)>> = posts
                    .iter()
                    .zip(self.arms)
                    .map(|(w, a)| a.x.iter().copied().zip(w.iter().copied()).collect())
                    .collect();
                argmax_probabilities(&outcomes)
            }
            ExactPolicy::Ps => {
                let outcomes: Vec<Vec<(f64, f64)>> = posts
                    .iter()
                    .zip(self.arms)
                    .zip(&self.futures)
                    .map(|((w, a), g)| a.window_estimates(w, g))
                    .collect();
                argmax_probabilities(&outcomes)
            }
        }
    }
}

fn arm_specs(inst: &TinyInstance) -> Vec<ArmSpec> {
    inst.config
        .arms
        .iter()
        .map(|a| ArmSpec { x: a.prior.support().to_vec(), p: a.prior.probs().to_vec(), q: a.q })
        .collect()
}

/// Enumerates the full history tree of `policy` on `inst`.
pub fn analyze(inst: &TinyInstance, policy: ExactPolicy) -> Result<ExactAnalysis> {
    let arms = arm_specs(inst);
    let futures: Vec<Vec<Vec<f64>>> = arms.iter().map(|a| a.future_likelihoods(inst.n_or)).collect();

    let baseline_outcomes: Vec<Vec<(f64, f64)>> =
        arms.iter().zip(&futures).map(|(a, g)| a.window_estimates(&a.p, g)).collect();
    let baseline_value = expected_max(&baseline_outcomes);

    let mut delta_0 = 0.0;
    for a in &arms {
        let s = a.s();
        let joint: Vec<f64> = (0..s * s).map(|ij| a.p[ij / s] * a.kernel(ij / s, ij % s)).collect();
        delta_0 += mutual_information(&FiniteJoint::new(vec![s, s], joint)?)?;
    }

    let t_max = inst.horizon;
    let mut walker = Walker {
        arms: &arms,
        futures,
        policy,
        horizon: t_max,
        out: ExactAnalysis {
            policy,
            step_values: vec![0.0; t_max],
            baseline_value,
            delta_entropy_form: vec![0.0; t_max],
            delta_mi_form: vec![0.0; t_max],
            delta_0,
            info_gain: vec![0.0; t_max],
        },
    };
    walker.out.delta_mi_form[0] = f64::NAN;
    let root: Vec<ArmPaths> = arms.iter().map(ArmPaths::start).collect();
    walker.visit(0, 1.0, &root)?;
    Ok(walker.out)
}

/// `E[max_a V_a]` for independent discrete `V_a`.
fn expected_max(outcomes: &[Vec<(f64, f64)>]) -> f64 {
    let mut acc = 0.0;
    let mut idx = vec![0usize; outcomes.len()];
    'outer: loop {
        let mut p = 1.0;
        let mut best = f64::NEG_INFINITY;
        for (a, &i) in idx.iter().enumerate() {
            p *= outcomes[a][i].1;
            best = best.max(outcomes[a][i].0);
        }
        acc += p * best;
        for pos in (0..idx.len()).rev() {
            idx[pos] += 1;
            if idx[pos] < outcomes[pos].len() {
                continue 'outer;
            }
            idx[pos] = 0;
        }
        return acc;
    }
}

impl ExactAnalysis {
    pub fn total_value(&self) -> f64 {
        self.step_values.iter().sum()
    }

    /// `T E[R_*] - sum_t E[R_{t+1, A_t}]`.
    pub fn regret(&self) -> f64 {
        self.baseline_value * self.step_values.len() as f64 - self.total_value()
    }

    /// `Delta_0` at `t = 0`; for `t >= 1` the entropy form, after checking it
    /// against the mutual-information form.
    pub fn delta(&self, t: usize) -> Result<f64> {
        if t >= self.step_values.len() {
            return Err(contract(format!("t = {t} beyond the instance horizon")));
        }
        if t == 0 {
            return Ok(self.delta_0);
        }
        let (a, b) = (self.delta_entropy_form[t], self.delta_mi_form[t]);
        if (a - b).abs() > IDENTITY_TOL {
            return Err(Error::Numerical(format!(
                "information-rate forms disagree at t = {t}: {a} vs {b}"
            )));
        }
        Ok(a)
    }

    pub fn delta_sum(&self) -> Result<f64> {
        (0..self.step_values.len()).map(|t| self.delta(t)).sum()
    }

    pub fn gamma(&self, t: usize) -> Result<GammaValue> {
        if t >= self.step_values.len() {
            return Err(contract(format!("t = {t} beyond the instance horizon")));
        }
        let gap = (self.baseline_value - self.step_values[t]).max(0.0);
        let numerator = gap * gap;
        let denominator = self.info_gain[t];
        let ratio = if denominator > ZERO_INFO { Some(numerator / denominator) } else { None };
        Ok(GammaValue { numerator, denominator, ratio })
    }

    /// Largest defined information ratio; infinite if some step has positive
    /// regret but no information.
    pub fn gamma_bar(&self) -> Result<f64> {
        let mut best: f64 = 0.0;
        for t in 0..self.step_values.len() {
            let g = self.gamma(t)?;
            match g.ratio {
                Some(r) => best = best.max(r),
                None if g.numerator > 0.0 => return Ok(f64::INFINITY),
                None => {}
            }
        }
        Ok(best)
    }

    /// `sqrt(gamma_bar T sum Delta_t)`.
    pub fn regret_bound(&self) -> Result<f64> {
        let gb = self.gamma_bar()?;
        let ds = self.delta_sum()?;
        if gb.is_infinite() {
            return Ok(if ds > 0.0 { f64::INFINITY } else { 0.0 });
        }
        Ok((gb * self.step_values.len() as f64 * ds).sqrt())
    }
}

pub fn exact_policy_value(inst: &TinyInstance, policy: ExactPolicy) -> Result<f64> {
    Ok(analyze(inst, policy)?.total_value())
}

pub fn exact_delta(inst: &TinyInstance, policy: ExactPolicy, t: usize) -> Result<f64> {
    analyze(inst, policy)?.delta(t)
}

pub fn exact_gamma(inst: &TinyInstance, policy: ExactPolicy, t: usize) -> Result<GammaValue> {
    analyze(inst, policy)?.gamma(t)
}

/// Posterior over every arm's current state after `history`, by path enumeration.
pub fn exact_posteriors(config: &ModulatedBernoulliConfig, history: &[(ActionId, f64)]) -> Result<Vec<DiscreteDist>> {
    let arms: Vec<ArmSpec> = config
        .arms
        .iter()
        .map(|a| ArmSpec { x: a.prior.support().to_vec(), p: a.prior.probs().to_vec(), q: a.q })
        .collect();
    let mut paths: Vec<ArmPaths> = arms.iter().map(ArmPaths::start).collect();
    for &(action, r) in history {
        let a = ActionId::checked(action.0, arms.len())?.index();
        let r = if r == 0.0 {
            0
        } else if r == 1.0 {
            1
        } else {
            return Err(contract("rewards must be 0 or 1"));
        };
        paths[a].observe(&arms[a], r);
        if !(paths[a].total() > 0.0) {
            return Err(Error::Inconsistency("history has zero probability".into()));
        }
        paths = paths.iter().zip(&arms).map(|(p, arm)| p.extend(arm)).collect();
    }
    paths
        .iter()
        .zip(&arms)
        .map(|(p, arm)| DiscreteDist::new(arm.x.clone(), p.current(arm)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::ModulatedArm;

    fn arm(q: f64, support: Vec<f64>) -> ModulatedArm {
        ModulatedArm { q, prior: DiscreteDist::uniform(support).unwrap() }
    }

    fn gap_instance(t: usize) -> TinyInstance {
        let config = ModulatedBernoulliConfig {
            arms: vec![ModulatedArm { q: 0.0, prior: DiscreteDist::point(0.9) }, arm(1.0, vec![0.0, 1.0])],
        };
        TinyInstance::new(config, t, 2).unwrap()
    }

    #[test]
    fn gap_instance_values() {
        for t in 1..=4 {
            let inst = gap_instance(t);
            let ps = exact_policy_value(&inst, ExactPolicy::Ps).unwrap();
            let ts = exact_policy_value(&inst, ExactPolicy::Ts).unwrap();
            assert!((ps - 0.9 * t as f64).abs() < 1e-10, "{ps}");
            assert!((ts - 0.7 * t as f64).abs() < 1e-10, "{ts}");
        }
        let u = exact_policy_value(&gap_instance(1), ExactPolicy::Uniform).unwrap();
        assert!((u - 0.7).abs() < 1e-12);
    }

    #[test]
    fn single_arm_half_reset_initial_information() {
        let config = ModulatedBernoulliConfig { arms: vec![arm(0.5, vec![0.0, 1.0])] };
        let inst = TinyInstance::new(config, 2, 2).unwrap();
        let d0 = exact_delta(&inst, ExactPolicy::Ts, 0).unwrap();
        assert!((d0 - 0.130812).abs() < 1e-6);
        assert!(d0 <= 0.5 * std::f64::consts::LN_2);
        exact_delta(&inst, ExactPolicy::Ts, 1).unwrap();
    }

    #[test]
    fn stationary_and_memoryless_rates_vanish() {
        for q in [0.0, 1.0] {
            let config = ModulatedBernoulliConfig { arms: vec![arm(q, vec![0.2, 0.7]), arm(q, vec![0.1, 0.5, 0.9])] };
            let inst = TinyInstance::new(config, 3, 1).unwrap();
            for policy in [ExactPolicy::Ts, ExactPolicy::Ps, ExactPolicy::Uniform] {
                let an = analyze(&inst, policy).unwrap();
                for t in 1..3 {
                    assert!(an.delta(t).unwrap().abs() < 1e-12);
                }
                if q == 1.0 {
                    assert!(an.delta(0).unwrap().abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn memoryless_instance_has_no_ps_regret() {
        let config = ModulatedBernoulliConfig { arms: vec![arm(1.0, vec![0.2, 0.7]), arm(1.0, vec![0.1, 0.5, 0.9])] };
        let inst = TinyInstance::new(config, 3, 2).unwrap();
        let an = analyze(&inst, ExactPolicy::Ps).unwrap();
        for t in 0..3 {
            assert!(an.gamma(t).unwrap().numerator < 1e-20);
        }
    }

    #[test]
    fn single_arm_has_zero_information_ratio() {
        let config = ModulatedBernoulliConfig { arms: vec![arm(0.3, vec![0.2, 0.8])] };
        let inst = TinyInstance::new(config, 3, 2).unwrap();
        let an = analyze(&inst, ExactPolicy::Ps).unwrap();
        for t in 0..3 {
            let g = an.gamma(t).unwrap();
            assert!(g.denominator > 0.0);
            assert!(g.ratio.unwrap() < 1e-20);
        }
    }

    #[test]
    fn uniform_value_is_the_average_stationary_mean() {
        let config = ModulatedBernoulliConfig { arms: vec![arm(0.4, vec![0.2, 0.7]), arm(0.1, vec![0.1, 0.5, 0.9])] };
        let inst = TinyInstance::new(config, 3, 1).unwrap();
        let v = exact_policy_value(&inst, ExactPolicy::Uniform).unwrap();
        let per_step = 0.5 * (0.45 + 0.5);
        assert!((v - 3.0 * per_step).abs() < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let config = ModulatedBernoulliConfig {
            arms: vec![arm(0.5, vec![0.1, 0.5, 0.9]), arm(0.5, vec![0.1, 0.5, 0.9]), arm(0.5, vec![0.1, 0.5, 0.9])],
        };
        match TinyInstance::new(config, 4, 3) {
            Err(Error::Budget { size, .. }) => assert!(size > ORACLE_BUDGET),
            other => panic!("{other:?}"),
        }
        let big = ModulatedBernoulliConfig { arms: vec![arm(0.5, vec![0.1, 0.3, 0.5, 0.9])] };
        assert!(TinyInstance::new(big, 2, 1).is_err());
    }

    #[test]
    fn argmax_probabilities_split_ties() {
        let p = argmax_probabilities(&[vec![(0.0, 0.5), (1.0, 0.5)], vec![(0.0, 0.5), (1.0, 0.5)]]);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
    }
}
