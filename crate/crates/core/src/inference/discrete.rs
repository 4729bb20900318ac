//! Exact filtering and smoothing for modulated Bernoulli arms over a finite
//! support.

use serde::{Deserialize, Serialize};

use crate::domain::ActionId;
use crate::envs::DiscreteDist;
use crate::error::{contract, Error, Result};
use crate::numerics::{log_sum_exp, PROB_SUM_TOL};

/// Per-arm posterior over the success probability `theta_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteBelief {
    pub arms: Vec<DiscreteDist>,
}

impl DiscreteBelief {
    pub fn new(arms: Vec<DiscreteDist>) -> Self {
        DiscreteBelief { arms }
    }

    fn check_arm(&self, arm: ActionId) -> Result<()> {
        if arm.0 >= self.arms.len() {
            return Err(contract(format!("arm {} out of range", arm.0)));
        }
        Ok(())
    }
}

fn bernoulli_loglik(reward: f64, theta: f64) -> Result<f64> {
    if reward == 1.0 {
        Ok(theta.ln())
    } else if reward == 0.0 {
        Ok((1.0 - theta).ln())
    } else {
        Err(contract(format!("Bernoulli reward must be 0 or 1, got {reward}")))
    }
}

/// Bayes update of a single arm's distribution on a 0/1 reward.
pub fn bernoulli_update(dist: &DiscreteDist, reward: f64) -> Result<DiscreteDist> {
    let lik = |x: f64| if reward == 1.0 { x } else { 1.0 - x };
    if reward != 0.0 && reward != 1.0 {
        return Err(contract(format!("Bernoulli reward must be 0 or 1, got {reward}")));
    }
    let weights: Vec<f64> = dist.support().iter().zip(dist.probs()).map(|(&x, &p)| p * lik(x)).collect();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Inconsistency(format!("reward {reward} has zero probability under the belief")));
    }
    Ok(DiscreteDist::from_parts_unchecked(
        dist.support().to_vec(),
        weights.into_iter().map(|w| w / total).collect(),
    ))
}

/// `(1 - q) * current + q * prior`, pointwise over the shared support.
pub fn mix_with_prior(dist: &DiscreteDist, q: f64, prior: &DiscreteDist) -> Result<DiscreteDist> {
    if dist.support() != prior.support() {
        return Err(contract("belief and prior supports differ"));
    }
    if q == 0.0 {
        return Ok(dist.clone());
    }
    if q == 1.0 {
        return Ok(prior.clone());
    }
    let probs = dist.probs().iter().zip(prior.probs()).map(|(&c, &p)| (1.0 - q) * c + q * p).collect();
    Ok(DiscreteDist::from_parts_unchecked(dist.support().to_vec(), probs))
}

pub fn hmm_observe(belief: &DiscreteBelief, arm: ActionId, reward: f64) -> Result<DiscreteBelief> {
    belief.check_arm(arm)?;
    let mut out = belief.clone();
    out.arms[arm.0] = bernoulli_update(&belief.arms[arm.0], reward)?;
    Ok(out)
}

pub fn hmm_transition(belief: &DiscreteBelief, q: &[f64], priors: &[DiscreteDist]) -> Result<DiscreteBelief> {
    if q.len() != belief.arms.len() || priors.len() != belief.arms.len() {
        return Err(contract("transition parameters must cover every arm"));
    }
    if q.iter().any(|q| !(0.0..=1.0).contains(q)) {
        return Err(contract("transition probabilities must lie in [0, 1]"));
    }
    let arms = belief
        .arms
        .iter()
        .zip(q)
        .zip(priors)
        .map(|((d, &q), p)| mix_with_prior(d, q, p))
        .collect::<Result<_>>()?;
    Ok(DiscreteBelief { arms })
}

/// One backward step through the reset kernel, in log space:
/// `log((1 - q) exp(b(x)) + q * sum_y prior(y) exp(b(y)))`.
fn log_kernel_apply(log_beta: &mut [f64], q: f64, prior: &[f64]) {
    if q == 0.0 {
        return;
    }
    let max = log_beta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return;
    }
    let scaled: Vec<f64> = log_beta.iter().map(|b| (b - max).exp()).collect();
    let reset: f64 = scaled.iter().zip(prior).map(|(e, p)| e * p).sum();
    for (b, e) in log_beta.iter_mut().zip(&scaled) {
        *b = max + ((1.0 - q) * e + q * reset).ln();
    }
}

fn renormalize(log_beta: &mut [f64]) -> Result<()> {
    let max = log_beta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::Inconsistency("future rewards have zero probability".into()));
    }
    log_beta.iter_mut().for_each(|b| *b -= max);
    Ok(())
}

/// `E[theta_t | H_t, R_{t+2..t+N+1}]` for one modulated arm, where `filter`
/// is the arm's posterior over `theta_t` and `future[k-1] = R_{t+k+1}` is
/// emitted from `theta_{t+k}`.
///
/// Runs the backward likelihood recursion in log space, renormalizing each
/// step, then reweights the filter and takes the mean.
pub fn smooth_mean(filter: &DiscreteDist, future: &[f64], q: f64, prior: &DiscreteDist) -> Result<f64> {
    smooth_posterior(filter, future, q, prior).map(|d| d.mean())
}

/// Posterior over `theta_t` given the filter and the future window.
pub fn smooth_posterior(filter: &DiscreteDist, future: &[f64], q: f64, prior: &DiscreteDist) -> Result<DiscreteDist> {
    if filter.support() != prior.support() {
        return Err(contract("belief and prior supports differ"));
    }
    let support = filter.support();
    let mut log_beta = vec![0.0; support.len()];
    for &r in future.iter().rev() {
        log_kernel_apply(&mut log_beta, q, prior.probs());
        for (b, &x) in log_beta.iter_mut().zip(support) {
            *b += bernoulli_loglik(r, x)?;
        }
        renormalize(&mut log_beta)?;
    }
    if !future.is_empty() {
        log_kernel_apply(&mut log_beta, q, prior.probs());
    }
    let log_post: Vec<f64> = filter
        .probs()
        .iter()
        .zip(&log_beta)
        .map(|(&p, &b)| if p > 0.0 { p.ln() + b } else { f64::NEG_INFINITY })
        .collect();
    let norm = log_sum_exp(&log_post);
    if norm == f64::NEG_INFINITY {
        return Err(Error::Inconsistency("future rewards impossible under the belief".into()));
    }
    let probs: Vec<f64> = log_post.iter().map(|l| (l - norm).exp()).collect();
    debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e3 * PROB_SUM_TOL);
    Ok(DiscreteDist::from_parts_unchecked(support.to_vec(), probs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uni(s: &[f64]) -> DiscreteDist {
        DiscreteDist::uniform(s.to_vec()).unwrap()
    }

    #[test]
    fn observe_examples() {
        let b = DiscreteBelief::new(vec![uni(&[0.0, 1.0])]);
        let o = hmm_observe(&b, ActionId(0), 1.0).unwrap();
        assert_eq!(o.arms[0].probs(), &[0.0, 1.0]);

        let b = DiscreteBelief::new(vec![uni(&[0.25, 0.75]), uni(&[0.0, 1.0])]);
        let o = hmm_observe(&b, ActionId(0), 1.0).unwrap();
        assert!((o.arms[0].probs()[0] - 0.25).abs() < 1e-15);
        assert!((o.arms[0].probs()[1] - 0.75).abs() < 1e-15);
        assert_eq!(o.arms[1], b.arms[1]);

        let b = DiscreteBelief::new(vec![DiscreteDist::point(0.5)]);
        assert_eq!(hmm_observe(&b, ActionId(0), 0.0).unwrap(), b);
        assert_eq!(hmm_observe(&b, ActionId(0), 1.0).unwrap(), b);
    }

    #[test]
    fn impossible_reward_is_an_inconsistency() {
        let b = DiscreteBelief::new(vec![DiscreteDist::point(0.0)]);
        assert!(matches!(hmm_observe(&b, ActionId(0), 1.0), Err(Error::Inconsistency(_))));
        assert!(matches!(hmm_observe(&b, ActionId(0), 0.5), Err(Error::Contract(_))));
    }

    #[test]
    fn transition_examples() {
        let prior = uni(&[0.0, 1.0]);
        let cur = DiscreteDist::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        let b = DiscreteBelief::new(vec![cur.clone()]);
        assert_eq!(hmm_transition(&b, &[0.0], std::slice::from_ref(&prior)).unwrap(), b);
        assert_eq!(hmm_transition(&b, &[1.0], std::slice::from_ref(&prior)).unwrap().arms[0], prior);
        let half = hmm_transition(&b, &[0.5], std::slice::from_ref(&prior)).unwrap();
        assert_eq!(half.arms[0].probs(), &[0.25, 0.75]);
        assert!(hmm_transition(&b, &[1.5], &[prior]).is_err());
    }

    #[test]
    fn smoothing_examples() {
        let prior = uni(&[0.0, 1.0]);
        // Full reset: the future says nothing about the present.
        let filt = DiscreteDist::new(vec![0.0, 1.0], vec![0.3, 0.7]).unwrap();
        let m = smooth_mean(&filt, &[1.0, 0.0, 1.0], 1.0, &prior).unwrap();
        assert!((m - 0.7).abs() < 1e-15);
        // Frozen chain: a single future success pins theta = 1.
        let m = smooth_mean(&prior, &[0.0, 0.0, 1.0, 0.0], 0.0, &prior);
        assert!(matches!(m, Err(Error::Inconsistency(_))), "0 and 1 together are impossible when frozen");
        let m = smooth_mean(&prior, &[1.0, 1.0, 1.0], 0.0, &prior).unwrap();
        assert_eq!(m, 1.0);
        // Hand enumeration: P(R_{t+2} = 1 | theta_t = 1) = 0.75, vs 0.25 for theta_t = 0.
        let m = smooth_mean(&prior, &[1.0], 0.5, &prior).unwrap();
        assert!((m - 0.75).abs() < 1e-15);
    }

    #[test]
    fn smoothing_matches_path_enumeration() {
        // Brute force over theta paths for a 3-point support and a 4-step future.
        let support = vec![0.2, 0.5, 0.9];
        let prior = DiscreteDist::new(support.clone(), vec![0.5, 0.3, 0.2]).unwrap();
        let filt = DiscreteDist::new(support.clone(), vec![0.1, 0.6, 0.3]).unwrap();
        let future = [1.0, 0.0, 1.0, 1.0];
        let q = 0.35;
        let k = |x: usize, y: usize| (1.0 - q) * f64::from(u8::from(x == y)) + q * prior.probs()[y];
        let n = future.len();
        let mut post = vec![0.0; 3];
        let total_paths = 3usize.pow(n as u32 + 1);
        for code in 0..total_paths {
            let mut path = Vec::with_capacity(n + 1);
            let mut c = code;
            for _ in 0..=n {
                path.push(c % 3);
                c /= 3;
            }
            let mut w = filt.probs()[path[0]];
            for j in 1..=n {
                w *= k(path[j - 1], path[j]);
                let th = support[path[j]];
                w *= if future[j - 1] == 1.0 { th } else { 1.0 - th };
            }
            post[path[0]] += w;
        }
        let z: f64 = post.iter().sum();
        let expect: f64 = post.iter().zip(&support).map(|(p, x)| p / z * x).sum();
        let got = smooth_mean(&filt, &future, q, &prior).unwrap();
        assert!((got - expect).abs() < 1e-12, "{got} vs {expect}");
    }

    #[test]
    fn long_windows_do_not_underflow() {
        let prior = uni(&[0.3, 0.7]);
        let future: Vec<f64> = (0..5000).map(|i| f64::from(u8::from(i % 3 != 0))).collect();
        let m = smooth_mean(&prior, &future, 0.0, &prior).unwrap();
        assert!((m - 0.7).abs() < 1e-12);
    }
}
