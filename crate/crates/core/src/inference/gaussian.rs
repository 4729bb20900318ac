//! Gaussian filtering for AR(1) arms and the closed-form predictive-sampling
//! variance.

use serde::{Deserialize, Serialize};

use crate::domain::ActionId;
use crate::envs::GaussianArm;
use crate::error::{contract, Error, Result};

/// Per-arm posterior mean and variance of `theta_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianBelief {
    pub mean: Vec<f64>,
    pub var: Vec<f64>,
}

impl GaussianBelief {
    pub fn new(mean: Vec<f64>, var: Vec<f64>) -> Result<Self> {
        if mean.len() != var.len() {
            return Err(contract("mean and variance vectors differ in length"));
        }
        if var.iter().any(|v| !(*v >= 0.0)) {
            return Err(contract("variances must be non-negative"));
        }
        Ok(GaussianBelief { mean, var })
    }

    fn check_arm(&self, arm: ActionId) -> Result<()> {
        if arm.0 >= self.mean.len() {
            return Err(contract(format!("arm {} out of range", arm.0)));
        }
        Ok(())
    }
}

/// Conjugate update of one arm's `(mean, var)` after observing `reward` with noise `obs_var`.
pub fn kalman_update(mean: f64, var: f64, reward: f64, obs_var: f64) -> Result<(f64, f64)> {
    if !(obs_var > 0.0) {
        return Err(contract(format!("observation variance {obs_var} must be positive")));
    }
    if var == 0.0 {
        return Ok((mean, 0.0));
    }
    let total = var + obs_var;
    Ok(((mean * obs_var + reward * var) / total, var * obs_var / total))
}

/// One-step AR(1) prediction of `(mean, var)`.
pub fn kalman_step(mean: f64, var: f64, gamma: f64, delta_sq: f64) -> (f64, f64) {
    (gamma * mean, gamma * gamma * var + delta_sq)
}

pub fn kalman_observe(belief: &GaussianBelief, arm: ActionId, reward: f64, obs_var: f64) -> Result<GaussianBelief> {
    belief.check_arm(arm)?;
    let mut out = belief.clone();
    let (m, v) = kalman_update(belief.mean[arm.0], belief.var[arm.0], reward, obs_var)?;
    out.mean[arm.0] = m;
    out.var[arm.0] = v;
    Ok(out)
}

pub fn kalman_predict(belief: &GaussianBelief, arm: ActionId, gamma: f64, delta_sq: f64) -> Result<GaussianBelief> {
    belief.check_arm(arm)?;
    if !(0.0..=1.0).contains(&gamma) || !(delta_sq >= 0.0) {
        return Err(contract("kalman_predict needs gamma in [0, 1] and delta_sq >= 0"));
    }
    let mut out = belief.clone();
    let (m, v) = kalman_step(belief.mean[arm.0], belief.var[arm.0], gamma, delta_sq);
    out.mean[arm.0] = m;
    out.var[arm.0] = v;
    Ok(out)
}

fn discriminant_root(gamma: f64, delta_sq: f64, sigma_sq: f64) -> f64 {
    let g2 = gamma * gamma;
    let a = delta_sq + sigma_sq - g2 * sigma_sq;
    (a * a + 4.0 * g2 * delta_sq * sigma_sq).sqrt()
}

/// `x* = (delta^2 + sigma^2 - gamma^2 sigma^2 + sqrt(...)) / 2`.
pub fn ar1_x_star(gamma: f64, delta_sq: f64, sigma_sq: f64) -> f64 {
    let a = delta_sq + sigma_sq - gamma * gamma * sigma_sq;
    0.5 * (a + discriminant_root(gamma, delta_sq, sigma_sq))
}

/// Positive fixed point of the elimination recurrence; equals `x* + gamma^2 sigma^2`.
pub fn ar1_d_star(gamma: f64, delta_sq: f64, sigma_sq: f64) -> f64 {
    let g2 = gamma * gamma;
    0.5 * (g2 * sigma_sq + sigma_sq + delta_sq + discriminant_root(gamma, delta_sq, sigma_sq))
}

/// Variance of the predictive-sampling mean estimate of an AR(1) arm whose
/// posterior variance is `post_var`: `gamma^2 v^2 / (gamma^2 v + x*)`.
///
/// The expression is exposed for any `post_var >= 0`, including values above
/// the steady-state variance, which the filter never produces.
pub fn ar1_ps_variance(gamma: f64, delta_sq: f64, sigma_sq: f64, post_var: f64) -> f64 {
    let num = gamma * gamma * post_var * post_var;
    if num == 0.0 {
        return 0.0;
    }
    num / (gamma * gamma * post_var + ar1_x_star(gamma, delta_sq, sigma_sq))
}

/// The plain pivot recurrence `d_1 = c`, `d_k = c - gamma^2 sigma^4 / d_{k-1}`
/// with `c = delta^2 + (1 + gamma^2) sigma^2`, for `k = 1..=n`.
pub fn ar1_pivots(gamma: f64, delta_sq: f64, sigma_sq: f64, n: usize) -> Vec<f64> {
    let c = delta_sq + (1.0 + gamma * gamma) * sigma_sq;
    let g = gamma * gamma * sigma_sq * sigma_sq;
    let mut out = Vec::with_capacity(n);
    let mut d = c;
    for k in 0..n {
        if k > 0 {
            d = c - g / d;
        }
        out.push(d);
    }
    out
}

/// Exact Gaussian conditional mean and variance of `R_{t+1}` given the
/// history (summarized by `(post_mean, post_var)` for `theta_t`) and the next
/// `n` rewards `future[0..n] = R_{t+2..t+n+1}`.
///
/// Works on the differenced rewards `R~_{t+2} = R_{t+2}`,
/// `R~_{t+i} = R_{t+i} - gamma R_{t+i-1}`, whose covariance is tridiagonal,
/// and eliminates from the last row upward in O(n).
pub fn ar1_ps_conditional_finite(
    post_mean: f64,
    post_var: f64,
    arm: &GaussianArm,
    future: &[f64],
    n: usize,
) -> Result<(f64, f64)> {
    if n == 0 || future.len() < n {
        return Err(contract(format!(
            "need 1 <= n <= future length, got n = {n} with {} future rewards",
            future.len()
        )));
    }
    let GaussianArm { gamma, delta_sq, sigma_sq, .. } = *arm;
    let g2 = gamma * gamma;
    let inner = delta_sq + (1.0 + g2) * sigma_sq;
    let first = g2 * post_var + delta_sq + sigma_sq;
    let off = -gamma * sigma_sq;

    // Centered differenced observations; only the first has non-zero prior mean.
    let centered = |i: usize| -> f64 {
        if i == 0 {
            future[0] - gamma * post_mean
        } else {
            future[i] - gamma * future[i - 1]
        }
    };

    let mut d = if n == 1 { first } else { inner };
    let mut y = centered(n - 1);
    for i in (0..n - 1).rev() {
        if !(d > 0.0) {
            return Err(Error::Numerical(format!("non-positive pivot {d} in AR(1) elimination")));
        }
        let ratio = off / d;
        let diag = if i == 0 { first } else { inner };
        d = diag - off * ratio;
        y = centered(i) - ratio * y;
    }
    if !(d > 0.0) {
        return Err(Error::Numerical(format!("non-positive pivot {d} in AR(1) elimination")));
    }
    let cross = gamma * post_var;
    Ok((post_mean + cross * y / d, cross * cross / d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arm(gamma: f64, delta_sq: f64, sigma_sq: f64) -> GaussianArm {
        GaussianArm { gamma, delta_sq, sigma_sq, init_mean: 0.0, init_var: 1.0 }
    }

    #[test]
    fn kalman_observe_examples() {
        let b = GaussianBelief::new(vec![0.0], vec![1.0]).unwrap();
        let o = kalman_observe(&b, ActionId(0), 1.0, 1.0).unwrap();
        assert_eq!((o.mean[0], o.var[0]), (0.5, 0.5));

        let b = GaussianBelief::new(vec![3.0], vec![0.0]).unwrap();
        let o = kalman_observe(&b, ActionId(0), -10.0, 1.0).unwrap();
        assert_eq!((o.mean[0], o.var[0]), (3.0, 0.0));

        let b = GaussianBelief::new(vec![0.0, 5.0], vec![2.0, 1.0]).unwrap();
        let o = kalman_observe(&b, ActionId(0), 1.0, 1.0).unwrap();
        assert!((o.mean[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((o.var[0] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!((o.mean[1], o.var[1]), (5.0, 1.0));

        assert!(kalman_observe(&b, ActionId(0), 1.0, 0.0).is_err());
        assert!(kalman_observe(&b, ActionId(2), 1.0, 1.0).is_err());
    }

    #[test]
    fn conjugate_update_matches_importance_estimate() {
        // Prior N(0, 2), likelihood N(1; theta, 1): weight prior draws by the likelihood.
        use crate::stream::derive_stream;
        use rand::Rng;
        use rand_distr::StandardNormal;
        let mut rng = derive_stream(99, &[]);
        let (mut w_sum, mut wx, mut wxx) = (0.0, 0.0, 0.0);
        for _ in 0..1_000_000 {
            let z: f64 = rng.sample(StandardNormal);
            let theta = 2f64.sqrt() * z;
            let w = (-0.5 * (1.0 - theta).powi(2)).exp();
            w_sum += w;
            wx += w * theta;
            wxx += w * theta * theta;
        }
        let mean = wx / w_sum;
        let var = wxx / w_sum - mean * mean;
        assert!((mean - 2.0 / 3.0).abs() < 0.01, "mean {mean}");
        assert!((var - 2.0 / 3.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn kalman_predict_examples() {
        let one = |m: f64, v: f64, g: f64, d: f64| {
            let b = GaussianBelief::new(vec![m], vec![v]).unwrap();
            let o = kalman_predict(&b, ActionId(0), g, d).unwrap();
            (o.mean[0], o.var[0])
        };
        let (m, v) = one(0.0, 1.0, 0.9, 0.19);
        assert_eq!(m, 0.0);
        assert!((v - 1.0).abs() < 1e-15);
        assert_eq!(one(1.0, 0.5, 0.0, 0.3), (0.0, 0.3));
        assert_eq!(one(2.0, 1.0, 1.0, 0.0), (2.0, 1.0));
    }

    #[test]
    fn x_star_examples() {
        assert!((ar1_x_star(0.0, 0.3, 0.7) - 1.0).abs() < 1e-15);
        assert_eq!(ar1_x_star(1.0, 0.0, 1.0), 0.0);
        assert!((ar1_x_star(0.9, 0.19, 1.0) - 0.625890).abs() < 1e-6);
    }

    #[test]
    fn x_star_is_the_recurrence_fixed_point_shifted() {
        // Independent route: iterate d_k to convergence, then subtract gamma^2 sigma^2.
        for &(g, d2, s2) in &[(0.9, 0.19, 1.0), (0.5, 0.75, 2.0), (0.999, 0.001999, 1.0), (0.3, 0.0, 1.0)] {
            let d = *ar1_pivots(g, d2, s2, 20_000).last().unwrap();
            assert!((d - g * g * s2 - ar1_x_star(g, d2, s2)).abs() < 1e-9);
            assert!((ar1_d_star(g, d2, s2) - d).abs() < 1e-9);
        }
    }

    #[test]
    fn ps_variance_examples() {
        assert_eq!(ar1_ps_variance(0.0, 1.0, 1.0, 1.0), 0.0);
        assert!((ar1_ps_variance(0.9, 0.19, 1.0, 1.0) - 0.564109).abs() < 1e-5);
        assert!((ar1_ps_variance(0.999, 0.001999, 1.0, 1.0) - 0.955289).abs() < 1e-4);
        assert_eq!(ar1_ps_variance(1.0, 0.0, 1.0, 0.0), 0.0);
        // Frozen chain: predictive sampling variance equals the posterior variance.
        assert!((ar1_ps_variance(1.0, 0.0, 1.0, 0.7) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn pivots_converge_to_d_star() {
        for &(g, d2, s2) in &[(0.0, 1.0, 1.0), (0.5, 0.75, 1.0), (0.9, 0.19, 1.0), (0.999, 0.001999, 1.0), (0.7, 0.2, 3.0)] {
            let d = ar1_pivots(g, d2, s2, 500);
            let star = ar1_d_star(g, d2, s2);
            assert!((d[499] - star).abs() < 1e-9, "gamma {g}: {} vs {star}", d[499]);
            // Monotone decrease from d_1 = c toward d*.
            assert!(d.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        }
    }

    #[test]
    fn finite_conditioning_converges_to_closed_form() {
        let fut = vec![0.0; 200];
        for &(g, s_t) in &[(0.9, 1.0), (0.999, 1.0), (0.5, 0.3), (0.0, 1.0)] {
            let a = arm(g, 1.0 - g * g, 1.0);
            let (_, v) = ar1_ps_conditional_finite(0.0, s_t, &a, &fut, 200).unwrap();
            assert!((v - ar1_ps_variance(g, 1.0 - g * g, 1.0, s_t)).abs() < 1e-6);
        }
    }

    #[test]
    fn finite_variance_ignores_future_values() {
        let a = arm(0.9, 0.19, 1.0);
        let f1: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        let f2: Vec<f64> = (0..50).map(|i| 3.0 - i as f64 * 0.1).collect();
        let (m1, v1) = ar1_ps_conditional_finite(0.2, 0.8, &a, &f1, 50).unwrap();
        let (m2, v2) = ar1_ps_conditional_finite(0.2, 0.8, &a, &f2, 50).unwrap();
        assert_eq!(v1.to_bits(), v2.to_bits());
        assert_ne!(m1, m2);
    }

    #[test]
    fn known_arm_conditional_is_degenerate() {
        let a = GaussianArm { gamma: 1.0, delta_sq: 0.0, sigma_sq: 1.0, init_mean: 1.0, init_var: 0.0 };
        let fut = vec![2.5, -1.0, 0.3, 1.7];
        let (m, v) = ar1_ps_conditional_finite(1.0, 0.0, &a, &fut, 4).unwrap();
        assert_eq!((m, v), (1.0, 0.0));
    }

    #[test]
    fn finite_conditioning_rejects_short_windows() {
        let a = arm(0.9, 0.19, 1.0);
        assert!(ar1_ps_conditional_finite(0.0, 1.0, &a, &[1.0], 2).is_err());
        assert!(ar1_ps_conditional_finite(0.0, 1.0, &a, &[1.0], 0).is_err());
    }
}
