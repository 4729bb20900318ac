//! Discrete entropy and mutual information (in nats), plus the analytic
//! information and regret bounds for the implemented environments.

use crate::envs::{ArmModel, EnvConfig, ModulatedBernoulliConfig};
use crate::error::{contract, Error, Result};
use crate::numerics::{IDENTITY_TOL, PROB_SUM_TOL};

/// A probability table over the product of finitely many finite supports,
/// stored row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteJoint {
    shape: Vec<usize>,
    probs: Vec<f64>,
}

impl FiniteJoint {
    pub fn new(shape: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(contract("joint shape must be non-empty with positive axis sizes"));
        }
        let size: usize = shape.iter().product();
        if probs.len() != size {
            return Err(contract(format!("table has {} entries, shape needs {size}", probs.len())));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(contract("joint entries must be finite and non-negative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL * size.max(1) as f64 {
            return Err(contract(format!("joint sums to {total}, not 1")));
        }
        Ok(FiniteJoint { shape, probs })
    }

    /// Normalizes a non-negative weight table.
    pub fn from_weights(shape: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(contract("weights must have positive finite total"));
        }
        Self::new(shape, weights.into_iter().map(|w| w / total).collect())
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn num_axes(&self) -> usize {
        self.shape.len()
    }

    fn check_axes(&self, axes: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.shape.len()];
        for &a in axes {
            if a >= self.shape.len() || seen[a] {
                return Err(contract(format!("invalid or repeated axis {a}")));
            }
            seen[a] = true;
        }
        Ok(())
    }

    /// Marginal over `axes`, with the result's axes in the given order.
    pub fn marginal(&self, axes: &[usize]) -> Result<FiniteJoint> {
        self.check_axes(axes)?;
        let out_shape: Vec<usize> = axes.iter().map(|&a| self.shape[a]).collect();
        let mut out = vec![0.0; out_shape.iter().product::<usize>().max(1)];
        let mut idx = vec![0usize; self.shape.len()];
        for &p in &self.probs {
            let mut flat = 0;
            for &a in axes {
                flat = flat * self.shape[a] + idx[a];
            }
            out[flat] += p;
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < self.shape[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        let shape = if out_shape.is_empty() { vec![1] } else { out_shape };
        Ok(FiniteJoint { shape, probs: out })
    }

    /// Joint entropy of the variables on `axes`.
    pub fn entropy_of(&self, axes: &[usize]) -> Result<f64> {
        Ok(entropy(&self.marginal(axes)?.probs))
    }
}

/// `-sum p ln p` with `0 ln 0 = 0`.
pub fn entropy(probs: &[f64]) -> f64 {
    -probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum::<f64>()
}

/// Binary entropy `H(p, 1 - p)`.
pub fn binary_entropy(p: f64) -> f64 {
    entropy(&[p, 1.0 - p])
}

/// `sum p ln(p / q)`; infinite when `p` puts mass where `q` has none.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(contract("KL divergence needs equal-length distributions"));
    }
    let mut d = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Ok(f64::INFINITY);
            }
            d += pi * (pi / qi).ln();
        }
    }
    Ok(d.max(0.0))
}

fn disjoint(groups: &[&[usize]]) -> Result<()> {
    let mut all: Vec<usize> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let n = all.len();
    all.sort_unstable();
    all.dedup();
    if all.len() != n {
        return Err(contract("variable groups must be disjoint"));
    }
    if groups.iter().any(|g| g.is_empty()) {
        return Err(contract("variable groups must be non-empty"));
    }
    Ok(())
}

/// `I(X; Y | Z)` where each variable is a group of axes; `z` may be empty.
pub fn group_mutual_information(joint: &FiniteJoint, x: &[usize], y: &[usize], z: &[usize]) -> Result<f64> {
    if z.is_empty() {
        disjoint(&[x, y])?;
    } else {
        disjoint(&[x, y, z])?;
    }
    let cat = |parts: &[&[usize]]| -> Vec<usize> { parts.iter().flat_map(|p| p.iter().copied()).collect() };
    let h_xz = joint.entropy_of(&cat(&[x, z]))?;
    let h_yz = joint.entropy_of(&cat(&[y, z]))?;
    let h_xyz = joint.entropy_of(&cat(&[x, y, z]))?;
    let h_z = if z.is_empty() { 0.0 } else { joint.entropy_of(z)? };
    Ok((h_xz + h_yz - h_xyz - h_z).max(0.0))
}

/// `I(X; Y)` for a two-axis joint, computed as `H(X) - H(X|Y)` and checked
/// against `sum_y P(y) KL(P(X|y) || P(X))`.
pub fn mutual_information(joint: &FiniteJoint) -> Result<f64> {
    if joint.num_axes() != 2 {
        return Err(contract("mutual_information expects a two-axis joint"));
    }
    let (nx, ny) = (joint.shape[0], joint.shape[1]);
    let px = joint.marginal(&[0])?.probs;
    let py = joint.marginal(&[1])?.probs;
    let h_x = entropy(&px);
    let h_xy = entropy(&joint.probs);
    let h_x_given_y = h_xy - entropy(&py);
    let mi = h_x - h_x_given_y;

    let mut via_kl = 0.0;
    for (j, &pyj) in py.iter().enumerate() {
        if pyj > 0.0 {
            let cond: Vec<f64> = (0..nx).map(|i| joint.probs[i * ny + j] / pyj).collect();
            via_kl += pyj * kl_divergence(&cond, &px)?;
        }
    }
    if (mi - via_kl).abs() > IDENTITY_TOL {
        return Err(Error::Numerical(format!(
            "entropy ({mi}) and divergence ({via_kl}) forms of mutual information disagree"
        )));
    }
    Ok(mi.max(0.0))
}

/// `I(X; Y | Z) = sum_z P(z) I(X; Y | Z = z)` for a three-axis joint.
pub fn conditional_mutual_information(joint: &FiniteJoint) -> Result<f64> {
    if joint.num_axes() != 3 {
        return Err(contract("conditional_mutual_information expects a three-axis joint"));
    }
    let (nx, ny, nz) = (joint.shape[0], joint.shape[1], joint.shape[2]);
    let mut total = 0.0;
    for k in 0..nz {
        let slice: Vec<f64> = (0..nx * ny).map(|ij| joint.probs[ij * nz + k]).collect();
        let pz: f64 = slice.iter().sum();
        if pz > 0.0 {
            let cond = FiniteJoint::from_weights(vec![nx, ny], slice)?;
            total += pz * mutual_information(&cond)?;
        }
    }
    Ok(total)
}

/// Sub-Gaussian parameter of the reward given the history.
///
/// Bernoulli arms use half the reward range (zero for arms whose reward is
/// constant). Gaussian arms use the standard deviation of the reward under
/// the widest belief the filter can hold, `sqrt(init_var + sigma_sq)`.
pub fn sigma_sg(env: &EnvConfig) -> Result<f64> {
    let arms = env.arms()?;
    Ok(arms.iter().map(arm_sigma_sg).fold(0.0, f64::max))
}

fn arm_sigma_sg(arm: &ArmModel) -> f64 {
    match arm {
        ArmModel::Bernoulli { prior, .. } => {
            let live: Vec<f64> = prior
                .support()
                .iter()
                .zip(prior.probs())
                .filter(|(_, &p)| p > 0.0)
                .map(|(&x, _)| x)
                .collect();
            let always_zero = live.iter().all(|&x| x == 0.0);
            let always_one = live.iter().all(|&x| x == 1.0);
            if always_zero || always_one {
                0.0
            } else {
                0.5
            }
        }
        ArmModel::Gaussian(g) => (g.init_var + g.sigma_sq).sqrt(),
    }
}

/// Information-ratio bound `2 A sigma_sg^2`.
pub fn info_ratio_bound(num_arms: usize, sigma_sg: f64) -> f64 {
    2.0 * num_arms as f64 * sigma_sg * sigma_sg
}

/// Bounds on the initial information `Delta_0` and on each later `Delta_t`
/// for a modulated Bernoulli bandit.
pub fn delta_bounds_modulated(config: &ModulatedBernoulliConfig) -> (f64, f64) {
    let persist: f64 = config.arms.iter().map(|a| (1.0 - a.q) * entropy(a.prior.probs())).sum();
    let inject: f64 = config
        .arms
        .iter()
        .map(|a| a.q * entropy(a.prior.probs()) + binary_entropy(a.q))
        .sum();
    (persist, persist.min(inject))
}

/// Regret bound `sqrt(A T / 2 * (Delta_0 bound + (T - 1) Delta_t bound))`
/// for predictive sampling in a modulated Bernoulli bandit.
pub fn ps_regret_bound_modulated(config: &ModulatedBernoulliConfig, horizon: u64) -> Result<f64> {
    if horizon == 0 {
        return Err(contract("horizon must be at least 1"));
    }
    let (d0, dt) = delta_bounds_modulated(config);
    let delta_sum = d0 + (horizon - 1) as f64 * dt;
    generic_regret_bound(info_ratio_bound(config.arms.len(), 0.5), delta_sum, horizon)
}

/// `sqrt(gamma_bar * T * sum Delta_t)`.
pub fn generic_regret_bound(gamma_bar: f64, delta_sum: f64, horizon: u64) -> Result<f64> {
    if !(gamma_bar >= 0.0) || !(delta_sum >= 0.0) {
        return Err(contract("information ratio and information sum must be non-negative"));
    }
    Ok((gamma_bar * horizon as f64 * delta_sum).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::{Ar1ArmConfig, DiscreteDist, ModulatedArm, StationaryBernoulliConfig};
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn joint2(table: &[[f64; 2]; 2]) -> FiniteJoint {
        FiniteJoint::new(vec![2, 2], table.iter().flatten().copied().collect()).unwrap()
    }

    fn modulated(arms: &[(f64, Vec<f64>)]) -> ModulatedBernoulliConfig {
        ModulatedBernoulliConfig {
            arms: arms
                .iter()
                .map(|(q, s)| ModulatedArm { q: *q, prior: DiscreteDist::uniform(s.clone()).unwrap() })
                .collect(),
        }
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy(&[0.5, 0.5]) - LN_2).abs() < 1e-15);
        assert_eq!(entropy(&[1.0, 0.0]), 0.0);
        assert!((entropy(&[0.75, 0.25]) - 0.562335).abs() < 1e-6);
    }

    #[test]
    fn mutual_information_examples() {
        assert!(mutual_information(&joint2(&[[0.25, 0.25], [0.25, 0.25]])).unwrap().abs() < 1e-15);
        assert!((mutual_information(&joint2(&[[0.5, 0.0], [0.0, 0.5]])).unwrap() - LN_2).abs() < 1e-15);
        let pair = crate::envs::modulated_pair_joint(0.5, &DiscreteDist::uniform(vec![0.0, 1.0]).unwrap());
        let j = FiniteJoint::new(vec![2, 2], pair.concat()).unwrap();
        let mi = mutual_information(&j).unwrap();
        assert!((mi - 0.130812).abs() < 1e-6, "{mi}");
        assert!((mi - (LN_2 - entropy(&[0.75, 0.25]))).abs() < 1e-15);
    }

    #[test]
    fn conditional_mutual_information_examples() {
        // Z independent of (X, Y).
        let xy = [0.4, 0.1, 0.2, 0.3];
        let pz = [0.3, 0.7];
        let table: Vec<f64> = xy.iter().flat_map(|p| pz.iter().map(move |z| p * z)).collect();
        let j = FiniteJoint::new(vec![2, 2, 2], table).unwrap();
        let expect = mutual_information(&FiniteJoint::new(vec![2, 2], xy.to_vec()).unwrap()).unwrap();
        assert!((conditional_mutual_information(&j).unwrap() - expect).abs() < 1e-12);

        // X = Y = Z uniform.
        let mut t = vec![0.0; 8];
        t[0] = 0.5;
        t[7] = 0.5;
        let j = FiniteJoint::new(vec![2, 2, 2], t).unwrap();
        assert!(conditional_mutual_information(&j).unwrap().abs() < 1e-15);

        // Markov chain theta_0 -> theta_1 -> theta_2, ordered (theta_2, theta_0, theta_1).
        let q = 0.5;
        let k = |a: usize, b: usize| (1.0 - q) * f64::from(u8::from(a == b)) + q * 0.5;
        let mut t = vec![0.0; 8];
        for x2 in 0..2 {
            for x0 in 0..2 {
                for x1 in 0..2 {
                    t[(x2 * 2 + x0) * 2 + x1] = 0.5 * k(x0, x1) * k(x1, x2);
                }
            }
        }
        let j = FiniteJoint::new(vec![2, 2, 2], t).unwrap();
        assert!(conditional_mutual_information(&j).unwrap().abs() < 1e-10);
        assert!(group_mutual_information(&j, &[0], &[1], &[2]).unwrap().abs() < 1e-10);
    }

    #[test]
    fn sigma_sg_cases() {
        let bern = EnvConfig::StationaryBernoulli(StationaryBernoulliConfig {
            priors: vec![DiscreteDist::uniform(vec![0.0, 1.0]).unwrap(), DiscreteDist::point(0.9)],
        });
        assert_eq!(sigma_sg(&bern).unwrap(), 0.5);
        let ar1 = EnvConfig::Ar1(vec![Ar1ArmConfig { gamma: 0.9, delta_sq: 0.19, sigma_sq: 1.0, fixed_mean: None }]);
        assert!((sigma_sg(&ar1).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let constant = EnvConfig::StationaryBernoulli(StationaryBernoulliConfig {
            priors: vec![DiscreteDist::point(1.0), DiscreteDist::point(0.0)],
        });
        assert_eq!(sigma_sg(&constant).unwrap(), 0.0);
    }

    #[test]
    fn info_ratio_bound_examples() {
        assert_eq!(info_ratio_bound(2, 0.5), 1.0);
        assert_eq!(info_ratio_bound(1, 0.7), 2.0 * 0.7 * 0.7);
        assert!((info_ratio_bound(3, 2f64.sqrt()) - 12.0).abs() < 1e-12);
    }

    #[test]
    fn delta_bound_examples() {
        let c = ModulatedBernoulliConfig {
            arms: vec![
                ModulatedArm { q: 0.0, prior: DiscreteDist::point(0.9) },
                ModulatedArm { q: 1.0, prior: DiscreteDist::uniform(vec![0.0, 1.0]).unwrap() },
            ],
        };
        assert_eq!(delta_bounds_modulated(&c), (0.0, 0.0));
        let (d0, dt) = delta_bounds_modulated(&modulated(&[(0.0, vec![0.0, 1.0]), (0.0, vec![0.0, 1.0])]));
        assert!((d0 - 2.0 * LN_2).abs() < 1e-15);
        assert_eq!(dt, 0.0);
        let (d0, _) = delta_bounds_modulated(&modulated(&[(1.0, vec![0.0, 1.0]), (1.0, vec![0.2, 0.7])]));
        assert_eq!(d0, 0.0);
    }

    #[test]
    fn regret_bound_examples() {
        let c = modulated(&[(0.0, vec![0.0, 1.0]), (0.0, vec![0.0, 1.0])]);
        let b = ps_regret_bound_modulated(&c, 100).unwrap();
        assert!((b - 11.7741).abs() < 1e-3, "{b}");
        assert!((b - (0.5 * 2.0 * 100.0 * 2.0 * LN_2).sqrt()).abs() < 1e-12);

        let c = modulated(&[(1.0, vec![0.0, 1.0]), (1.0, vec![0.0, 0.5, 1.0])]);
        assert_eq!(ps_regret_bound_modulated(&c, 100).unwrap(), 0.0);

        for &q in &[0.55, 0.7, 0.9, 0.99] {
            let support = vec![0.1, 0.5, 0.8];
            let c = modulated(&[(q, support.clone()), (q, support.clone()), (q, support.clone())]);
            let joint_h = 3.0 * entropy(c.arms[0].prior.probs());
            for t in [1u64, 7, 100] {
                let short = t as f64 * (0.5 * 3.0 * (1.0 - q) * joint_h).sqrt();
                assert!((ps_regret_bound_modulated(&c, t).unwrap() - short).abs() < 1e-9);
            }
        }
        assert!(ps_regret_bound_modulated(&c_dummy(), 0).is_err());
    }

    fn c_dummy() -> ModulatedBernoulliConfig {
        modulated(&[(0.5, vec![0.0, 1.0])])
    }

    #[test]
    fn generic_bound_examples() {
        assert_eq!(generic_regret_bound(1.0, 0.0, 100).unwrap(), 0.0);
        assert!((generic_regret_bound(1.0, 2.0 * LN_2, 100).unwrap() - 11.7741).abs() < 1e-3);
        let a = generic_regret_bound(0.8, 1.3, 25).unwrap();
        let b = generic_regret_bound(0.8, 1.3, 100).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12);
    }

    #[test]
    fn marginal_reorders_axes() {
        let j = FiniteJoint::new(vec![2, 3], vec![0.1, 0.2, 0.0, 0.3, 0.15, 0.25]).unwrap();
        let t = j.marginal(&[1, 0]).unwrap();
        assert_eq!(t.shape(), &[3, 2]);
        assert_eq!(t.probs(), &[0.1, 0.3, 0.2, 0.15, 0.0, 0.25]);
        assert!(j.marginal(&[0, 0]).is_err());
        assert!(FiniteJoint::new(vec![2], vec![0.6, 0.6]).is_err());
    }

    fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, n).prop_filter("positive mass", |w| w.iter().sum::<f64>() > 1e-3)
    }

    proptest! {
        #[test]
        fn kl_is_nonnegative_and_zero_on_equal(p in weights(5), q in weights(5)) {
            let sp: f64 = p.iter().sum();
            let sq: f64 = q.iter().sum();
            let p: Vec<f64> = p.iter().map(|x| x / sp).collect();
            let q: Vec<f64> = q.iter().map(|x| x / sq).collect();
            prop_assert!(kl_divergence(&p, &q).unwrap() >= 0.0);
            prop_assert!(kl_divergence(&p, &p).unwrap().abs() <= 1e-12);
        }

        #[test]
        fn chain_rule(w in weights(24)) {
            let j = FiniteJoint::from_weights(vec![2, 3, 4], w).unwrap();
            let lhs = group_mutual_information(&j, &[0], &[1, 2], &[]).unwrap();
            let rhs = group_mutual_information(&j, &[0], &[1], &[]).unwrap()
                + group_mutual_information(&j, &[0], &[2], &[1]).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }
    }
}
