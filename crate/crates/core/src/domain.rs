//! Shared domain types and the policy contract.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};
use crate::stream::RandomStream;

/// Index of an arm, valid for an environment with `A` arms when `index < A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ActionId(pub usize);

impl ActionId {
    pub fn index(self) -> usize {
        self.0
    }

    pub fn checked(index: usize, num_arms: usize) -> Result<Self> {
        if index < num_arms {
            Ok(ActionId(index))
        } else {
            Err(contract(format!("action {index} out of range for {num_arms} arms")))
        }
    }
}

/// The rewards every arm would have produced at one timestep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardVector(Vec<f64>);

impl RewardVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(contract("reward vector must be non-empty"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(contract(format!("non-finite reward {v}")));
        }
        Ok(RewardVector(values))
    }

    pub(crate) fn from_finite(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        RewardVector(values)
    }

    pub fn get(&self, action: ActionId) -> f64 {
        self.0[action.0]
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Append-only record of `(A_k, R_{k+1, A_k})` pairs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct History {
    steps: Vec<(ActionId, f64)>,
}

impl History {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, action: ActionId, reward: f64) {
        self.steps.push((action, reward));
    }

    pub fn steps(&self) -> &[(ActionId, f64)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// An agent that picks arms from its belief state and learns from observed rewards.
///
/// `select` must depend only on the internal belief (a function of the
/// history seen through `observe`) and on fresh draws from `rng`.
pub trait Policy {
    fn num_arms(&self) -> usize;

    fn select(&self, rng: &mut RandomStream) -> Result<ActionId>;

    fn observe(&mut self, action: ActionId, reward: f64) -> Result<()>;
}

/// Returns an index attaining the maximum, uniformly among exact ties.
pub fn argmax_uniform(values: &[f64], rng: &mut RandomStream) -> Result<ActionId> {
    let ties = argmax_set(values)?;
    if ties.len() == 1 {
        return Ok(ActionId(ties[0]));
    }
    Ok(ActionId(ties[rng.random_range(0..ties.len())]))
}

/// All indices attaining the maximum (exact floating equality).
pub fn argmax_set(values: &[f64]) -> Result<Vec<usize>> {
    if values.is_empty() {
        return Err(contract("argmax of an empty array"));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(contract("argmax over NaN"));
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == max)
        .map(|(i, _)| i)
        .collect())
}
