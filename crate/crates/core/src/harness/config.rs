//! Experiment configuration file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agents::AgentKind;
use crate::envs::{
    Ar1ArmConfig, DiscreteDist, EnvConfig, ModulatedArm, ModulatedBernoulliConfig, StationaryBernoulliConfig,
    StationaryGaussianArm, StationaryGaussianConfig,
};
use crate::error::{config, Result};
use crate::inference::Truncation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub horizon: usize,
    pub num_runs: usize,
    #[serde(default)]
    pub truncation: Truncation,
    pub environment: EnvironmentSpec,
    pub agents: Vec<AgentSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvKind {
    StationaryBernoulli,
    StationaryGaussian,
    ModulatedBernoulli,
    Ar1,
}

/// Environment kind plus per-arm parameter arrays. Which arrays are required
/// depends on the kind:
///
/// * `stationary_bernoulli`: `prior_support`, optional `prior_probs` (uniform if absent)
/// * `modulated_bernoulli`: `q`, `prior_support`, optional `prior_probs`
/// * `ar1`: `gamma`, `delta_sq`, `sigma_sq`, optional `fixed_mean` (null entries for `gamma < 1`)
/// * `stationary_gaussian`: `prior_mean`, `prior_var`, `sigma_sq`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSpec {
    pub kind: EnvKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_support: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_probs: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_sq: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_sq: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_mean: Option<Vec<Option<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_mean: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_var: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub kind: AgentKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_dir() -> PathBuf {
    PathBuf::from("results")
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: default_dir(), format: OutputFormat::Csv }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(config("horizon must be at least 1"));
        }
        if self.num_runs == 0 {
            return Err(config("num_runs must be at least 1"));
        }
        self.truncation.validate()?;
        if self.agents.is_empty() {
            return Err(config("at least one agent is required"));
        }
        for (i, a) in self.agents.iter().enumerate() {
            if self.agents[..i].contains(a) {
                return Err(config(format!("agent {} listed twice", a.kind.name())));
            }
        }
        let env = self.environment.to_env()?;
        let all_gaussian = matches!(env, EnvConfig::Ar1(_) | EnvConfig::StationaryGaussian(_));
        if self.agents.iter().any(|a| a.kind == AgentKind::PsClosedForm) && !all_gaussian {
            return Err(config("ps_closed_form requires a Gaussian environment"));
        }
        Ok(())
    }

    /// A stable 64-bit digest of the resolved configuration.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        serde_json::to_string(self).expect("config serializes").hash(&mut h);
        h.finish()
    }
}

impl EnvironmentSpec {
    fn allowed(&self) -> &'static [&'static str] {
        match self.kind {
            EnvKind::StationaryBernoulli => &["prior_support", "prior_probs"],
            EnvKind::ModulatedBernoulli => &["q", "prior_support", "prior_probs"],
            EnvKind::Ar1 => &["gamma", "delta_sq", "sigma_sq", "fixed_mean"],
            EnvKind::StationaryGaussian => &["prior_mean", "prior_var", "sigma_sq"],
        }
    }

    fn present(&self) -> Vec<(&'static str, usize)> {
        let mut out = Vec::new();
        let mut add = |name, len: Option<usize>| {
            if let Some(n) = len {
                out.push((name, n));
            }
        };
        add("q", self.q.as_ref().map(Vec::len));
        add("prior_support", self.prior_support.as_ref().map(Vec::len));
        add("prior_probs", self.prior_probs.as_ref().map(Vec::len));
        add("gamma", self.gamma.as_ref().map(Vec::len));
        add("delta_sq", self.delta_sq.as_ref().map(Vec::len));
        add("sigma_sq", self.sigma_sq.as_ref().map(Vec::len));
        add("fixed_mean", self.fixed_mean.as_ref().map(Vec::len));
        add("prior_mean", self.prior_mean.as_ref().map(Vec::len));
        add("prior_var", self.prior_var.as_ref().map(Vec::len));
        out
    }

    /// Validates array lengths and lowers to an [`EnvConfig`].
    pub fn to_env(&self) -> Result<EnvConfig> {
        let present = self.present();
        let allowed = self.allowed();
        if let Some((name, _)) = present.iter().find(|(n, _)| !allowed.contains(n)) {
            return Err(config(format!("key `{name}` does not apply to this environment kind")));
        }
        let num_arms = present.first().map(|p| p.1).unwrap_or(0);
        if num_arms == 0 {
            return Err(config("environment needs at least one arm"));
        }
        if let Some((name, n)) = present.iter().find(|(_, n)| *n != num_arms) {
            return Err(config(format!("`{name}` has {n} entries, expected {num_arms}")));
        }
        fn need<'a, T>(v: &'a Option<Vec<T>>, name: &str) -> Result<&'a Vec<T>> {
            v.as_ref().ok_or_else(|| config(format!("missing per-arm array `{name}`")))
        }
        let priors = || -> Result<Vec<DiscreteDist>> {
            let support = need(&self.prior_support, "prior_support")?;
            match &self.prior_probs {
                Some(probs) => support
                    .iter()
                    .zip(probs)
                    .map(|(s, p)| DiscreteDist::new(s.clone(), p.clone()))
                    .collect(),
                None => support.iter().map(|s| DiscreteDist::uniform(s.clone())).collect(),
            }
        };
        let env = match self.kind {
            EnvKind::StationaryBernoulli => EnvConfig::StationaryBernoulli(StationaryBernoulliConfig { priors: priors()? }),
            EnvKind::ModulatedBernoulli => {
                let q = need(&self.q, "q")?;
                EnvConfig::ModulatedBernoulli(ModulatedBernoulliConfig {
                    arms: q
                        .iter()
                        .zip(priors()?)
                        .map(|(&q, prior)| ModulatedArm { q, prior })
                        .collect(),
                })
            }
            EnvKind::Ar1 => {
                let gamma = need(&self.gamma, "gamma")?;
                let delta_sq = need(&self.delta_sq, "delta_sq")?;
                let sigma_sq = need(&self.sigma_sq, "sigma_sq")?;
                EnvConfig::Ar1(
                    (0..num_arms)
                        .map(|a| Ar1ArmConfig {
                            gamma: gamma[a],
                            delta_sq: delta_sq[a],
                            sigma_sq: sigma_sq[a],
                            fixed_mean: self.fixed_mean.as_ref().and_then(|f| f[a]),
                        })
                        .collect(),
                )
            }
            EnvKind::StationaryGaussian => {
                let m = need(&self.prior_mean, "prior_mean")?;
                let v = need(&self.prior_var, "prior_var")?;
                let s = need(&self.sigma_sq, "sigma_sq")?;
                EnvConfig::StationaryGaussian(StationaryGaussianConfig {
                    arms: (0..num_arms)
                        .map(|a| StationaryGaussianArm { prior_mean: m[a], prior_var: v[a], noise_var: s[a] })
                        .collect(),
                })
            }
        };
        env.arms()?;
        Ok(env)
    }
}
