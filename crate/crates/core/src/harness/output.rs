//! Result and density files, written atomically.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{ExperimentResult, OutputFormat};
use crate::envs::{ArmModel, EnvConfig};
use crate::error::{Error, Result};
use crate::inference::ar1_ps_variance;

pub const RESULTS_HEADER: &str = "t,mean_reward,stderr_reward,mean_baseline,mean_regret,stderr_regret,cum_regret";
pub const DENSITIES_HEADER: &str = "arm,algorithm,mu,variance";

/// Writes `contents` to a temporary file in the target directory, then renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[derive(Serialize)]
struct JsonRow {
    t: usize,
    mean_reward: f64,
    stderr_reward: f64,
    mean_baseline: f64,
    mean_regret: f64,
    stderr_regret: f64,
    cum_regret: f64,
    stderr_cum_regret: f64,
}

#[derive(Serialize)]
struct JsonResult<'a> {
    agent: &'a str,
    num_runs: u64,
    horizons: &'a [usize],
    rows: Vec<JsonRow>,
}

/// One file per agent, `<agent>.csv` or `<agent>.json`, inside `dir`.
pub fn write_results(result: &ExperimentResult, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for agg in &result.agents {
        let (path, body) = match format {
            OutputFormat::Csv => {
                let mut s = String::from(RESULTS_HEADER);
                s.push('\n');
                for (t, st) in agg.steps.iter().enumerate() {
                    s.push_str(&format!(
                        "{t},{},{},{},{},{},{}\n",
                        st.reward.mean,
                        st.reward.stderr(),
                        st.baseline.mean,
                        st.regret.mean,
                        st.regret.stderr(),
                        st.cum_regret.mean
                    ));
                }
                (dir.join(format!("{}.csv", agg.agent)), s)
            }
            OutputFormat::Json => {
                let rows = agg
                    .steps
                    .iter()
                    .enumerate()
                    .map(|(t, st)| JsonRow {
                        t,
                        mean_reward: st.reward.mean,
                        stderr_reward: st.reward.stderr(),
                        mean_baseline: st.baseline.mean,
                        mean_regret: st.regret.mean,
                        stderr_regret: st.regret.stderr(),
                        cum_regret: st.cum_regret.mean,
                        stderr_cum_regret: st.cum_regret.stderr(),
                    })
                    .collect();
                let doc = JsonResult { agent: &agg.agent, num_runs: agg.num_runs(), horizons: &result.horizons, rows };
                let mut s = serde_json::to_string_pretty(&doc)?;
                s.push('\n');
                (dir.join(format!("{}.json", agg.agent)), s)
            }
        };
        write_atomic(&path, body.as_bytes())?;
        written.push(path);
    }
    Ok(written)
}

/// Gaussian density parameters of the time-zero mean-reward estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityRow {
    pub arm: usize,
    pub algorithm: &'static str,
    pub mu: f64,
    pub variance: f64,
}

/// Thompson sampling draws from `N(mu_0, sigma_0^2)`; predictive sampling's
/// estimate is `N(mu_0, gamma^2 sigma_0^4 / (gamma^2 sigma_0^2 + x*))`.
pub fn density_rows(env: &EnvConfig) -> Result<Vec<DensityRow>> {
    if !matches!(env, EnvConfig::Ar1(_)) {
        return Err(Error::Unsupported("densities require an ar1 environment".into()));
    }
    let mut rows = Vec::new();
    for (a, arm) in env.arms()?.iter().enumerate() {
        let ArmModel::Gaussian(g) = arm else { unreachable!("ar1 arms are Gaussian") };
        rows.push(DensityRow { arm: a, algorithm: "ts", mu: g.init_mean, variance: g.init_var });
        rows.push(DensityRow {
            arm: a,
            algorithm: "ps",
            mu: g.init_mean,
            variance: ar1_ps_variance(g.gamma, g.delta_sq, g.sigma_sq, g.init_var),
        });
    }
    Ok(rows)
}

pub fn write_densities(rows: &[DensityRow], path: &Path) -> Result<()> {
    let mut s = String::from(DENSITIES_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!("{},{},{},{}\n", r.arm, r.algorithm, r.mu, r.variance));
    }
    write_atomic(path, s.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::Ar1ArmConfig;

    #[test]
    fn densities_for_the_three_arm_example() {
        let env = EnvConfig::Ar1(vec![
            Ar1ArmConfig { gamma: 1.0, delta_sq: 0.0, sigma_sq: 1.0, fixed_mean: Some(1.0) },
            Ar1ArmConfig { gamma: 0.9, delta_sq: 0.19, sigma_sq: 1.0, fixed_mean: None },
            Ar1ArmConfig { gamma: 0.0, delta_sq: 1.0, sigma_sq: 1.0, fixed_mean: None },
        ]);
        let rows = density_rows(&env).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!((rows[0].variance, rows[1].variance), (0.0, 0.0));
        assert!((rows[2].variance - 1.0).abs() < 1e-12);
        assert!((rows[3].variance - 0.564109).abs() < 1e-5);
        assert_eq!(rows[5].variance, 0.0);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("densities.csv");
        write_densities(&rows, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("arm,algorithm,mu,variance\n0,ts,1,0\n"));
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
