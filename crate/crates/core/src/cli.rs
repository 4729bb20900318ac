//! Command-line front end: `run`, `bound`, `densities` and `oracle`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::envs::EnvConfig;
use crate::error::{Error, Result};
use crate::harness::{density_rows, run_experiment, write_densities, write_results, ExperimentConfig};
use crate::infotheory::{delta_bounds_modulated, info_ratio_bound, ps_regret_bound_modulated, sigma_sg};
use crate::oracle::{analyze, ExactPolicy, TinyInstance, MAX_FUTURE, MAX_HORIZON};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "predsamp", version, about = "Predictive and Thompson sampling experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Monte Carlo experiment and write per-agent results.
    Run(CommonArgs),
    /// Print the analytic regret bound of a modulated Bernoulli config.
    Bound(CommonArgs),
    /// Write time-zero mean-estimate densities of an ar1 config.
    Densities(CommonArgs),
    /// Exact enumeration on a tiny modulated Bernoulli config.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub runs: Option<usize>,
    /// Worker threads; 0 picks automatically.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Enumerated horizon cap; the config horizon is used if smaller.
    #[arg(long, default_value_t = 2)]
    pub max_horizon: usize,
    /// Future window length for predictive sampling, the baseline and the information ratio.
    #[arg(long, default_value_t = 2)]
    pub future: usize,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Unsupported(_) | Error::Budget { .. } | Error::Contract(_) => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}

/// Loads the config and applies command-line overrides.
pub fn effective_config(args: &CommonArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(runs) = args.runs {
        cfg.num_runs = runs;
    }
    if let Some(out) = &args.out {
        cfg.output.dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn echo(out: &mut dyn Write, cfg: &ExperimentConfig) -> Result<()> {
    writeln!(out, "effective config:\n{}", cfg.to_json())?;
    Ok(())
}

pub fn cmd_run(args: &CommonArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = effective_config(args)?;
    echo(out, &cfg)?;
    let result = run_experiment(&cfg, args.threads)?;
    let files = write_results(&result, &cfg.output.dir, cfg.output.format)?;
    writeln!(out, "truncation horizons: {:?}", result.horizons)?;
    writeln!(out, "{:<16} {:>16} {:>12} {:>16}", "agent", "cum_regret", "stderr", "reward/step")?;
    for agg in &result.agents {
        let (m, se) = agg.final_cum_regret();
        writeln!(out, "{:<16} {:>16.6} {:>12.6} {:>16.6}", agg.agent, m, se, agg.mean_reward_per_step())?;
    }
    if result.agents.iter().any(|a| a.stderr_is_degenerate()) {
        writeln!(out, "note: single run, standard errors reported as 0")?;
    }
    for f in files {
        writeln!(out, "wrote {}", f.display())?;
    }
    Ok(())
}

pub fn cmd_bound(args: &CommonArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = effective_config(args)?;
    echo(out, &cfg)?;
    let env = cfg.environment.to_env()?;
    let EnvConfig::ModulatedBernoulli(m) = &env else {
        return Err(Error::Unsupported("bound requires a modulated_bernoulli environment".into()));
    };
    let (d0, dt) = delta_bounds_modulated(m);
    let sigma = sigma_sg(&env)?;
    let gamma_bar = info_ratio_bound(m.arms.len(), sigma);
    let bound = ps_regret_bound_modulated(m, cfg.horizon as u64)?;
    writeln!(out, "delta_0 bound     {d0:.6}")?;
    writeln!(out, "delta_t bound     {dt:.6}")?;
    writeln!(out, "sigma_sg          {sigma:.6}")?;
    writeln!(out, "gamma_bar bound   {gamma_bar:.6}")?;
    writeln!(out, "regret bound      {bound:.6}  (T = {})", cfg.horizon)?;
    Ok(())
}

pub fn cmd_densities(args: &CommonArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = effective_config(args)?;
    echo(out, &cfg)?;
    let rows = density_rows(&cfg.environment.to_env()?)?;
    let path = cfg.output.dir.join("densities.csv");
    write_densities(&rows, &path)?;
    writeln!(out, "{:<6} {:<10} {:>12} {:>12}", "arm", "algorithm", "mu", "variance")?;
    for r in &rows {
        writeln!(out, "{:<6} {:<10} {:>12.6} {:>12.6}", r.arm, r.algorithm, r.mu, r.variance)?;
    }
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

/// Returns whether every bound check passed.
pub fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<bool> {
    let cfg = effective_config(&args.common)?;
    echo(out, &cfg)?;
    if args.max_horizon == 0 || args.max_horizon > MAX_HORIZON {
        return Err(Error::Config(format!("--max-horizon must lie in 1..={MAX_HORIZON}")));
    }
    if args.future == 0 || args.future > MAX_FUTURE {
        return Err(Error::Config(format!("--future must lie in 1..={MAX_FUTURE}")));
    }
    let env = cfg.environment.to_env()?;
    let horizon = cfg.horizon.min(args.max_horizon);
    let inst = TinyInstance::from_env(&env, horizon, args.future)?;
    writeln!(out, "oracle horizon {horizon}, future window {}, enumeration size {}", args.future, inst.enumeration_size())?;

    let mut ok = true;
    let mut mark = |pass: bool| {
        ok &= pass;
        if pass {
            "ok"
        } else {
            "FAIL"
        }
    };

    let policies = [ExactPolicy::Ts, ExactPolicy::Ps, ExactPolicy::Uniform];
    let analyses = policies.iter().map(|&p| analyze(&inst, p)).collect::<Result<Vec<_>>>()?;
    writeln!(out, "baseline value per step {:.10}", analyses[0].baseline_value)?;
    for an in &analyses {
        writeln!(out, "value {:<8} {:.10}", name(an.policy), an.total_value())?;
    }

    let (d0_bound, dt_bound) = delta_bounds_modulated(&inst.config);
    for an in &analyses {
        for t in 0..horizon {
            let d = an.delta(t)?;
            let (bound, detail) = if t == 0 {
                (d0_bound, String::new())
            } else {
                (dt_bound, format!(" two-form gap {:.2e}", (an.delta_entropy_form[t] - an.delta_mi_form[t]).abs()))
            };
            let status = mark(d <= bound + 1e-12);
            writeln!(out, "delta {:<8} t={t} {d:.10} bound {bound:.6}{detail} {status}", name(an.policy))?;
        }
    }

    let ps = &analyses[1];
    let gamma_limit = info_ratio_bound(inst.num_arms(), sigma_sg(&env)?);
    for t in 0..horizon {
        let g = ps.gamma(t)?;
        match g.ratio {
            Some(r) => {
                let status = mark(r <= gamma_limit + 1e-12);
                writeln!(out, "gamma ps t={t} {r:.10} limit {gamma_limit:.6} margin {:.6} {status}", gamma_limit - r)?;
            }
            None => {
                let status = mark(g.numerator <= 1e-20);
                writeln!(out, "gamma ps t={t} undefined (numerator {:.3e}, no information) {status}", g.numerator)?;
            }
        }
    }
    let regret = ps.regret();
    let bound = ps.regret_bound()?;
    let status = mark(regret <= bound + 1e-12);
    writeln!(out, "regret ps {regret:.10} bound {bound:.10} margin {:.10} {status}", bound - regret)?;
    Ok(ok)
}

fn name(p: ExactPolicy) -> &'static str {
    match p {
        ExactPolicy::Ts => "ts",
        ExactPolicy::Ps => "ps",
        ExactPolicy::Uniform => "uniform",
    }
}

/// Dispatches a parsed command, reporting errors to `err`, and returns the exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a, out).map(|()| true),
        Command::Bound(a) => cmd_bound(a, out).map(|()| true),
        Command::Densities(a) => cmd_densities(a, out).map(|()| true),
        Command::Oracle(a) => cmd_oracle(a, out),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            let _ = writeln!(err, "error: oracle bound check failed");
            EXIT_RUNTIME
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (program name first) and executes.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, out, err),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_CONFIG
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            }
        }
    }
}
