//! Monte-Carlo regret experiments.
//!
//! Each run draws a fresh environment from a prior and evaluates every
//! configured policy on it. Arm `k`'s rewards come from a stream keyed by
//! `(run, k)` only, so within a run all policies see the same environment
//! and the same reward sequence on each arm; only the order in which they
//! consume it differs. Policy randomness (Thompson sampling) has its own
//! stream per policy.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{config, domain, Result};
use crate::policies::{PolicySpec, PolicyState};
use crate::reward_models::{
    bernoulli_kl_unchecked, m_function, standard_exponential, standard_normal, ArmDistribution,
    ArmParams, Family,
};
use crate::rng::{run_seed, stream, RngStream, StreamRole};

/// Prior from which arm parameters are drawn at the start of each run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PriorSpec {
    /// `mu_k ~ N(0, 1)`, unit reward variance.
    NormalMeansUnitVar,
    /// `mu_k ~ N(0, 1)`, `sigma_k^2 ~ Exp(mean 1)`.
    NormalMeansExpVar,
    /// `p_k ~ Uniform(0, 1)`.
    UniformBernoulli,
}

impl PriorSpec {
    pub fn family(self) -> Family {
        match self {
            PriorSpec::NormalMeansUnitVar => Family::NormalKnownVar,
            PriorSpec::NormalMeansExpVar => Family::NormalUnknownVar,
            PriorSpec::UniformBernoulli => Family::Bernoulli,
        }
    }

    /// Example name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            PriorSpec::NormalMeansUnitVar => "normal-known",
            PriorSpec::NormalMeansExpVar => "normal-unknown",
            PriorSpec::UniformBernoulli => "bernoulli",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            PriorSpec::NormalMeansUnitVar,
            PriorSpec::NormalMeansExpVar,
            PriorSpec::UniformBernoulli,
        ]
        .into_iter()
        .find(|p| p.name() == name)
    }
}

/// Draws `arms` arm distributions in arm order (all means first, then all
/// variances for [`PriorSpec::NormalMeansExpVar`]).
pub fn draw_environment<R: Rng + ?Sized>(
    prior: PriorSpec,
    arms: usize,
    rng: &mut R,
) -> Result<Vec<ArmDistribution>> {
    match prior {
        PriorSpec::NormalMeansUnitVar => (0..arms)
            .map(|_| ArmDistribution::normal(standard_normal(rng)))
            .collect(),
        PriorSpec::NormalMeansExpVar => {
            let means: Vec<f64> = (0..arms).map(|_| standard_normal(rng)).collect();
            means
                .into_iter()
                // An exact zero has probability 2^-53; keep the variance positive.
                .map(|mu| ArmDistribution::normal_unknown_var(mu, standard_exponential(rng).max(f64::MIN_POSITIVE)))
                .collect()
        }
        PriorSpec::UniformBernoulli => (0..arms)
            .map(|_| ArmDistribution::bernoulli(rng.random::<f64>()))
            .collect(),
    }
}

/// Largest arm mean.
pub fn best_mean(env: &[ArmDistribution]) -> f64 {
    env.iter().map(|a| a.mean()).fold(f64::NEG_INFINITY, f64::max)
}

/// Pull counts and regret of one policy over one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// `N_k` per arm; sums to the horizon.
    pub pulls: Vec<u64>,
    /// `sum_k (mu* - mu_k) N_k`.
    pub regret: f64,
    /// `sum_k (mu* - mu_k) (N_k - init)^+`, ignoring the forced allocation.
    pub tilde_regret: f64,
    pub seed: u64,
}

/// Random streams consumed by one policy over one run.
#[derive(Debug, Clone)]
pub struct RunStreams {
    seed: u64,
    rewards: Vec<RngStream>,
    policy: RngStream,
}

impl RunStreams {
    /// Streams for policy number `policy` in the run seeded by `seed`.
    pub fn new(seed: u64, policy: usize, arms: usize) -> Self {
        Self {
            seed,
            rewards: (0..arms)
                .map(|k| stream(seed, StreamRole::Rewards, k as u64))
                .collect(),
            policy: stream(seed, StreamRole::Policy, policy as u64),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Runs `spec` for `horizon` rewards on `env`.
pub fn run_single(
    env: &[ArmDistribution],
    spec: &PolicySpec,
    horizon: u64,
    streams: &mut RunStreams,
) -> Result<RunOutcome> {
    run_single_observed(env, spec, horizon, streams, |_, _, _| {})
}

/// [`run_single`], calling `observe(step, arm, reward)` after every pull.
pub fn run_single_observed<F>(
    env: &[ArmDistribution],
    spec: &PolicySpec,
    horizon: u64,
    streams: &mut RunStreams,
    mut observe: F,
) -> Result<RunOutcome>
where
    F: FnMut(u64, usize, f64),
{
    let arms = env.len();
    if env.iter().any(|a| a.family() != spec.family()) {
        return Err(config(format!(
            "{} policy configured for {:?} rewards but the environment differs",
            spec.name(),
            spec.family()
        )));
    }
    check_horizon(arms, horizon, spec.init_per_arm())?;
    if streams.rewards.len() != arms {
        return Err(config("one reward stream per arm is required"));
    }
    let mut state = PolicyState::new(*spec, arms)?;
    for step in 0..horizon {
        let arm = state.choose_arm(&mut streams.policy)?;
        let x = env[arm].draw(&mut streams.rewards[arm]);
        state.record_reward(arm, x)?;
        observe(step, arm, x);
    }
    let pulls: Vec<u64> = state.stats().iter().map(|s| s.count).collect();
    let (regret, tilde_regret) = regrets(env, &pulls, spec.init_per_arm());
    Ok(RunOutcome {
        pulls,
        regret,
        tilde_regret,
        seed: streams.seed,
    })
}

fn check_horizon(arms: usize, horizon: u64, init: u64) -> Result<()> {
    if arms < 1 {
        return Err(config("a bandit needs at least one arm"));
    }
    if horizon < arms as u64 * init {
        return Err(config(format!(
            "N must be at least K times the initial allocation ({arms} x {init} = {})",
            arms as u64 * init
        )));
    }
    Ok(())
}

/// Regret and initialization-free regret of the given pull counts.
pub fn regrets(env: &[ArmDistribution], pulls: &[u64], init: u64) -> (f64, f64) {
    let best = best_mean(env);
    let mut regret = 0.0;
    let mut tilde = 0.0;
    for (arm, &n) in env.iter().zip(pulls) {
        let gap = best - arm.mean();
        regret += gap * n as f64;
        tilde += gap * n.saturating_sub(init) as f64;
    }
    (regret, tilde)
}

/// Lai-Robbins style constant `sum_{k: mu_k < mu*} (mu* - mu_k) / D(theta_k | theta*)`.
///
/// `D` is `gap^2 / 2` for unit-variance normals, `M(gap / sigma_k)` for
/// normals with unknown variance and the Bernoulli divergence otherwise.
/// Returns 0 when every arm is optimal.
pub fn lower_bound_constant(env: &[ArmDistribution]) -> Result<f64> {
    let Some(first) = env.first() else {
        return Ok(0.0);
    };
    if env.iter().any(|a| a.family() != first.family()) {
        return Err(domain("lower bound constant needs a single reward family"));
    }
    let best = best_mean(env);
    let mut r = 0.0;
    for arm in env {
        let gap = best - arm.mean();
        if gap <= 0.0 {
            continue;
        }
        let divergence = match arm.params() {
            ArmParams::NormalKnownVar { .. } => 0.5 * gap * gap,
            ArmParams::NormalUnknownVar { sigma2, .. } => m_function(gap / sigma2.sqrt()),
            ArmParams::Bernoulli { p } => bernoulli_kl_unchecked(best, p),
        };
        r += gap / divergence;
    }
    Ok(r)
}

/// A batch of runs comparing several policies on paired environments.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub prior: PriorSpec,
    pub arms: usize,
    pub horizon: u64,
    pub runs: usize,
    pub base_seed: u64,
    pub policies: Vec<PolicySpec>,
    /// Worker threads; 0 uses all available cores.
    pub threads: usize,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 {
            return Err(config("the number of runs must be at least 1"));
        }
        if self.arms < 1 {
            return Err(config("K must be at least 1"));
        }
        let init = self.policies.iter().map(|p| p.init_per_arm()).max().unwrap_or(1);
        check_horizon(self.arms, self.horizon, init)?;
        let family = self.prior.family();
        if let Some(p) = self.policies.iter().find(|p| p.family() != family) {
            return Err(config(format!(
                "policy {} ({:?}) does not match the {} example",
                p.name(),
                p.family(),
                self.prior.name()
            )));
        }
        Ok(())
    }
}

/// Everything that happened in one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run: u64,
    pub seed: u64,
    pub env: Vec<ArmDistribution>,
    pub lower_bound: f64,
    /// One outcome per configured policy, in configuration order.
    pub outcomes: Vec<RunOutcome>,
    /// Wall time per policy, in seconds.
    pub seconds: Vec<f64>,
}

/// Aggregate over all runs for one policy.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub example: &'static str,
    pub policy: &'static str,
    pub params: String,
    pub arms: usize,
    pub horizon: u64,
    pub runs: usize,
    pub base_seed: u64,
    pub mean_regret: f64,
    /// Sample standard deviation over runs divided by `sqrt(runs)`; 0 for one run.
    pub se_regret: f64,
    pub mean_tilde_regret: f64,
    /// Median over runs of [`lower_bound_constant`].
    pub lower_bound_r: f64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct BatchResult {
    pub records: Vec<RunRecord>,
    pub summaries: Vec<RunSummary>,
}

impl BatchResult {
    /// Per-run regrets of the policy at position `policy`, in run order.
    pub fn regrets(&self, policy: usize) -> Vec<f64> {
        self.records.iter().map(|r| r.outcomes[policy].regret).collect()
    }
}

/// Executes one run: draws its environment and evaluates every policy.
pub fn run_indexed(config: &RunConfig, run: u64) -> Result<RunRecord> {
    let seed = run_seed(config.base_seed, run);
    let mut env_rng = stream(seed, StreamRole::Environment, 0);
    let env = draw_environment(config.prior, config.arms, &mut env_rng)?;
    let mut outcomes = Vec::with_capacity(config.policies.len());
    let mut seconds = Vec::with_capacity(config.policies.len());
    for (i, spec) in config.policies.iter().enumerate() {
        let start = Instant::now();
        let mut streams = RunStreams::new(seed, i, config.arms);
        outcomes.push(run_single(&env, spec, config.horizon, &mut streams)?);
        seconds.push(start.elapsed().as_secs_f64());
    }
    Ok(RunRecord {
        run,
        seed,
        lower_bound: lower_bound_constant(&env)?,
        env,
        outcomes,
        seconds,
    })
}

/// Runs the whole batch, in parallel across runs, and aggregates by run index.
pub fn run_batch(config: &RunConfig) -> Result<BatchResult> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| config_err(e.to_string()))?;
    let records = pool.install(|| {
        (0..config.runs as u64)
            .into_par_iter()
            .map(|run| run_indexed(config, run))
            .collect::<Result<Vec<_>>>()
    })?;
    let summaries = summarize(config, &records);
    Ok(BatchResult { records, summaries })
}

fn config_err(msg: String) -> crate::Error {
    config(format!("thread pool: {msg}"))
}

fn summarize(config: &RunConfig, records: &[RunRecord]) -> Vec<RunSummary> {
    let mut bounds: Vec<f64> = records.iter().map(|r| r.lower_bound).collect();
    let lower_bound_r = median(&mut bounds);
    config
        .policies
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let regrets: Vec<f64> = records.iter().map(|r| r.outcomes[i].regret).collect();
            let tilde: Vec<f64> = records.iter().map(|r| r.outcomes[i].tilde_regret).collect();
            let (mean_regret, se_regret) = mean_and_se(&regrets);
            RunSummary {
                example: config.prior.name(),
                policy: spec.name(),
                params: spec.params(),
                arms: config.arms,
                horizon: config.horizon,
                runs: config.runs,
                base_seed: config.base_seed,
                mean_regret,
                se_regret,
                mean_tilde_regret: mean_and_se(&tilde).0,
                lower_bound_r,
                wall_seconds: records.iter().map(|r| r.seconds[i]).sum(),
            }
        })
        .collect()
}

/// Mean and standard error (sample s.d. over `sqrt(n)`, 0 when `n < 2`).
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1) as f64 / n as f64).sqrt())
}

/// Mean and standard error of the run-by-run differences `a - b`.
pub fn paired_difference(a: &[f64], b: &[f64]) -> (f64, f64) {
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    mean_and_se(&diffs)
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}
