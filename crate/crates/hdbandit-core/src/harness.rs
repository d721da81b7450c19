//! Experiment orchestration: one agent against one environment for T
//! rounds, aggregated over R independently seeded replicates, with ε grid
//! search, cumulative trajectories, and the memory-footprint table.
//!
//! Replicate k derives everything from `base_seed + k`, so any replicate is
//! reproducible standalone. Replicates may run in parallel; results are
//! merged by replicate index, never by completion order, so summaries are
//! bitwise reproducible.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{AgentError, AgentSpec, EpsilonSpec, Observation};
use crate::encoding::{ContextEncoder, EncoderError};
use crate::env::{EnvError, SyntheticEnv};

#[derive(Debug, Error, PartialEq)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Encoder(#[from] EncoderError),
}

// ── Configuration ───────────────────────────────────────────────────────

fn default_num_actions() -> usize {
    10
}
fn default_context_dim() -> usize {
    5
}
fn default_hv_dim() -> usize {
    1024
}
fn default_horizon() -> u64 {
    1000
}
fn default_replicates() -> usize {
    50
}
fn default_num_levels() -> usize {
    16
}
fn default_clip_range() -> (f64, f64) {
    (-3.0, 3.0)
}

/// Context-encoder settings as they appear in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncoderConfig {
    #[serde(rename = "L", default = "default_num_levels")]
    pub num_levels: usize,
    #[serde(default = "default_clip_range")]
    pub clip_range: (f64, f64),
}

impl Default for EncoderConfig {
    fn default() -> Self {
        Self {
            num_levels: default_num_levels(),
            clip_range: default_clip_range(),
        }
    }
}

/// Full experiment description; the JSON config file mirrors this struct
/// field for field, and unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(rename = "N", default = "default_num_actions")]
    pub num_actions: usize,
    #[serde(rename = "d", default = "default_context_dim")]
    pub context_dim: usize,
    /// Hypervector dimensionality.
    #[serde(rename = "D", default = "default_hv_dim")]
    pub hv_dim: usize,
    /// Rounds per episode.
    #[serde(rename = "T", default = "default_horizon")]
    pub horizon: u64,
    /// Independently seeded datasets to average over.
    #[serde(rename = "R", default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "canonical_roster")]
    pub agents: Vec<AgentSpec>,
    #[serde(default)]
    pub encoder: EncoderConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields default")
    }
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reject configs that cannot run; messages name the JSON field.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::InvalidConfig(msg));
        if self.num_actions == 0 {
            return bad(format!("N must be >= 1, got {}", self.num_actions));
        }
        if self.context_dim == 0 {
            return bad(format!("d must be >= 1, got {}", self.context_dim));
        }
        if self.hv_dim == 0 {
            return bad(format!("D must be >= 1, got {}", self.hv_dim));
        }
        if self.horizon == 0 {
            return bad(format!("T must be >= 1, got {}", self.horizon));
        }
        if self.replicates == 0 {
            return bad(format!("R must be >= 1, got {}", self.replicates));
        }
        if self.agents.is_empty() {
            return bad("agents must list at least one agent".to_string());
        }
        for spec in &self.agents {
            spec.validate()?;
        }
        if self.encoder.num_levels < 2 {
            return bad(format!(
                "encoder.L must be >= 2, got {}",
                self.encoder.num_levels
            ));
        }
        if self.hv_dim < 2 * (self.encoder.num_levels - 1) {
            return bad(format!(
                "D = {} is too small for encoder.L = {} levels (need D >= {})",
                self.hv_dim,
                self.encoder.num_levels,
                2 * (self.encoder.num_levels - 1)
            ));
        }
        let (lo, hi) = self.encoder.clip_range;
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return bad(format!(
                "encoder.clip_range [{lo}, {hi}] is not a finite non-empty interval"
            ));
        }
        Ok(())
    }

    fn replicate_seed(&self, replicate: usize) -> u64 {
        self.seed.wrapping_add(replicate as u64)
    }
}

/// The eight agents of the benchmark roster: the ridge baseline, the wide
/// HD variant, binarized HD at 2/3/4 bits, and saturating HD at κ=1/3/7
/// (the same 2/3/4 bits per component).
pub fn canonical_roster() -> Vec<AgentSpec> {
    vec![
        AgentSpec::lineps(),
        AgentSpec::hdcb_real(),
        AgentSpec::hdcb_bin(2),
        AgentSpec::hdcb_bin(3),
        AgentSpec::hdcb_bin(4),
        AgentSpec::hdcb_prob(1),
        AgentSpec::hdcb_prob(3),
        AgentSpec::hdcb_prob(7),
    ]
}

// ── Episode execution ───────────────────────────────────────────────────

/// One round of one replicate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    /// 1-based round index.
    pub round: u64,
    pub action: usize,
    pub reward: f64,
    pub cumulative_reward: f64,
    /// Best achievable reward probability this round (oracle ceiling).
    pub oracle_best_prob: f64,
}

/// Run one agent for T rounds against replicate `replicate`'s environment.
///
/// Environment, encoder, and agent all derive from `seed + replicate`, so
/// the episode is reproducible without running earlier replicates. Per
/// round: sample a context, encode it for HD agents (the ridge baseline
/// sees the raw features), select, draw the chosen arm's reward — exactly
/// one reward draw per round — and update.
pub fn run_episode(
    config: &ExperimentConfig,
    spec: &AgentSpec,
    epsilon: f64,
    replicate: usize,
) -> Result<Vec<RunRecord>, HarnessError> {
    config.validate()?;
    let seed = config.replicate_seed(replicate);
    let mut env = SyntheticEnv::new(config.num_actions, config.context_dim, seed)?;
    let mut agent = spec.build(
        epsilon,
        config.num_actions,
        config.context_dim,
        config.hv_dim,
        config.horizon,
        seed,
    )?;
    let encoder = if agent.needs_encoded_context() {
        Some(ContextEncoder::new(
            config.hv_dim,
            config.context_dim,
            config.encoder.num_levels,
            config.encoder.clip_range,
            seed,
        )?)
    } else {
        None
    };

    let mut records = Vec::with_capacity(config.horizon as usize);
    let mut cumulative = 0.0;
    for round in 1..=config.horizon {
        let x = env.sample_context();
        let (best_action, best_prob) = env.best_action(&x)?;
        let encoded = match &encoder {
            Some(enc) => Some(enc.encode_context(&x)?),
            None => None,
        };
        let obs = Observation {
            raw: &x,
            encoded: encoded.as_ref(),
            oracle_action: Some(best_action),
        };
        let action = agent.select(&obs)?;
        let reward = env.sample_reward(&x, action)?;
        agent.update(action, &obs, reward)?;
        cumulative += reward;
        records.push(RunRecord {
            round,
            action,
            reward,
            cumulative_reward: cumulative,
            oracle_best_prob: best_prob,
        });
    }
    Ok(records)
}

// ── Aggregation ─────────────────────────────────────────────────────────

/// Cross-replicate aggregate for one (agent, config, ε) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub epsilon: f64,
    pub replicates: usize,
    /// Mean over replicates of cumulative reward at the horizon divided by
    /// T — the headline per-round reward.
    pub mean_reward: f64,
    /// Sample standard deviation (n−1) of the per-replicate horizon metric.
    pub std_reward: f64,
    pub stderr_reward: f64,
    /// Per-round mean cumulative reward across replicates (length T).
    pub mean_cumulative: Vec<f64>,
    /// Per-round standard error of the cumulative reward (length T).
    pub stderr_cumulative: Vec<f64>,
}

impl Summary {
    /// Aggregate replicate episodes. Results are sorted by replicate index
    /// before any floating-point accumulation, so the outcome does not
    /// depend on arrival order.
    pub fn from_indexed_replicates(
        epsilon: f64,
        horizon: u64,
        mut replicates: Vec<(usize, Vec<RunRecord>)>,
    ) -> Self {
        assert!(!replicates.is_empty(), "no replicates to aggregate");
        replicates.sort_by_key(|(k, _)| *k);
        let r = replicates.len();
        let t = horizon as usize;

        let horizon_metrics: Vec<f64> = replicates
            .iter()
            .map(|(_, recs)| recs[t - 1].cumulative_reward / horizon as f64)
            .collect();
        let mean_reward = horizon_metrics.iter().sum::<f64>() / r as f64;
        let std_reward = sample_std(&horizon_metrics, mean_reward);
        let stderr_reward = std_reward / (r as f64).sqrt();

        let mut mean_cumulative = vec![0.0; t];
        let mut stderr_cumulative = vec![0.0; t];
        for round in 0..t {
            let values: Vec<f64> = replicates
                .iter()
                .map(|(_, recs)| recs[round].cumulative_reward)
                .collect();
            let mean = values.iter().sum::<f64>() / r as f64;
            mean_cumulative[round] = mean;
            stderr_cumulative[round] = sample_std(&values, mean) / (r as f64).sqrt();
        }

        Self {
            epsilon,
            replicates: r,
            mean_reward,
            std_reward,
            stderr_reward,
            mean_cumulative,
            stderr_cumulative,
        }
    }
}

fn sample_std(values: &[f64], mean: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    var.sqrt()
}

/// Run R replicates at a fixed exploration rate and aggregate.
pub fn run_experiment_at(
    config: &ExperimentConfig,
    spec: &AgentSpec,
    epsilon: f64,
) -> Result<Summary, HarnessError> {
    config.validate()?;
    spec.validate()?;
    let indexed: Vec<(usize, Vec<RunRecord>)> = (0..config.replicates)
        .into_par_iter()
        .map(|k| run_episode(config, spec, epsilon, k).map(|recs| (k, recs)))
        .collect::<Result<_, _>>()?;
    Ok(Summary::from_indexed_replicates(
        epsilon,
        config.horizon,
        indexed,
    ))
}

/// Grid-search ε: run the full experiment once per candidate (identical
/// replicate seeds each time) and return (best ε, one summary per
/// candidate, in grid order). Ties go to the smaller ε.
pub fn grid_search_epsilon(
    config: &ExperimentConfig,
    spec: &AgentSpec,
    grid: &[f64],
) -> Result<(f64, Vec<Summary>), HarnessError> {
    let candidates = EpsilonSpec::Grid(grid.to_vec()).candidates()?;
    let mut summaries = Vec::with_capacity(candidates.len());
    for &eps in &candidates {
        summaries.push(run_experiment_at(config, spec, eps)?);
    }
    let mut best = &summaries[0];
    for s in &summaries[1..] {
        if s.mean_reward > best.mean_reward
            || (s.mean_reward == best.mean_reward && s.epsilon < best.epsilon)
        {
            best = s;
        }
    }
    Ok((best.epsilon, summaries))
}

/// Run one agent under its declared ε policy: fixed rate → one experiment;
/// grid → grid search, returning the best cell's summary.
pub fn run_experiment(
    config: &ExperimentConfig,
    spec: &AgentSpec,
) -> Result<Summary, HarnessError> {
    match &spec.epsilon {
        EpsilonSpec::Fixed(eps) => run_experiment_at(config, spec, *eps),
        EpsilonSpec::Grid(grid) => {
            let (best_eps, summaries) = grid_search_epsilon(config, spec, grid)?;
            Ok(summaries
                .into_iter()
                .find(|s| s.epsilon == best_eps)
                .expect("best ε comes from the grid"))
        }
    }
}

// ── Sweep ───────────────────────────────────────────────────────────────

/// The benchmark's (N, d) grid.
pub const SWEEP_NUM_ACTIONS: [usize; 3] = [10, 15, 20];
pub const SWEEP_CONTEXT_DIMS: [usize; 3] = [5, 10, 15];

/// One tuned (agent, N, d) cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub spec: AgentSpec,
    pub num_actions: usize,
    pub context_dim: usize,
    pub hv_dim: usize,
    pub summary: Summary,
}

/// The (N, d, agent) cells a sweep of `specs` will run, in output order.
pub fn sweep_plan(specs: &[AgentSpec]) -> Vec<(usize, usize, AgentSpec)> {
    let mut plan = Vec::new();
    for &n in &SWEEP_NUM_ACTIONS {
        for &d in &SWEEP_CONTEXT_DIMS {
            for spec in specs {
                plan.push((n, d, spec.clone()));
            }
        }
    }
    plan
}

/// Run `specs` over the full (N, d) grid, tuning ε per cell. `base`
/// supplies everything except N, d, and the agent roster.
pub fn run_sweep_filtered(
    base: &ExperimentConfig,
    specs: &[AgentSpec],
) -> Result<Vec<SweepCell>, HarnessError> {
    base.validate()?;
    sweep_plan(specs)
        .into_iter()
        .map(|(n, d, spec)| run_sweep_cell(base, n, d, &spec))
        .collect()
}

/// One cell of a sweep: `base` with N and d overridden, ε tuned per the
/// agent's ε policy.
pub fn run_sweep_cell(
    base: &ExperimentConfig,
    num_actions: usize,
    context_dim: usize,
    spec: &AgentSpec,
) -> Result<SweepCell, HarnessError> {
    let config = ExperimentConfig {
        num_actions,
        context_dim,
        agents: vec![spec.clone()],
        ..base.clone()
    };
    let summary = run_experiment(&config, spec)?;
    Ok(SweepCell {
        spec: spec.clone(),
        num_actions,
        context_dim,
        hv_dim: base.hv_dim,
        summary,
    })
}

/// The full benchmark sweep: canonical roster over the (N, d) grid.
pub fn run_sweep(base: &ExperimentConfig) -> Result<Vec<SweepCell>, HarnessError> {
    run_sweep_filtered(base, &canonical_roster())
}

// ── Memory table ────────────────────────────────────────────────────────

/// Context dimensionalities tabulated in the memory report.
pub const MEMORY_DIMS: [usize; 5] = [8, 16, 32, 64, 128];

#[derive(Debug, Clone, PartialEq)]
pub struct MemoryRow {
    pub algorithm: String,
    /// Bits per stored accumulator component.
    pub bits: u32,
    pub context_dim: usize,
    pub kib: f64,
}

/// Model sizes for the canonical roster across context dimensionalities.
/// Rows are algorithm-major in roster order, then ascending d.
pub fn memory_table(num_actions: usize, context_dims: &[usize], hv_dim: usize) -> Vec<MemoryRow> {
    let mut rows = Vec::with_capacity(canonical_roster().len() * context_dims.len());
    for spec in canonical_roster() {
        for &d in context_dims {
            let bits_total = spec.memory_bits(num_actions, d, hv_dim);
            rows.push(MemoryRow {
                algorithm: spec.label(),
                bits: spec.storage_bits(),
                context_dim: d,
                kib: bits_total as f64 / 8.0 / 1024.0,
            });
        }
    }
    rows
}
