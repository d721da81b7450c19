//! The four bandit agents behind one interface: observe a context, pick an
//! action under ε-greedy, receive the chosen action's reward, update state.
//!
//! One uniform draw per round decides explore-vs-exploit for every agent
//! kind, and the exploration stream is separate from the mask stream, so
//! swapping agents never perturbs another agent's randomness.

mod hdbin;
mod hdprob;
mod hdreal;
mod lineps;

pub use hdbin::HdBinAgent;
pub use hdprob::HdProbAgent;
pub use hdreal::HdRealAgent;
pub use lineps::LinEpsAgent;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypervec::{bits_for_bound, BipolarHV};
use crate::rng::{self, RngStream};

#[derive(Debug, Error, PartialEq)]
pub enum AgentError {
    #[error("no actions to choose from")]
    NoActions,
    #[error("action {action} out of range for {num_actions} actions")]
    InvalidAction { action: usize, num_actions: usize },
    #[error("expected context dimension {expected}, got {got}")]
    ContextDimMismatch { expected: usize, got: usize },
    #[error("agent requires an encoded context but none was provided")]
    MissingEncodedContext,
    #[error("oracle policy requires the environment's best action in the observation")]
    MissingOracleAction,
    #[error("exploration rate {0} must be in [0, 1]")]
    InvalidEpsilon(f64),
    #[error("epsilon grid is empty")]
    EmptyEpsilonGrid,
    #[error("accumulator width q_bits={0} must be between 2 and 15")]
    InvalidQBits(u32),
    #[error("saturation bound kappa={0} must be >= 1")]
    InvalidKappa(i32),
    #[error("initial update probability alpha0={0} must be in [0, 1]")]
    InvalidAlpha(f64),
    #[error("horizon must be >= 1")]
    InvalidHorizon,
    #[error("hypervector dimension must be >= 1")]
    InvalidDimension,
    #[error("{kind} does not take parameter {param}")]
    UnexpectedParam {
        kind: AgentKind,
        param: &'static str,
    },
    #[error("{kind} requires parameter {param}")]
    MissingParam {
        kind: AgentKind,
        param: &'static str,
    },
}

/// One round's input to an agent. `encoded` is present only when the harness
/// ran the context encoder (HD agents); `oracle_action` carries the
/// environment's best arm and is read only by the oracle reference policy.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    pub raw: &'a [f64],
    pub encoded: Option<&'a BipolarHV>,
    pub oracle_action: Option<usize>,
}

/// ε-greedy action choice over precomputed scores.
///
/// Draws one uniform q; with q < ε picks uniformly at random, otherwise the
/// argmax, ties broken by lowest index.
pub fn eps_greedy_pick(
    scores: &[f64],
    epsilon: f64,
    rng: &mut RngStream,
) -> Result<usize, AgentError> {
    if scores.is_empty() {
        return Err(AgentError::NoActions);
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(AgentError::InvalidEpsilon(epsilon));
    }
    let q = rng.next_f64();
    if q < epsilon {
        return Ok(rng.next_index(scores.len()));
    }
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    Ok(best)
}

// ── Configuration ───────────────────────────────────────────────────────

/// Default exploration grid searched when a config gives no ε. Includes
/// the pure-greedy endpoint and a dense low end: the discrete agents often
/// tune below 0.01, so a coarser grid would truncate their optimum.
pub const DEFAULT_EPSILON_GRID: [f64; 8] = [0.0, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3];

/// Exploration rate given either as a single value or a grid to search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsilonSpec {
    Fixed(f64),
    Grid(Vec<f64>),
}

impl Default for EpsilonSpec {
    fn default() -> Self {
        EpsilonSpec::Grid(DEFAULT_EPSILON_GRID.to_vec())
    }
}

impl EpsilonSpec {
    /// The candidate rates, validated: nonempty, each in [0, 1].
    pub fn candidates(&self) -> Result<Vec<f64>, AgentError> {
        let values = match self {
            EpsilonSpec::Fixed(e) => vec![*e],
            EpsilonSpec::Grid(g) => g.clone(),
        };
        if values.is_empty() {
            return Err(AgentError::EmptyEpsilonGrid);
        }
        for &e in &values {
            if !(0.0..=1.0).contains(&e) {
                return Err(AgentError::InvalidEpsilon(e));
            }
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    Lineps,
    HdcbReal,
    HdcbBin,
    HdcbProb,
    Oracle,
}

impl std::fmt::Display for AgentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            AgentKind::Lineps => "lineps",
            AgentKind::HdcbReal => "hdcb_real",
            AgentKind::HdcbBin => "hdcb_bin",
            AgentKind::HdcbProb => "hdcb_prob",
            AgentKind::Oracle => "oracle",
        };
        f.write_str(name)
    }
}

fn default_alpha0() -> f64 {
    0.4
}

/// Declarative agent description as it appears in config files.
///
/// `q_bits` applies to `hdcb_bin` only; `kappa` and `alpha0` to `hdcb_prob`
/// only. Validation rejects parameters on the wrong kind rather than
/// silently ignoring them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub kind: AgentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha0: Option<f64>,
    #[serde(default)]
    pub epsilon: EpsilonSpec,
}

impl AgentSpec {
    pub fn lineps() -> Self {
        Self::bare(AgentKind::Lineps)
    }

    pub fn hdcb_real() -> Self {
        Self::bare(AgentKind::HdcbReal)
    }

    pub fn hdcb_bin(q_bits: u32) -> Self {
        Self {
            q_bits: Some(q_bits),
            ..Self::bare(AgentKind::HdcbBin)
        }
    }

    pub fn hdcb_prob(kappa: i32) -> Self {
        Self {
            kappa: Some(kappa),
            ..Self::bare(AgentKind::HdcbProb)
        }
    }

    pub fn oracle() -> Self {
        Self::bare(AgentKind::Oracle)
    }

    fn bare(kind: AgentKind) -> Self {
        Self {
            kind,
            q_bits: None,
            kappa: None,
            alpha0: None,
            epsilon: EpsilonSpec::default(),
        }
    }

    pub fn with_epsilon(mut self, epsilon: EpsilonSpec) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// Check kind/parameter consistency and the ε values.
    pub fn validate(&self) -> Result<(), AgentError> {
        let kind = self.kind;
        let forbid = |param: &'static str, set: bool| {
            if set {
                Err(AgentError::UnexpectedParam { kind, param })
            } else {
                Ok(())
            }
        };
        match kind {
            AgentKind::HdcbBin => {
                let q = self.q_bits.ok_or(AgentError::MissingParam {
                    kind,
                    param: "q_bits",
                })?;
                if !(2..=15).contains(&q) {
                    return Err(AgentError::InvalidQBits(q));
                }
                forbid("kappa", self.kappa.is_some())?;
                forbid("alpha0", self.alpha0.is_some())?;
            }
            AgentKind::HdcbProb => {
                let kappa = self.kappa.ok_or(AgentError::MissingParam {
                    kind,
                    param: "kappa",
                })?;
                if kappa < 1 {
                    return Err(AgentError::InvalidKappa(kappa));
                }
                let alpha0 = self.alpha0.unwrap_or_else(default_alpha0);
                if !(0.0..=1.0).contains(&alpha0) {
                    return Err(AgentError::InvalidAlpha(alpha0));
                }
                forbid("q_bits", self.q_bits.is_some())?;
            }
            AgentKind::Lineps | AgentKind::HdcbReal | AgentKind::Oracle => {
                forbid("q_bits", self.q_bits.is_some())?;
                forbid("kappa", self.kappa.is_some())?;
                forbid("alpha0", self.alpha0.is_some())?;
            }
        }
        self.epsilon.candidates().map(|_| ())
    }

    /// Stable identifier used in CSV output and filenames; encodes the
    /// bit-width parameter so rows stay distinguishable.
    pub fn label(&self) -> String {
        match self.kind {
            AgentKind::Lineps => "lineps".to_string(),
            AgentKind::HdcbReal => "hdcb_real".to_string(),
            AgentKind::HdcbBin => format!("hdcb_bin_q{}", self.q_bits.unwrap_or(0)),
            AgentKind::HdcbProb => format!("hdcb_prob_k{}", self.kappa.unwrap_or(0)),
            AgentKind::Oracle => "oracle".to_string(),
        }
    }

    /// Bits per stored accumulator component, as reported in summaries.
    pub fn storage_bits(&self) -> u32 {
        match self.kind {
            AgentKind::Lineps | AgentKind::HdcbReal => 32,
            AgentKind::HdcbBin => self.q_bits.unwrap_or(0),
            AgentKind::HdcbProb => self.kappa.map(bits_for_bound).unwrap_or(0),
            AgentKind::Oracle => 0,
        }
    }

    /// Model size in bits for `num_actions` arms at raw context dimension
    /// `context_dim` and hypervector dimension `hv_dim`.
    ///
    /// Ridge agent: N·(d²+d)·32 (matrix + bias vector of 32-bit reals).
    /// Wide HD agent: N·D·32.
    /// Binarized HD agent: N·(D·Q + D + Q) (accumulator + copy + counter).
    /// Saturating HD agent: N·D·ceil(log2(2κ+1)).
    pub fn memory_bits(&self, num_actions: usize, context_dim: usize, hv_dim: usize) -> u64 {
        let n = num_actions as u64;
        let d = context_dim as u64;
        let dd = hv_dim as u64;
        match self.kind {
            AgentKind::Lineps => n * (d * d + d) * 32,
            AgentKind::HdcbReal => n * dd * 32,
            AgentKind::HdcbBin => {
                let q = u64::from(self.q_bits.unwrap_or(0));
                n * (dd * q + dd + q)
            }
            AgentKind::HdcbProb => {
                let bits = self.kappa.map(bits_for_bound).unwrap_or(0);
                n * dd * u64::from(bits)
            }
            AgentKind::Oracle => 0,
        }
    }

    /// Instantiate with a concrete exploration rate.
    ///
    /// `horizon` feeds the saturating agent's decay schedule; the others
    /// ignore it. Per-agent randomness derives from `seed` via distinct
    /// stream tags.
    pub fn build(
        &self,
        epsilon: f64,
        num_actions: usize,
        context_dim: usize,
        hv_dim: usize,
        horizon: u64,
        seed: u64,
    ) -> Result<AnyAgent, AgentError> {
        self.validate()?;
        let agent = match self.kind {
            AgentKind::Lineps => {
                AnyAgent::LinEps(LinEpsAgent::new(num_actions, context_dim, epsilon, seed)?)
            }
            AgentKind::HdcbReal => {
                AnyAgent::HdReal(HdRealAgent::new(num_actions, hv_dim, epsilon, seed)?)
            }
            AgentKind::HdcbBin => AnyAgent::HdBin(HdBinAgent::new(
                num_actions,
                hv_dim,
                self.q_bits.expect("validated"),
                epsilon,
                seed,
            )?),
            AgentKind::HdcbProb => AnyAgent::HdProb(HdProbAgent::new(
                num_actions,
                hv_dim,
                self.kappa.expect("validated"),
                self.alpha0.unwrap_or_else(default_alpha0),
                horizon,
                epsilon,
                seed,
            )?),
            AgentKind::Oracle => AnyAgent::Oracle(OracleAgent::new(num_actions)?),
        };
        Ok(agent)
    }
}

// ── Runtime dispatch ────────────────────────────────────────────────────

/// Reference policy that always plays the environment's best arm, giving
/// the achievable ceiling for a configuration.
#[derive(Debug, Clone)]
pub struct OracleAgent {
    num_actions: usize,
}

impl OracleAgent {
    pub fn new(num_actions: usize) -> Result<Self, AgentError> {
        if num_actions == 0 {
            return Err(AgentError::NoActions);
        }
        Ok(Self { num_actions })
    }

    pub fn select(&self, obs: &Observation) -> Result<usize, AgentError> {
        let action = obs.oracle_action.ok_or(AgentError::MissingOracleAction)?;
        if action >= self.num_actions {
            return Err(AgentError::InvalidAction {
                action,
                num_actions: self.num_actions,
            });
        }
        Ok(action)
    }
}

/// Closed set of agent implementations behind one select/update surface.
#[derive(Debug, Clone)]
pub enum AnyAgent {
    LinEps(LinEpsAgent),
    HdReal(HdRealAgent),
    HdBin(HdBinAgent),
    HdProb(HdProbAgent),
    Oracle(OracleAgent),
}

impl AnyAgent {
    pub fn num_actions(&self) -> usize {
        match self {
            AnyAgent::LinEps(a) => a.num_actions(),
            AnyAgent::HdReal(a) => a.num_actions(),
            AnyAgent::HdBin(a) => a.num_actions(),
            AnyAgent::HdProb(a) => a.num_actions(),
            AnyAgent::Oracle(a) => a.num_actions,
        }
    }

    /// Whether select/update read `Observation::encoded`.
    pub fn needs_encoded_context(&self) -> bool {
        matches!(
            self,
            AnyAgent::HdReal(_) | AnyAgent::HdBin(_) | AnyAgent::HdProb(_)
        )
    }

    pub fn select(&mut self, obs: &Observation) -> Result<usize, AgentError> {
        match self {
            AnyAgent::LinEps(a) => a.select(obs.raw),
            AnyAgent::HdReal(a) => a.select(encoded(obs)?),
            AnyAgent::HdBin(a) => a.select(encoded(obs)?),
            AnyAgent::HdProb(a) => a.select(encoded(obs)?),
            AnyAgent::Oracle(a) => a.select(obs),
        }
    }

    pub fn update(
        &mut self,
        action: usize,
        obs: &Observation,
        reward: f64,
    ) -> Result<(), AgentError> {
        match self {
            AnyAgent::LinEps(a) => a.update(action, obs.raw, reward),
            AnyAgent::HdReal(a) => a.update(action, encoded(obs)?, reward),
            AnyAgent::HdBin(a) => a.update(action, encoded(obs)?, reward),
            AnyAgent::HdProb(a) => a.update(action, encoded(obs)?, reward),
            AnyAgent::Oracle(_) => Ok(()),
        }
    }
}

fn encoded<'a>(obs: &Observation<'a>) -> Result<&'a BipolarHV, AgentError> {
    obs.encoded.ok_or(AgentError::MissingEncodedContext)
}

pub(crate) fn check_action(action: usize, num_actions: usize) -> Result<(), AgentError> {
    if action >= num_actions {
        return Err(AgentError::InvalidAction {
            action,
            num_actions,
        });
    }
    Ok(())
}

pub(crate) fn check_agent_params(
    num_actions: usize,
    dim: usize,
    epsilon: f64,
) -> Result<(), AgentError> {
    if num_actions == 0 {
        return Err(AgentError::NoActions);
    }
    if dim == 0 {
        return Err(AgentError::InvalidDimension);
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(AgentError::InvalidEpsilon(epsilon));
    }
    Ok(())
}

pub(crate) fn explore_stream(seed: u64) -> RngStream {
    RngStream::derived(seed, rng::stream::EXPLORE)
}
