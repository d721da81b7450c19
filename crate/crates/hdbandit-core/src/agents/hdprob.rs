//! HD bandit with bounded accumulators and probabilistic decayed updates.
//!
//! Each arm's accumulator is an integer vector saturating at ±κ. Selection
//! scores arms by the plain inner product with the encoded context (no
//! normalization). An update binds the thermometer reward code with the
//! context and applies the resulting ±1 step only to components whose
//! uniform draw falls below the round's update probability
//! α_t = α₀·max(0, 1 − (t−1)/T), which decays linearly from α₀ at the first
//! round to α₀/T at round T and 0 beyond. The bounded steps make learning a
//! saturating random walk whose storage cost is ceil(log2(2κ+1)) bits per
//! component.

use crate::encoding::RewardEncoder;
use crate::hypervec::{
    bind, clip_saturate_in_place, inner_product, BipolarHV, SatIntHV, UpdateMask,
};
use crate::rng::{self, RngStream};

use super::{check_action, check_agent_params, eps_greedy_pick, explore_stream, AgentError};

#[derive(Debug, Clone)]
pub struct HdProbAgent {
    num_actions: usize,
    dim: usize,
    kappa: i32,
    alpha0: f64,
    horizon: u64,
    /// Current round, starting at 1; advances once per update.
    t: u64,
    epsilon: f64,
    accumulators: Vec<SatIntHV>,
    reward_encoder: RewardEncoder,
    explore_rng: RngStream,
    mask_rng: RngStream,
}

impl HdProbAgent {
    pub fn new(
        num_actions: usize,
        dim: usize,
        kappa: i32,
        alpha0: f64,
        horizon: u64,
        epsilon: f64,
        seed: u64,
    ) -> Result<Self, AgentError> {
        check_agent_params(num_actions, dim, epsilon)?;
        if kappa < 1 {
            return Err(AgentError::InvalidKappa(kappa));
        }
        if !(0.0..=1.0).contains(&alpha0) {
            return Err(AgentError::InvalidAlpha(alpha0));
        }
        if horizon == 0 {
            return Err(AgentError::InvalidHorizon);
        }
        Ok(Self {
            num_actions,
            dim,
            kappa,
            alpha0,
            horizon,
            t: 1,
            epsilon,
            accumulators: (0..num_actions)
                .map(|_| SatIntHV::zeros(dim, kappa).expect("kappa >= 1"))
                .collect(),
            reward_encoder: RewardEncoder::new(dim),
            explore_rng: explore_stream(seed),
            mask_rng: RngStream::derived(seed, rng::stream::MASK),
        })
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    pub fn round(&self) -> u64 {
        self.t
    }

    pub fn accumulator(&self, action: usize) -> Result<&SatIntHV, AgentError> {
        check_action(action, self.num_actions)?;
        Ok(&self.accumulators[action])
    }

    /// Update probability for the current round.
    ///
    /// Evaluated as (α₀ · remaining) / T so that the round-T value is the
    /// exact floating-point quotient α₀/T, not a differently rounded
    /// product.
    pub fn alpha(&self) -> f64 {
        let elapsed = self.t - 1;
        let remaining = self.horizon.saturating_sub(elapsed);
        self.alpha0 * remaining as f64 / self.horizon as f64
    }

    pub fn select(&mut self, context: &BipolarHV) -> Result<usize, AgentError> {
        self.check_context(context)?;
        let scores = self
            .accumulators
            .iter()
            .map(|acc| inner_product(acc, context).expect("dims checked") as f64)
            .collect::<Vec<_>>();
        eps_greedy_pick(&scores, self.epsilon, &mut self.explore_rng)
    }

    pub fn update(
        &mut self,
        action: usize,
        context: &BipolarHV,
        reward: f64,
    ) -> Result<(), AgentError> {
        check_action(action, self.num_actions)?;
        self.check_context(context)?;
        let signal = bind(&self.reward_encoder.encode(reward), context).expect("dims checked");
        // the mask is drawn every round, including α=0 rounds, so the mask
        // stream position depends only on the round count
        let mask = UpdateMask::sample(self.dim, self.alpha(), &mut self.mask_rng);
        clip_saturate_in_place(&mut self.accumulators[action], &signal, &mask)
            .expect("dims checked");
        self.t += 1;
        Ok(())
    }

    fn check_context(&self, context: &BipolarHV) -> Result<(), AgentError> {
        if context.dim() != self.dim {
            return Err(AgentError::ContextDimMismatch {
                expected: self.dim,
                got: context.dim(),
            });
        }
        Ok(())
    }
}
