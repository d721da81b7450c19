//! HD bandit with Q-bit saturating accumulators and binary working copies.
//!
//! Accumulators live in the Q-bit signed range [−(2^(Q−1)−1), +(2^(Q−1)−1)]
//! with saturation (overflow between resets is clipped, not wrapped).
//! Selection uses Hamming distance against a per-arm binary copy, which is
//! recomputed as binarize_sign(accumulator) after each update to that arm —
//! the cheapest reading of keeping "temporary, binarized versions" in sync.
//! A per-arm counter triggers a full reset after every 2^Q updates: the
//! accumulator itself collapses to its ±1 binarization and the counter
//! returns to zero.

use crate::encoding::RewardEncoder;
use crate::hypervec::{
    binarize_sign, bind, clip_saturate_in_place, hamming, BipolarHV, SatIntHV, UpdateMask,
};
use crate::rng::RngStream;

use super::{check_action, check_agent_params, eps_greedy_pick, explore_stream, AgentError};

#[derive(Debug, Clone)]
pub struct HdBinAgent {
    num_actions: usize,
    dim: usize,
    q_bits: u32,
    epsilon: f64,
    accumulators: Vec<SatIntHV>,
    copies: Vec<BipolarHV>,
    counters: Vec<u32>,
    reward_encoder: RewardEncoder,
    explore_rng: RngStream,
}

impl HdBinAgent {
    pub fn new(
        num_actions: usize,
        dim: usize,
        q_bits: u32,
        epsilon: f64,
        seed: u64,
    ) -> Result<Self, AgentError> {
        check_agent_params(num_actions, dim, epsilon)?;
        if !(2..=15).contains(&q_bits) {
            return Err(AgentError::InvalidQBits(q_bits));
        }
        let bound = (1i32 << (q_bits - 1)) - 1;
        let accumulators = (0..num_actions)
            .map(|_| SatIntHV::zeros(dim, bound).expect("bound >= 1 for q_bits >= 2"))
            .collect::<Vec<_>>();
        let copies = accumulators.iter().map(binarize_sign).collect();
        Ok(Self {
            num_actions,
            dim,
            q_bits,
            epsilon,
            accumulators,
            copies,
            counters: vec![0; num_actions],
            reward_encoder: RewardEncoder::new(dim),
            explore_rng: explore_stream(seed),
        })
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn q_bits(&self) -> u32 {
        self.q_bits
    }

    /// Updates after which an arm's accumulator collapses to ±1.
    pub fn reset_period(&self) -> u32 {
        1 << self.q_bits
    }

    pub fn accumulator(&self, action: usize) -> Result<&SatIntHV, AgentError> {
        check_action(action, self.num_actions)?;
        Ok(&self.accumulators[action])
    }

    pub fn binary_copy(&self, action: usize) -> Result<&BipolarHV, AgentError> {
        check_action(action, self.num_actions)?;
        Ok(&self.copies[action])
    }

    pub fn counter(&self, action: usize) -> Result<u32, AgentError> {
        check_action(action, self.num_actions)?;
        Ok(self.counters[action])
    }

    pub fn select(&mut self, context: &BipolarHV) -> Result<usize, AgentError> {
        self.check_context(context)?;
        let scores = self
            .copies
            .iter()
            .map(|copy| -(hamming(copy, context).expect("dims checked") as f64))
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
        let reset_period = self.reset_period();
        let acc = &mut self.accumulators[action];
        clip_saturate_in_place(acc, &signal, &UpdateMask::all_set(self.dim)).expect("dims checked");
        self.copies[action] = binarize_sign(acc);
        self.counters[action] += 1;
        if self.counters[action] == reset_period {
            let collapsed: Vec<i32> = self.copies[action]
                .components()
                .iter()
                .map(|&v| i32::from(v))
                .collect();
            *acc = SatIntHV::from_components(collapsed, acc.bound()).expect("±1 within bound");
            self.counters[action] = 0;
        }
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
