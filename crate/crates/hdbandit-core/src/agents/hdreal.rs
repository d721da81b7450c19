//! HD bandit with wide (32-bit) unbounded accumulators.
//!
//! Each arm keeps an integer accumulator of reward-bound contexts; selection
//! scores arms by cosine similarity between accumulator and encoded context,
//! and an update superposes the reward-bound context onto the chosen arm:
//! acc += reward_code ⊙ context.

use crate::encoding::RewardEncoder;
use crate::hypervec::{cosine, BipolarHV};
use crate::rng::RngStream;

use super::{check_action, check_agent_params, eps_greedy_pick, explore_stream, AgentError};

#[derive(Debug, Clone)]
pub struct HdRealAgent {
    num_actions: usize,
    dim: usize,
    epsilon: f64,
    accumulators: Vec<Vec<i32>>,
    reward_encoder: RewardEncoder,
    explore_rng: RngStream,
}

impl HdRealAgent {
    pub fn new(
        num_actions: usize,
        dim: usize,
        epsilon: f64,
        seed: u64,
    ) -> Result<Self, AgentError> {
        check_agent_params(num_actions, dim, epsilon)?;
        Ok(Self {
            num_actions,
            dim,
            epsilon,
            accumulators: vec![vec![0; dim]; num_actions],
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

    pub fn accumulator(&self, action: usize) -> Result<&[i32], AgentError> {
        check_action(action, self.num_actions)?;
        Ok(&self.accumulators[action])
    }

    /// For scale-invariance checks: multiply every accumulator by a
    /// positive constant.
    #[cfg(test)]
    pub(crate) fn scale_accumulators(&mut self, factor: i32) {
        assert!(factor > 0);
        for acc in &mut self.accumulators {
            for v in acc.iter_mut() {
                *v *= factor;
            }
        }
    }

    pub fn select(&mut self, context: &BipolarHV) -> Result<usize, AgentError> {
        self.check_context(context)?;
        let scores = self
            .accumulators
            .iter()
            .map(|acc| cosine(acc.as_slice(), context).expect("dims checked"))
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
        let reward_code = self.reward_encoder.encode(reward);
        let acc = &mut self.accumulators[action];
        for ((v, &r), &x) in acc
            .iter_mut()
            .zip(reward_code.components())
            .zip(context.components())
        {
            *v += i32::from(r) * i32::from(x);
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
