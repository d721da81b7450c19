//! Seedable synthetic contextual-bandit environment with logistic rewards.
//!
//! Per-action weights and biases are drawn i.i.d. uniform on [−1, 1] from
//! the seed; contexts are standard normal; the reward for action a in
//! context x is a Bernoulli draw with probability sigmoid(xᵀθ_a + β_a).
//! This is an OBP-style generator — any seedable family with
//! context-dependent best arms — not a byte-for-byte OBP port.
//!
//! Model-init, context, and reward randomness live on separate named
//! streams derived from the seed, so consuming extra rewards never shifts
//! future contexts and a replicate is reproducible in isolation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{self, RngStream};

#[derive(Debug, Error, PartialEq)]
pub enum EnvError {
    #[error("need at least 1 action")]
    NoActions,
    #[error("context dimension must be >= 1")]
    InvalidDim,
    #[error("action {action} out of range for {num_actions} actions")]
    InvalidAction { action: usize, num_actions: usize },
    #[error("expected context length {expected}, got {got}")]
    ContextDimMismatch { expected: usize, got: usize },
    #[error("parameter shape mismatch: {0}")]
    BadParams(String),
    #[error("parameter file parse failure: {0}")]
    Json(String),
}

/// Everything needed to replay an environment exactly: the seed plus the
/// realized model weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvParams {
    pub seed: u64,
    #[serde(rename = "N")]
    pub num_actions: usize,
    #[serde(rename = "d")]
    pub context_dim: usize,
    pub theta: Vec<Vec<f64>>,
    pub beta: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SyntheticEnv {
    params: EnvParams,
    context_rng: RngStream,
    reward_rng: RngStream,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl SyntheticEnv {
    /// Draw a fresh model from `seed`: θ_a entries then β_a values, all
    /// i.i.d. uniform on [−1, 1] from the model-init stream.
    pub fn new(num_actions: usize, context_dim: usize, seed: u64) -> Result<Self, EnvError> {
        if num_actions == 0 {
            return Err(EnvError::NoActions);
        }
        if context_dim == 0 {
            return Err(EnvError::InvalidDim);
        }
        let mut model_rng = RngStream::derived(seed, rng::stream::MODEL_INIT);
        let theta = (0..num_actions)
            .map(|_| {
                (0..context_dim)
                    .map(|_| model_rng.next_uniform(-1.0, 1.0))
                    .collect()
            })
            .collect();
        let beta = (0..num_actions)
            .map(|_| model_rng.next_uniform(-1.0, 1.0))
            .collect();
        Self::from_params(EnvParams {
            seed,
            num_actions,
            context_dim,
            theta,
            beta,
        })
    }

    /// Build from explicit parameters (replay or crafted models). Context
    /// and reward streams still derive from `params.seed`.
    pub fn from_params(params: EnvParams) -> Result<Self, EnvError> {
        if params.num_actions == 0 {
            return Err(EnvError::NoActions);
        }
        if params.context_dim == 0 {
            return Err(EnvError::InvalidDim);
        }
        if params.theta.len() != params.num_actions {
            return Err(EnvError::BadParams(format!(
                "theta has {} rows for {} actions",
                params.theta.len(),
                params.num_actions
            )));
        }
        for (a, row) in params.theta.iter().enumerate() {
            if row.len() != params.context_dim {
                return Err(EnvError::BadParams(format!(
                    "theta row {a} has length {} for context dimension {}",
                    row.len(),
                    params.context_dim
                )));
            }
        }
        if params.beta.len() != params.num_actions {
            return Err(EnvError::BadParams(format!(
                "beta has {} entries for {} actions",
                params.beta.len(),
                params.num_actions
            )));
        }
        let seed = params.seed;
        Ok(Self {
            params,
            context_rng: RngStream::derived(seed, rng::stream::CONTEXT),
            reward_rng: RngStream::derived(seed, rng::stream::REWARD),
        })
    }

    pub fn num_actions(&self) -> usize {
        self.params.num_actions
    }

    pub fn context_dim(&self) -> usize {
        self.params.context_dim
    }

    pub fn params(&self) -> &EnvParams {
        &self.params
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.params).expect("params always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, EnvError> {
        let params: EnvParams =
            serde_json::from_str(text).map_err(|e| EnvError::Json(e.to_string()))?;
        Self::from_params(params)
    }

    /// Next context: i.i.d. standard normal coordinates.
    pub fn sample_context(&mut self) -> Vec<f64> {
        (0..self.params.context_dim)
            .map(|_| self.context_rng.next_normal())
            .collect()
    }

    /// sigmoid(xᵀθ_a + β_a); always strictly inside (0, 1).
    pub fn reward_prob(&self, x: &[f64], action: usize) -> Result<f64, EnvError> {
        self.check_action(action)?;
        self.check_context(x)?;
        let logit: f64 = self.params.theta[action]
            .iter()
            .zip(x)
            .map(|(t, x)| t * x)
            .sum::<f64>()
            + self.params.beta[action];
        Ok(sigmoid(logit))
    }

    /// Bernoulli reward for the chosen action, drawn from the reward stream.
    pub fn sample_reward(&mut self, x: &[f64], action: usize) -> Result<f64, EnvError> {
        let p = self.reward_prob(x, action)?;
        Ok(f64::from(u8::from(self.reward_rng.next_bernoulli(p))))
    }

    /// Arm with the highest reward probability for this context and that
    /// probability; ties go to the lowest index.
    pub fn best_action(&self, x: &[f64]) -> Result<(usize, f64), EnvError> {
        self.check_context(x)?;
        let mut best = 0;
        let mut best_p = self.reward_prob(x, 0)?;
        for a in 1..self.params.num_actions {
            let p = self.reward_prob(x, a)?;
            if p > best_p {
                best = a;
                best_p = p;
            }
        }
        Ok((best, best_p))
    }

    fn check_action(&self, action: usize) -> Result<(), EnvError> {
        if action >= self.params.num_actions {
            return Err(EnvError::InvalidAction {
                action,
                num_actions: self.params.num_actions,
            });
        }
        Ok(())
    }

    fn check_context(&self, x: &[f64]) -> Result<(), EnvError> {
        if x.len() != self.params.context_dim {
            return Err(EnvError::ContextDimMismatch {
                expected: self.params.context_dim,
                got: x.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crafted(theta: Vec<Vec<f64>>, beta: Vec<f64>, seed: u64) -> SyntheticEnv {
        let num_actions = theta.len();
        let context_dim = theta[0].len();
        SyntheticEnv::from_params(EnvParams {
            seed,
            num_actions,
            context_dim,
            theta,
            beta,
        })
        .unwrap()
    }

    #[test]
    fn same_seed_same_model_and_streams() {
        let mut a = SyntheticEnv::new(5, 3, 42).unwrap();
        let mut b = SyntheticEnv::new(5, 3, 42).unwrap();
        assert_eq!(a.params(), b.params());
        for _ in 0..20 {
            let xa = a.sample_context();
            let xb = b.sample_context();
            assert_eq!(xa, xb);
            assert_eq!(
                a.sample_reward(&xa, 2).unwrap(),
                b.sample_reward(&xb, 2).unwrap()
            );
        }
        let c = SyntheticEnv::new(5, 3, 43).unwrap();
        assert_ne!(a.params().theta, c.params().theta);
    }

    #[test]
    fn model_weights_in_unit_interval() {
        let env = SyntheticEnv::new(20, 10, 7).unwrap();
        for row in &env.params().theta {
            for &w in row {
                assert!((-1.0..1.0).contains(&w));
            }
        }
        for &b in &env.params().beta {
            assert!((-1.0..1.0).contains(&b));
        }
    }

    #[test]
    fn context_moments_standard_normal() {
        // Monte Carlo oracle: per-coordinate mean within ±0.02 of 0 and
        // variance within ±0.05 of 1 over 100,000 context draws.
        let mut env = SyntheticEnv::new(2, 2, 11).unwrap();
        let draws = 100_000;
        let mut sums = [0.0f64; 2];
        let mut sq_sums = [0.0f64; 2];
        for _ in 0..draws {
            let x = env.sample_context();
            for j in 0..2 {
                sums[j] += x[j];
                sq_sums[j] += x[j] * x[j];
            }
        }
        for j in 0..2 {
            let mean = sums[j] / f64::from(draws);
            let var = sq_sums[j] / f64::from(draws) - mean * mean;
            assert!(mean.abs() < 0.02, "coordinate {j} mean {mean}");
            assert!((var - 1.0).abs() < 0.05, "coordinate {j} var {var}");
        }
    }

    #[test]
    fn reward_prob_closed_forms() {
        let env = crafted(vec![vec![0.0, 0.0]], vec![0.0], 1);
        assert_eq!(env.reward_prob(&[5.0, -3.0], 0).unwrap(), 0.5);

        let env = crafted(vec![vec![1.0, 0.0]], vec![0.0], 1);
        let p = env.reward_prob(&[1.0, 0.0], 0).unwrap();
        assert!((p - 0.7310585786300049).abs() < 1e-12);
    }

    #[test]
    fn reward_prob_monotone_in_beta() {
        let mut last = 0.0;
        for i in 0..10 {
            let beta = -2.0 + f64::from(i) * 0.5;
            let env = crafted(vec![vec![0.3, -0.7]], vec![beta], 1);
            let p = env.reward_prob(&[1.0, 0.5], 0).unwrap();
            assert!(p > last);
            assert!(p > 0.0 && p < 1.0);
            last = p;
        }
    }

    #[test]
    fn reward_prob_strictly_inside_unit_interval() {
        let mut env = SyntheticEnv::new(10, 5, 3).unwrap();
        for _ in 0..1000 {
            let x = env.sample_context();
            for a in 0..10 {
                let p = env.reward_prob(&x, a).unwrap();
                assert!(p > 0.0 && p < 1.0);
            }
        }
    }

    #[test]
    fn reward_frequency_matches_probability() {
        // Monte Carlo oracle: empirical frequency at a fixed (x, a) within
        // ±0.01 of reward_prob over 100,000 draws.
        let mut env = SyntheticEnv::new(3, 4, 19).unwrap();
        let x = env.sample_context();
        let p = env.reward_prob(&x, 1).unwrap();
        let draws = 100_000;
        let mut hits = 0u32;
        for _ in 0..draws {
            let r = env.sample_reward(&x, 1).unwrap();
            assert!(r == 0.0 || r == 1.0);
            if r == 1.0 {
                hits += 1;
            }
        }
        let freq = f64::from(hits) / f64::from(draws);
        assert!((freq - p).abs() < 0.01, "freq {freq} vs p {p}");
    }

    #[test]
    fn best_action_cases() {
        let single = crafted(vec![vec![0.5]], vec![0.0], 1);
        assert_eq!(single.best_action(&[1.0]).unwrap().0, 0);

        // doubled weights win whenever the shared logit is positive
        let env = crafted(vec![vec![0.4, 0.2], vec![0.8, 0.4]], vec![0.1, 0.1], 1);
        let x = [1.0, 1.0];
        assert_eq!(env.best_action(&x).unwrap().0, 1);
        let x_neg = [-1.0, -1.0];
        assert_eq!(env.best_action(&x_neg).unwrap().0, 0);
    }

    #[test]
    fn best_action_dominates_every_arm() {
        let mut env = SyntheticEnv::new(8, 5, 23).unwrap();
        for _ in 0..200 {
            let x = env.sample_context();
            let (_, best_p) = env.best_action(&x).unwrap();
            for a in 0..8 {
                assert!(best_p >= env.reward_prob(&x, a).unwrap());
            }
        }
    }

    #[test]
    fn streams_are_independent() {
        let mut plain = SyntheticEnv::new(4, 3, 31).unwrap();
        let mut noisy = SyntheticEnv::new(4, 3, 31).unwrap();
        let expected: Vec<Vec<f64>> = (0..10).map(|_| plain.sample_context()).collect();
        for (i, want) in expected.iter().enumerate() {
            let x = noisy.sample_context();
            assert_eq!(&x, want, "context {i} shifted by reward draws");
            // burn reward draws between contexts; contexts must not move
            for _ in 0..5 {
                noisy.sample_reward(&x, 0).unwrap();
            }
        }
    }

    #[test]
    fn environment_is_learnable() {
        // the mean best-arm probability must strictly beat the mean
        // uniform-arm probability, otherwise no agent ordering is meaningful
        let mut env = SyntheticEnv::new(10, 5, 47).unwrap();
        let mut best_sum = 0.0;
        let mut uniform_sum = 0.0;
        for _ in 0..1000 {
            let x = env.sample_context();
            best_sum += env.best_action(&x).unwrap().1;
            for a in 0..10 {
                uniform_sum += env.reward_prob(&x, a).unwrap() / 10.0;
            }
        }
        assert!(
            best_sum / 1000.0 > uniform_sum / 1000.0,
            "best {best_sum} vs uniform {uniform_sum}"
        );
    }

    #[test]
    fn params_json_round_trip() {
        let env = SyntheticEnv::new(3, 2, 99).unwrap();
        let json = env.to_json();
        assert!(json.contains("\"N\": 3"));
        assert!(json.contains("\"d\": 2"));
        let back = SyntheticEnv::from_json(&json).unwrap();
        assert_eq!(back.params(), env.params());
    }

    #[test]
    fn params_validation() {
        assert_eq!(SyntheticEnv::new(0, 3, 1).unwrap_err(), EnvError::NoActions);
        assert_eq!(
            SyntheticEnv::new(3, 0, 1).unwrap_err(),
            EnvError::InvalidDim
        );

        let bad_theta = EnvParams {
            seed: 1,
            num_actions: 2,
            context_dim: 3,
            theta: vec![vec![0.0; 3]],
            beta: vec![0.0; 2],
        };
        assert!(matches!(
            SyntheticEnv::from_params(bad_theta).unwrap_err(),
            EnvError::BadParams(_)
        ));

        let bad_row = EnvParams {
            seed: 1,
            num_actions: 2,
            context_dim: 3,
            theta: vec![vec![0.0; 3], vec![0.0; 2]],
            beta: vec![0.0; 2],
        };
        assert!(matches!(
            SyntheticEnv::from_params(bad_row).unwrap_err(),
            EnvError::BadParams(_)
        ));

        assert!(matches!(
            SyntheticEnv::from_json("{not json").unwrap_err(),
            EnvError::Json(_)
        ));
        assert!(matches!(
            SyntheticEnv::from_json(
                r#"{"seed":1,"N":1,"d":1,"theta":[[0.0]],"beta":[0.0],"extra":1}"#
            )
            .unwrap_err(),
            EnvError::Json(_)
        ));
    }

    #[test]
    fn action_and_context_validation() {
        let mut env = SyntheticEnv::new(3, 2, 5).unwrap();
        let x = env.sample_context();
        assert_eq!(
            env.reward_prob(&x, 3).unwrap_err(),
            EnvError::InvalidAction {
                action: 3,
                num_actions: 3
            }
        );
        assert_eq!(
            env.reward_prob(&[0.0; 5], 0).unwrap_err(),
            EnvError::ContextDimMismatch {
                expected: 2,
                got: 5
            }
        );
    }
}
