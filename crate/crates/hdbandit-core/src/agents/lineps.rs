//! ε-greedy linear bandit on per-arm ridge regression.
//!
//! Each arm keeps A = λI + Σ x xᵀ (λ=1) and b = Σ r·x over the rounds it was
//! chosen; the value estimate is θ̂ = A⁻¹b and an arm's score for context x
//! is xᵀθ̂. The inverse is maintained incrementally by the Sherman–Morrison
//! rank-one update instead of re-solving each round.

use crate::rng::RngStream;

use super::{check_action, check_agent_params, eps_greedy_pick, explore_stream, AgentError};

/// One arm's ridge statistics. Matrices are row-major `dim * dim` buffers.
#[derive(Debug, Clone)]
pub struct LinArmState {
    a: Vec<f64>,
    a_inv: Vec<f64>,
    b: Vec<f64>,
}

impl LinArmState {
    fn new(dim: usize) -> Self {
        Self {
            a: identity(dim),
            a_inv: identity(dim),
            b: vec![0.0; dim],
        }
    }
}

#[derive(Debug, Clone)]
pub struct LinEpsAgent {
    num_actions: usize,
    dim: usize,
    epsilon: f64,
    arms: Vec<LinArmState>,
    explore_rng: RngStream,
}

impl LinEpsAgent {
    /// Fresh agent with A = I and b = 0 for every arm.
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
            arms: (0..num_actions).map(|_| LinArmState::new(dim)).collect(),
            explore_rng: explore_stream(seed),
        })
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Current value estimate θ̂ = A⁻¹b for one arm.
    pub fn theta_hat(&self, action: usize) -> Result<Vec<f64>, AgentError> {
        check_action(action, self.num_actions)?;
        let arm = &self.arms[action];
        Ok(mat_vec(&arm.a_inv, &arm.b, self.dim))
    }

    /// Maintained inverse for one arm (row-major), for cross-checking
    /// against direct solves.
    pub fn inverse(&self, action: usize) -> Result<&[f64], AgentError> {
        check_action(action, self.num_actions)?;
        Ok(&self.arms[action].a_inv)
    }

    /// Accumulated design matrix A for one arm (row-major).
    pub fn design_matrix(&self, action: usize) -> Result<&[f64], AgentError> {
        check_action(action, self.num_actions)?;
        Ok(&self.arms[action].a)
    }

    pub fn select(&mut self, x: &[f64]) -> Result<usize, AgentError> {
        self.check_context(x)?;
        let scores: Vec<f64> = self
            .arms
            .iter()
            .map(|arm| {
                let theta = mat_vec(&arm.a_inv, &arm.b, self.dim);
                dot(x, &theta)
            })
            .collect();
        eps_greedy_pick(&scores, self.epsilon, &mut self.explore_rng)
    }

    /// A += xxᵀ, b += r·x, with A⁻¹ updated in place:
    /// A⁻¹ ← A⁻¹ − (A⁻¹x)(A⁻¹x)ᵀ / (1 + xᵀA⁻¹x), valid because A stays
    /// symmetric so xᵀA⁻¹ = (A⁻¹x)ᵀ.
    pub fn update(&mut self, action: usize, x: &[f64], reward: f64) -> Result<(), AgentError> {
        check_action(action, self.num_actions)?;
        self.check_context(x)?;
        let dim = self.dim;
        let arm = &mut self.arms[action];

        let u = mat_vec(&arm.a_inv, x, dim);
        let denom = 1.0 + dot(x, &u);
        for i in 0..dim {
            for j in 0..dim {
                arm.a_inv[i * dim + j] -= u[i] * u[j] / denom;
                arm.a[i * dim + j] += x[i] * x[j];
            }
        }
        for (bi, &xi) in arm.b.iter_mut().zip(x) {
            *bi += reward * xi;
        }
        Ok(())
    }

    fn check_context(&self, x: &[f64]) -> Result<(), AgentError> {
        if x.len() != self.dim {
            return Err(AgentError::ContextDimMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }
}

fn identity(dim: usize) -> Vec<f64> {
    let mut m = vec![0.0; dim * dim];
    for i in 0..dim {
        m[i * dim + i] = 1.0;
    }
    m
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(m: &[f64], v: &[f64], dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|i| dot(&m[i * dim..(i + 1) * dim], v))
        .collect()
}
