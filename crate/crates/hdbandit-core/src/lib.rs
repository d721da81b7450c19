//! Contextual-bandit agents on hyperdimensional representations, with a
//! seedable synthetic benchmark harness.
//!
//! Four agents share one select/update interface:
//!
//! - a ridge-regression ε-greedy baseline on raw features ([`LinEpsAgent`]),
//! - an HD agent with wide 32-bit accumulators and cosine selection
//!   ([`HdRealAgent`]),
//! - an HD agent with Q-bit saturating accumulators, binary working copies,
//!   Hamming selection, and periodic re-binarization ([`HdBinAgent`]),
//! - an HD agent with ±κ-bounded accumulators updated probabilistically
//!   per component under a linearly decaying rate ([`HdProbAgent`]).
//!
//! The pipeline: [`SyntheticEnv`] draws standard-normal contexts and
//! Bernoulli rewards from per-arm logistic models; [`ContextEncoder`] maps
//! raw features into bipolar hypervectors (record encoding over quantized
//! levels) and [`RewardEncoder`] maps scalar rewards to thermometer codes;
//! the harness runs episodes over replicate datasets, grid-searches ε, and
//! aggregates summaries, trajectories, and a memory-footprint table that
//! the CSV report module renders.
//!
//! Everything is driven by a counter-based splittable RNG ([`RngStream`]),
//! so every result is a pure function of the experiment seed.

pub mod agents;
pub mod encoding;
pub mod env;
pub mod harness;
pub mod hypervec;
pub mod report;
pub mod rng;

pub use agents::{
    eps_greedy_pick, AgentError, AgentKind, AgentSpec, AnyAgent, EpsilonSpec, HdBinAgent,
    HdProbAgent, HdRealAgent, LinEpsAgent, Observation, OracleAgent, DEFAULT_EPSILON_GRID,
};
pub use encoding::{ContextEncoder, EncoderError, RewardEncoder};
pub use env::{EnvError, EnvParams, SyntheticEnv};
pub use harness::{
    canonical_roster, grid_search_epsilon, memory_table, run_episode, run_experiment,
    run_experiment_at, run_sweep, run_sweep_cell, run_sweep_filtered, sweep_plan, EncoderConfig,
    ExperimentConfig, HarnessError, MemoryRow, RunRecord, Summary, SweepCell, MEMORY_DIMS,
    SWEEP_CONTEXT_DIMS, SWEEP_NUM_ACTIONS,
};
pub use hypervec::{
    binarize_sign, bind, bits_for_bound, clip_saturate, clip_saturate_in_place, cosine, hamming,
    inner_product, BipolarHV, Components, HvError, SatIntHV, UpdateMask,
};
pub use rng::RngStream;
