//! Encoders mapping raw observations into bipolar hypervectors.
//!
//! Contexts use a record encoding: each feature index gets a random role
//! vector, each quantization level gets a level vector, and the context is
//! the sign of the superposition of role-level bindings. Level vectors form
//! a chain where neighbouring levels differ in one fixed block of
//! components, so similarity falls off linearly with level distance.
//!
//! Scalar rewards in [0, 1] use a thermometer code: the first
//! floor(r * dim) components are +1, the rest -1.

use thiserror::Error;

use crate::hypervec::{bind, BipolarHV};
use crate::rng::{self, RngStream};

#[derive(Debug, Error, PartialEq)]
pub enum EncoderError {
    #[error("need at least 2 quantization levels, got {0}")]
    TooFewLevels(usize),
    #[error("dimension {dim} too small for {levels} levels; need dim >= {min}")]
    DimTooSmall {
        dim: usize,
        levels: usize,
        min: usize,
    },
    #[error("clip range [{lo}, {hi}] is not a finite non-empty interval")]
    BadClipRange { lo: f64, hi: f64 },
    #[error("need at least 1 feature")]
    NoFeatures,
    #[error("expected {expected} features, got {got}")]
    FeatureCountMismatch { expected: usize, got: usize },
    #[error("feature {index} is not finite")]
    NonFiniteFeature { index: usize },
}

/// Record-based context encoder with quantized feature levels.
#[derive(Debug, Clone)]
pub struct ContextEncoder {
    dim: usize,
    num_features: usize,
    num_levels: usize,
    clip_lo: f64,
    clip_hi: f64,
    roles: Vec<BipolarHV>,
    levels: Vec<BipolarHV>,
    /// Resolves zero sums in the sign step so the output stays bipolar.
    tie_breaker: BipolarHV,
}

impl ContextEncoder {
    /// Build the role/level codebooks for `num_features` features quantized
    /// into `num_levels` bins over `clip_range`. All randomness derives from
    /// `seed`, so equal seeds give identical encoders.
    pub fn new(
        dim: usize,
        num_features: usize,
        num_levels: usize,
        clip_range: (f64, f64),
        seed: u64,
    ) -> Result<Self, EncoderError> {
        if num_levels < 2 {
            return Err(EncoderError::TooFewLevels(num_levels));
        }
        let block = dim / (2 * (num_levels - 1));
        if block == 0 {
            return Err(EncoderError::DimTooSmall {
                dim,
                levels: num_levels,
                min: 2 * (num_levels - 1),
            });
        }
        let (lo, hi) = clip_range;
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(EncoderError::BadClipRange { lo, hi });
        }
        if num_features == 0 {
            return Err(EncoderError::NoFeatures);
        }

        let mut role_rng = RngStream::derived(seed, rng::stream::ROLES);
        let mut roles: Vec<BipolarHV> = Vec::with_capacity(num_features);
        while roles.len() < num_features {
            let candidate = BipolarHV::random(dim, &mut role_rng);
            // Collisions are vanishingly rare at real dims but possible in
            // tiny test configurations; redraw to keep roles distinct.
            if !roles.contains(&candidate) {
                roles.push(candidate);
            }
        }

        let mut level_rng = RngStream::derived(seed, rng::stream::LEVELS);
        let base = BipolarHV::random(dim, &mut level_rng);
        let mut levels = Vec::with_capacity(num_levels);
        levels.push(base);
        for k in 0..num_levels - 1 {
            let prev = levels[k].components();
            let mut next: Vec<i8> = prev.to_vec();
            for v in &mut next[k * block..(k + 1) * block] {
                *v = -*v;
            }
            levels.push(BipolarHV::from_components(next).expect("flip keeps bipolar"));
        }

        let mut tie_rng = RngStream::derived(seed, rng::stream::TIE_BREAK);
        let tie_breaker = BipolarHV::random(dim, &mut tie_rng);

        Ok(Self {
            dim,
            num_features,
            num_levels,
            clip_lo: lo,
            clip_hi: hi,
            roles,
            levels,
            tie_breaker,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_features(&self) -> usize {
        self.num_features
    }

    pub fn num_levels(&self) -> usize {
        self.num_levels
    }

    /// Bin index for a raw feature value: clamp into the clip range, scale to
    /// [0, 1], then floor into one of `num_levels` equal-width bins (the top
    /// edge belongs to the last bin).
    pub fn quantize_level(&self, x: f64) -> usize {
        let clamped = x.clamp(self.clip_lo, self.clip_hi);
        let unit = (clamped - self.clip_lo) / (self.clip_hi - self.clip_lo);
        let idx = (unit * self.num_levels as f64).floor() as usize;
        idx.min(self.num_levels - 1)
    }

    /// Encode one feature vector: superpose role-level bindings and take the
    /// componentwise sign, breaking exact ties with the tie-breaker vector.
    pub fn encode_context(&self, features: &[f64]) -> Result<BipolarHV, EncoderError> {
        if features.len() != self.num_features {
            return Err(EncoderError::FeatureCountMismatch {
                expected: self.num_features,
                got: features.len(),
            });
        }
        for (index, &x) in features.iter().enumerate() {
            if !x.is_finite() {
                return Err(EncoderError::NonFiniteFeature { index });
            }
        }

        let mut sums = vec![0i32; self.dim];
        for (role, &x) in self.roles.iter().zip(features) {
            let level = &self.levels[self.quantize_level(x)];
            let bound = bind(role, level).expect("codebook dims match");
            for (s, &b) in sums.iter_mut().zip(bound.components()) {
                *s += i32::from(b);
            }
        }

        let components = sums
            .iter()
            .zip(self.tie_breaker.components())
            .map(|(&s, &t)| match s.cmp(&0) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Less => -1,
                std::cmp::Ordering::Equal => t,
            })
            .collect();
        Ok(BipolarHV::from_components(components).expect("signs are bipolar"))
    }

    #[cfg(test)]
    pub(crate) fn level(&self, k: usize) -> &BipolarHV {
        &self.levels[k]
    }

    #[cfg(test)]
    pub(crate) fn role(&self, i: usize) -> &BipolarHV {
        &self.roles[i]
    }

    #[cfg(test)]
    pub(crate) fn tie_breaker(&self) -> &BipolarHV {
        &self.tie_breaker
    }
}

/// Thermometer encoder for scalar rewards in [0, 1].
#[derive(Debug, Clone, Copy)]
pub struct RewardEncoder {
    dim: usize,
}

impl RewardEncoder {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// First floor(r * dim) components +1, the rest -1. Rewards outside
    /// [0, 1] (including NaN) are clamped into it first.
    pub fn encode(&self, reward: f64) -> BipolarHV {
        let r = if reward.is_nan() {
            0.0
        } else {
            reward.clamp(0.0, 1.0)
        };
        let cut = ((r * self.dim as f64).floor() as usize).min(self.dim);
        let mut components = vec![-1i8; self.dim];
        for v in &mut components[..cut] {
            *v = 1;
        }
        BipolarHV::from_components(components).expect("thermometer code is bipolar")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypervec::hamming;
    use proptest::prelude::*;

    const RANGE: (f64, f64) = (-3.0, 3.0);

    #[test]
    fn quantize_level_boundaries() {
        let enc = ContextEncoder::new(128, 3, 16, RANGE, 7).unwrap();
        assert_eq!(enc.quantize_level(-3.0), 0);
        assert_eq!(enc.quantize_level(-10.0), 0);
        assert_eq!(enc.quantize_level(0.0), 8);
        assert_eq!(enc.quantize_level(3.0), 15);
        assert_eq!(enc.quantize_level(10.0), 15);
        // just below the first bin edge stays in bin 0
        assert_eq!(enc.quantize_level(-3.0 + 0.37), 0);
        assert_eq!(enc.quantize_level(-3.0 + 0.38), 1);
    }

    #[test]
    fn level_chain_hamming_is_linear() {
        let dim = 1024;
        let levels = 16;
        let enc = ContextEncoder::new(dim, 5, levels, RANGE, 11).unwrap();
        let block = dim / (2 * (levels - 1));
        for k in 0..levels - 1 {
            assert_eq!(hamming(enc.level(k), enc.level(k + 1)).unwrap(), block);
        }
        // flipped blocks are disjoint, so distance adds up across the chain
        for k in 0..levels {
            assert_eq!(hamming(enc.level(0), enc.level(k)).unwrap(), k * block);
        }
        assert!(hamming(enc.level(0), enc.level(levels - 1)).unwrap() <= dim / 2);
    }

    #[test]
    fn roles_are_pairwise_distinct() {
        let enc = ContextEncoder::new(64, 8, 4, RANGE, 5).unwrap();
        for i in 0..8 {
            for j in i + 1..8 {
                assert_ne!(enc.role(i), enc.role(j));
            }
        }
    }

    #[test]
    fn same_seed_same_encoding() {
        let a = ContextEncoder::new(256, 5, 16, RANGE, 42).unwrap();
        let b = ContextEncoder::new(256, 5, 16, RANGE, 42).unwrap();
        let x = [0.3, -1.2, 2.9, 0.0, -0.5];
        assert_eq!(a.encode_context(&x).unwrap(), b.encode_context(&x).unwrap());

        let c = ContextEncoder::new(256, 5, 16, RANGE, 43).unwrap();
        assert_ne!(a.encode_context(&x).unwrap(), c.encode_context(&x).unwrap());
    }

    #[test]
    fn ties_resolve_to_tie_breaker() {
        // Two features in the same bin superpose to l[j] * (r0[j] + r1[j]),
        // which is zero exactly where the roles disagree.
        let enc = ContextEncoder::new(128, 2, 4, RANGE, 9).unwrap();
        let x = [0.0, 0.0];
        assert_eq!(enc.quantize_level(x[0]), enc.quantize_level(x[1]));
        let out = enc.encode_context(&x).unwrap();
        let mut saw_tie = false;
        for j in 0..128 {
            if enc.role(0).components()[j] != enc.role(1).components()[j] {
                saw_tie = true;
                assert_eq!(out.components()[j], enc.tie_breaker().components()[j]);
            }
        }
        assert!(saw_tie);
    }

    #[test]
    fn constructor_validation() {
        assert_eq!(
            ContextEncoder::new(128, 3, 1, RANGE, 0).unwrap_err(),
            EncoderError::TooFewLevels(1)
        );
        assert_eq!(
            ContextEncoder::new(16, 3, 16, RANGE, 0).unwrap_err(),
            EncoderError::DimTooSmall {
                dim: 16,
                levels: 16,
                min: 30
            }
        );
        assert!(matches!(
            ContextEncoder::new(128, 3, 16, (3.0, -3.0), 0).unwrap_err(),
            EncoderError::BadClipRange { .. }
        ));
        assert_eq!(
            ContextEncoder::new(128, 0, 16, RANGE, 0).unwrap_err(),
            EncoderError::NoFeatures
        );
    }

    #[test]
    fn encode_context_validates_input() {
        let enc = ContextEncoder::new(128, 3, 16, RANGE, 1).unwrap();
        assert_eq!(
            enc.encode_context(&[0.0; 2]).unwrap_err(),
            EncoderError::FeatureCountMismatch {
                expected: 3,
                got: 2
            }
        );
        assert_eq!(
            enc.encode_context(&[0.0, f64::NAN, 0.0]).unwrap_err(),
            EncoderError::NonFiniteFeature { index: 1 }
        );
    }

    #[test]
    fn reward_thermometer_cases() {
        let enc = RewardEncoder::new(10);
        assert_eq!(enc.encode(0.0).components(), &[-1i8; 10]);
        assert_eq!(enc.encode(1.0).components(), &[1i8; 10]);
        assert_eq!(
            enc.encode(0.5).components(),
            &[1, 1, 1, 1, 1, -1, -1, -1, -1, -1]
        );
        // out-of-range and NaN rewards clamp instead of panicking
        assert_eq!(enc.encode(2.0).components(), &[1i8; 10]);
        assert_eq!(enc.encode(-1.0).components(), &[-1i8; 10]);
        assert_eq!(enc.encode(f64::NAN).components(), &[-1i8; 10]);

        let wide = RewardEncoder::new(1024);
        let half = wide.encode(0.5);
        let count = half.components().iter().filter(|&&v| v == 1).count();
        assert_eq!(count, 512);
    }

    proptest! {
        #[test]
        fn quantize_always_in_range(x in -100.0f64..100.0, levels in 2usize..20) {
            let enc = ContextEncoder::new(256, 2, levels, RANGE, 3).unwrap();
            prop_assert!(enc.quantize_level(x) < levels);
        }

        #[test]
        fn quantize_is_monotone(a in -5.0f64..5.0, b in -5.0f64..5.0) {
            let enc = ContextEncoder::new(256, 2, 16, RANGE, 3).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(enc.quantize_level(lo) <= enc.quantize_level(hi));
        }

        #[test]
        fn thermometer_monotone_in_reward(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let enc = RewardEncoder::new(64);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let lo_count = enc.encode(lo).components().iter().filter(|&&v| v == 1).count();
            let hi_count = enc.encode(hi).components().iter().filter(|&&v| v == 1).count();
            prop_assert!(lo_count <= hi_count);
        }
    }
}
