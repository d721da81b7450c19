//! Deterministic counter-based random streams.
//!
//! Every source of randomness in this crate is an [`RngStream`]: a SplitMix64
//! sequence (Weyl counter + finalizer mix) keyed by a 64-bit seed. Streams are
//! split by hashing the parent seed with a purpose tag, so each component of a
//! run (environment model, context draws, reward draws, encoder tables,
//! exploration, update masks) owns an independent stream and consuming one
//! never perturbs another. Not cryptographic.

/// Weyl increment used by SplitMix64.
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Purpose tags for derived sub-streams. Each (seed, tag) pair names one
/// independent stream within a replicate.
pub mod stream {
    /// Environment model parameters (per-action weights and biases).
    pub const MODEL_INIT: u64 = 0x01;
    /// Environment context draws.
    pub const CONTEXT: u64 = 0x02;
    /// Environment reward draws.
    pub const REWARD: u64 = 0x03;
    /// Encoder role vectors.
    pub const ROLES: u64 = 0x04;
    /// Encoder level vectors.
    pub const LEVELS: u64 = 0x05;
    /// Encoder tie-breaker vector.
    pub const TIE_BREAK: u64 = 0x06;
    /// Agent exploration draws (the per-round q and random actions).
    pub const EXPLORE: u64 = 0x07;
    /// Agent probabilistic update masks.
    pub const MASK: u64 = 0x08;
}

/// SplitMix64 finalizer: avalanching 64-bit mix.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from a parent seed and a purpose tag.
#[inline]
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    mix64(seed ^ mix64(tag.wrapping_add(GOLDEN_GAMMA)))
}

/// A deterministic random stream.
///
/// Output k is `mix64(key + (k+1)*GAMMA)`, so the stream is a pure function
/// of (key, draw index); state is just the counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    key: u64,
    counter: u64,
    normal_spare: Option<u64>,
}

impl RngStream {
    /// Stream keyed directly by `seed`.
    pub fn from_seed(seed: u64) -> Self {
        Self {
            key: seed,
            counter: 0,
            normal_spare: None,
        }
    }

    /// Stream for one purpose, split off `seed` via `tag`.
    pub fn derived(seed: u64, tag: u64) -> Self {
        Self::from_seed(derive_seed(seed, tag))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(
            self.key
                .wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)),
        )
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        const DEN: f64 = (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64) / DEN
    }

    /// Uniform in [lo, hi).
    #[inline]
    pub fn next_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.next_f64() * (hi - lo)
    }

    /// Uniform index in [0, n). `n` must be nonzero.
    #[inline]
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (((self.next_u64() as u128) * (n as u128)) >> 64) as usize
    }

    /// Bernoulli draw: true with probability `p`.
    #[inline]
    pub fn next_bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Standard normal via the Marsaglia polar method (second value cached).
    pub fn next_normal(&mut self) -> f64 {
        if let Some(bits) = self.normal_spare.take() {
            return f64::from_bits(bits);
        }
        loop {
            let u = self.next_uniform(-1.0, 1.0);
            let v = self.next_uniform(-1.0, 1.0);
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = (-2.0 * s.ln() / s).sqrt();
                self.normal_spare = Some((v * m).to_bits());
                return u * m;
            }
        }
    }
}
