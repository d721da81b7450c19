//! Fixed-length hypervector types and their arithmetic.
//!
//! The multiply-add model: binding is elementwise multiplication,
//! superposition is addition, similarity is the inner product. Two storage
//! types cover every agent: [`BipolarHV`] for {-1,+1} vectors (contexts,
//! reward codes, update signals) and [`SatIntHV`] for integer vectors
//! saturating at a configurable bound (low-precision action accumulators).
//! Wide unbounded accumulators are plain `&[i32]` slices; every similarity
//! operation is generic over the component width via [`Components`].

use thiserror::Error;

use crate::rng::RngStream;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HvError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("component {value} at index {index} is not -1 or +1")]
    NotBipolar { index: usize, value: i32 },
    #[error("component {value} at index {index} exceeds bound {bound}")]
    OutOfBound {
        index: usize,
        value: i32,
        bound: i32,
    },
    #[error("saturation bound must be >= 1, got {0}")]
    InvalidBound(i32),
}

fn check_dims(left: usize, right: usize) -> Result<(), HvError> {
    if left == right {
        Ok(())
    } else {
        Err(HvError::DimMismatch { left, right })
    }
}

/// Integer component view; lets similarity ops mix bipolar, saturating and
/// wide accumulator storage.
pub trait Components {
    type Elem: Copy + Into<i32>;
    fn components_raw(&self) -> &[Self::Elem];
    fn dim(&self) -> usize {
        self.components_raw().len()
    }
}

// ── Bipolar hypervectors ────────────────────────────────────────────────

/// A hypervector with components in {-1, +1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipolarHV {
    components: Vec<i8>,
}

impl BipolarHV {
    /// Validating constructor; every component must be -1 or +1.
    pub fn from_components(components: Vec<i8>) -> Result<Self, HvError> {
        for (index, &v) in components.iter().enumerate() {
            if v != 1 && v != -1 {
                return Err(HvError::NotBipolar {
                    index,
                    value: i32::from(v),
                });
            }
        }
        Ok(Self { components })
    }

    /// All components +1 (the binding identity).
    pub fn ones(dim: usize) -> Self {
        Self {
            components: vec![1; dim],
        }
    }

    /// I.i.d. uniform bipolar vector drawn from `rng`.
    pub fn random(dim: usize, rng: &mut RngStream) -> Self {
        let mut components = Vec::with_capacity(dim);
        let mut bits = 0u64;
        for i in 0..dim {
            if i % 64 == 0 {
                bits = rng.next_u64();
            }
            components.push(if bits & 1 == 1 { 1 } else { -1 });
            bits >>= 1;
        }
        Self { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[i8] {
        &self.components
    }

    /// Componentwise negation.
    pub fn negated(&self) -> Self {
        Self {
            components: self.components.iter().map(|&v| -v).collect(),
        }
    }
}

impl Components for BipolarHV {
    type Elem = i8;
    fn components_raw(&self) -> &[i8] {
        &self.components
    }
}

// ── Saturating integer hypervectors ─────────────────────────────────────

/// A hypervector with integer components clipped to [-bound, +bound].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatIntHV {
    components: Vec<i32>,
    bound: i32,
}

impl SatIntHV {
    /// Zero vector with the given saturation bound.
    pub fn zeros(dim: usize, bound: i32) -> Result<Self, HvError> {
        if bound < 1 {
            return Err(HvError::InvalidBound(bound));
        }
        Ok(Self {
            components: vec![0; dim],
            bound,
        })
    }

    /// Validating constructor; every component must lie in [-bound, +bound].
    pub fn from_components(components: Vec<i32>, bound: i32) -> Result<Self, HvError> {
        if bound < 1 {
            return Err(HvError::InvalidBound(bound));
        }
        for (index, &v) in components.iter().enumerate() {
            if v < -bound || v > bound {
                return Err(HvError::OutOfBound {
                    index,
                    value: v,
                    bound,
                });
            }
        }
        Ok(Self { components, bound })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn bound(&self) -> i32 {
        self.bound
    }

    pub fn components(&self) -> &[i32] {
        &self.components
    }

    /// Bits needed to store one component at this bound: ceil(log2(2*bound+1)).
    pub fn bits_per_component(&self) -> u32 {
        bits_for_bound(self.bound)
    }
}

impl Components for SatIntHV {
    type Elem = i32;
    fn components_raw(&self) -> &[i32] {
        &self.components
    }
}

impl Components for [i32] {
    type Elem = i32;
    fn components_raw(&self) -> &[i32] {
        self
    }
}

/// ceil(log2(2*bound+1)): storage bits per component for a saturating bound.
pub fn bits_for_bound(bound: i32) -> u32 {
    debug_assert!(bound >= 1);
    let states = 2 * (bound as u64) + 1;
    u64::BITS - (states - 1).leading_zeros()
}

// ── Update masks ────────────────────────────────────────────────────────

/// A per-component gate for selective updates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateMask {
    flags: Vec<bool>,
}

impl UpdateMask {
    pub fn from_flags(flags: Vec<bool>) -> Self {
        Self { flags }
    }

    /// Mask passing every component.
    pub fn all_set(dim: usize) -> Self {
        Self {
            flags: vec![true; dim],
        }
    }

    /// I.i.d. flags, each set when a fresh uniform draw falls below `prob`.
    pub fn sample(dim: usize, prob: f64, rng: &mut RngStream) -> Self {
        let flags = (0..dim).map(|_| rng.next_f64() < prob).collect();
        Self { flags }
    }

    pub fn dim(&self) -> usize {
        self.flags.len()
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn count_set(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }
}

// ── Operations ──────────────────────────────────────────────────────────

/// Binding: elementwise product of two bipolar vectors.
pub fn bind(a: &BipolarHV, b: &BipolarHV) -> Result<BipolarHV, HvError> {
    check_dims(a.dim(), b.dim())?;
    let components = a
        .components
        .iter()
        .zip(&b.components)
        .map(|(&x, &y)| x * y)
        .collect();
    Ok(BipolarHV { components })
}

/// Inner product, accumulated in i64 so dims up to 2^20 with components up
/// to 2^15 cannot overflow.
pub fn inner_product<A, B>(a: &A, b: &B) -> Result<i64, HvError>
where
    A: Components + ?Sized,
    B: Components + ?Sized,
{
    check_dims(a.dim(), b.dim())?;
    let sum = a
        .components_raw()
        .iter()
        .zip(b.components_raw())
        .map(|(&x, &y)| i64::from(x.into()) * i64::from(y.into()))
        .sum();
    Ok(sum)
}

/// Cosine similarity against a bipolar vector, whose norm is exactly
/// sqrt(dim). A zero-norm `a` scores 0.
pub fn cosine<A>(a: &A, b: &BipolarHV) -> Result<f64, HvError>
where
    A: Components + ?Sized,
{
    check_dims(a.dim(), b.dim())?;
    let mut ip: i64 = 0;
    let mut norm_sq: i64 = 0;
    for (&x, &y) in a.components_raw().iter().zip(&b.components) {
        let xv = i64::from(x.into());
        ip += xv * i64::from(y);
        norm_sq += xv * xv;
    }
    if norm_sq == 0 {
        return Ok(0.0);
    }
    Ok(ip as f64 / ((norm_sq as f64).sqrt() * (b.dim() as f64).sqrt()))
}

/// Count of disagreeing positions between two bipolar vectors.
pub fn hamming(a: &BipolarHV, b: &BipolarHV) -> Result<usize, HvError> {
    check_dims(a.dim(), b.dim())?;
    let count = a
        .components
        .iter()
        .zip(&b.components)
        .filter(|(&x, &y)| x != y)
        .count();
    Ok(count)
}

/// Majority-rule binarization: sign of each component, with 0 mapping to +1.
pub fn binarize_sign(a: &SatIntHV) -> BipolarHV {
    let components = a
        .components
        .iter()
        .map(|&v| if v < 0 { -1 } else { 1 })
        .collect();
    BipolarHV { components }
}

/// Saturating masked step: where the mask is set, move one bipolar step and
/// clip to [-bound, +bound]; elsewhere leave the component untouched.
pub fn clip_saturate(
    a: &SatIntHV,
    delta: &BipolarHV,
    mask: &UpdateMask,
) -> Result<SatIntHV, HvError> {
    let mut out = a.clone();
    clip_saturate_in_place(&mut out, delta, mask)?;
    Ok(out)
}

/// In-place form of [`clip_saturate`].
pub fn clip_saturate_in_place(
    a: &mut SatIntHV,
    delta: &BipolarHV,
    mask: &UpdateMask,
) -> Result<(), HvError> {
    check_dims(a.dim(), delta.dim())?;
    check_dims(a.dim(), mask.dim())?;
    let bound = a.bound;
    for ((v, &d), &m) in a
        .components
        .iter_mut()
        .zip(&delta.components)
        .zip(&mask.flags)
    {
        if m {
            *v = (*v + i32::from(d)).clamp(-bound, bound);
        }
    }
    Ok(())
}
