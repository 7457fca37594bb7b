//! Version-stable pseudo-random streams.
//!
//! Every random draw in the crate comes from [`SplitMix64`]. Generator
//! matrices, source packets and channel realizations are all reproducible
//! from a single 64-bit seed, and golden fixtures depend on the exact stream,
//! so the algorithm here must never change.
//!
//! The stream is Vigna's SplitMix64: the state advances by the golden-gamma
//! constant `0x9E3779B97F4A7C15` and each output is the state passed through
//! the finalizer [`mix64`].

/// Golden-gamma increment.
pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 output finalizer (a bijection on `u64`).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a parent seed and a tag.
///
/// `derive(parent, tag) = mix64(mix64(parent) ^ mix64(tag.wrapping_add(GAMMA)))`.
/// Chained calls give independent-looking substreams for any tuple of
/// indices, e.g. `derive(derive(master, n), trial)`.
#[inline]
pub fn derive(parent: u64, tag: u64) -> u64 {
    mix64(mix64(parent) ^ mix64(tag.wrapping_add(GAMMA)))
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// One bit: the top bit of the next output.
    #[inline]
    pub fn next_bit(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// Uniform on `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `true` with probability `p`; exact at `p == 0` and `p == 1`.
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}
