//! Seeded random streams.
//!
//! Every trajectory draws from its own ChaCha8 generator. A 64-bit seed is
//! expanded into the 32-byte ChaCha key with four SplitMix64 outputs, and
//! realization `i` of an ensemble with base seed `b` is seeded with the
//! `(i + 1)`-th SplitMix64 output of a stream started at `b`. Uniforms take
//! the top 53 bits of a `u64`. Changing any of this changes every golden
//! trajectory.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer applied to `state`.
pub fn splitmix64_mix(state: u64) -> u64 {
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `index` under `base_seed`.
pub fn derive_stream_seed(base_seed: u64, index: u64) -> u64 {
    splitmix64_mix(base_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub struct StreamRng {
    inner: ChaCha8Rng,
}

impl StreamRng {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
            chunk.copy_from_slice(&derive_stream_seed(seed, i as u64).to_le_bytes());
        }
        StreamRng { inner: ChaCha8Rng::from_seed(key) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`, safe to pass to `ln`.
    pub fn next_open_f64(&mut self) -> f64 {
        1.0 - self.next_f64()
    }
}
