//! Seeded, splittable random streams for Monte-Carlo runs.
//!
//! Every Monte-Carlo sample is keyed by (master seed, stream id, sample
//! index) and draws from its own ChaCha stream, so results are bit-identical
//! regardless of how samples are scheduled across threads. Variate
//! transforms are written out explicitly on top of `next_u64` to keep the
//! draws independent of distribution-crate implementation details.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identifies one logical random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        debug_assert!(stream_id < (1 << 32), "stream ids are limited to 32 bits");
        Self { master_seed, stream_id }
    }

    pub fn with_stream(&self, stream_id: u64) -> Self {
        Self::new(self.master_seed, stream_id)
    }

    /// Generator for the stream itself.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(expand_key(self.master_seed));
        rng.set_stream(self.stream_id << 32);
        rng
    }

    /// Generator for one sample of a Monte-Carlo batch. Distinct
    /// (stream, index) pairs map to distinct ChaCha streams.
    pub fn sample_rng(&self, sample_index: u64) -> ChaCha8Rng {
        debug_assert!(sample_index < (1 << 32), "sample indices are limited to 32 bits");
        let mut rng = ChaCha8Rng::from_seed(expand_key(self.master_seed));
        rng.set_stream((self.stream_id << 32) | (sample_index & 0xffff_ffff));
        rng
    }
}

/// Expands a 64-bit master seed into a 256-bit ChaCha key.
fn expand_key(master_seed: u64) -> [u8; 32] {
    let mut state = master_seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw in the open interval (0, 1); never returns an endpoint, so
/// logs of the result are always finite.
#[inline]
pub fn uniform_open01(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Pair of independent standard normals (Box-Muller).
#[inline]
pub fn normal_pair(rng: &mut impl RngCore) -> (f64, f64) {
    let r = (-2.0 * uniform_open01(rng).ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * uniform_open01(rng);
    (r * theta.cos(), r * theta.sin())
}

/// Geometric draw with P(k) = (1 - q) q^k for k = 0, 1, 2, ... via
/// inversion of the tail function.
#[inline]
pub fn geometric_variate(rng: &mut impl RngCore, ln_q_inv: f64) -> u64 {
    // `ln_q_inv` is 1 / ln(q), precomputed by the caller.
    (uniform_open01(rng).ln() * ln_q_inv) as u64
}
