//! Counter-based randomness.
//!
//! Every random draw in the engine is keyed by `(seed, stream, counter)` so
//! results never depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash an ordered tuple of words into one 64-bit key.
#[inline]
pub fn key(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x243F_6A88_85A3_08D3, |acc, &p| mix64(acc ^ p))
}

/// Uniform float in `[0, 1)` from a hash value.
#[inline]
pub fn unit(h: u64) -> f64 {
    (h >> 11) as f64 / (1u64 << 53) as f64
}

/// A fresh generator for one `(seed, stream, counter)` triple.
pub fn stream(seed: u64, stream: u64, counter: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(key(&[seed, stream, counter]))
}

// Stream tags.
pub const STREAM_NPC_SPAWN: u64 = 1;
pub const STREAM_NPC_POLICY: u64 = 2;
pub const STREAM_AGENT_POLICY: u64 = 3;
pub const STREAM_MAP: u64 = 4;
