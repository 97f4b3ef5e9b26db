//! Counter-based seed derivation.
//!
//! Every random stream is a `ChaCha8Rng` keyed by a 64-bit value mixed from
//! the user seed and a path of indices (run, component, replicate, ...). Any
//! stream can therefore be regenerated in isolation, independent of the
//! order in which workers happen to execute.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags keep e.g. the innovations of run 3 and the multipliers of
/// run 3 apart even when their numeric indices coincide.
pub mod tag {
    pub const RUN: u64 = 0x5255_4e00;
    pub const COLUMN: u64 = 0x434f_4c00;
    pub const MULTIPLIER: u64 = 0x4d55_4c00;
}

/// SplitMix64 finaliser.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from `seed` and an index path.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix64(seed), |acc, &i| mix64(acc ^ mix64(i)))
}

pub fn stream(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, path))
}
