//! Keyed random streams.
//!
//! Every random draw in the crate comes from a ChaCha stream whose seed is
//! derived from a base seed and a key path such as `(t, gauge, purpose)`.
//! Work items can therefore run in any order, on any thread, and still
//! replay identically.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tags mixed into derived seeds so that streams used for different
/// jobs at the same position never coincide.
pub mod purpose {
    pub const EVENT: u64 = 0x01;
    pub const SPLIT: u64 = 0x02;
    pub const READ: u64 = 0x03;
    pub const GAUGE: u64 = 0x04;
    pub const SOLVE: u64 = 0x05;
    pub const FLIP: u64 = 0x06;
    pub const TIE_BREAK: u64 = 0x07;
    pub const RUN: u64 = 0x08;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `keys` into `base` one at a time.
pub fn derive_seed(base: u64, keys: &[u64]) -> u64 {
    keys.iter()
        .fold(splitmix64(base), |acc, &k| splitmix64(acc ^ splitmix64(k)))
}

pub fn keyed_rng(base: u64, keys: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(base, keys))
}
