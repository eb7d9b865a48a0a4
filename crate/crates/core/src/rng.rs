//! Per-trial random streams derived from a master seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds the coordinates of a trial into the master seed, one SplitMix64
/// round per coordinate.
pub fn stream_seed(master: u64, coords: &[u64]) -> u64 {
    coords.iter().fold(splitmix64(master), |acc, &c| splitmix64(acc ^ splitmix64(c)))
}

/// Stream for trial `trial` of grid point `p_index` at code size `size`.
pub fn trial_rng(master: u64, size: usize, p_index: usize, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master, &[size as u64, p_index as u64, trial]))
}
