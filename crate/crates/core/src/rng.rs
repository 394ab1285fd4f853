//! Seed derivation and the counter-based generator used for every random draw.
//!
//! All randomness goes through [`ChaCha8Rng`]. A generator is addressed by a
//! 64-bit seed, a stream id and a block position, so independent consumers
//! (nodes, rounds, bootstrap replicates) never share state and execution order
//! never changes results.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Identifier written next to seeds in every output file.
pub const RNG_ALGORITHM: &str = "chacha8-seed_from_u64";

/// Generator for `seed` positioned at the start of `stream`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generator for `seed`, `stream`, positioned at `slot`. Each slot owns 2^32 words.
pub fn slot_rng(seed: u64, stream: u64, slot: u64) -> ChaCha8Rng {
    let mut rng = stream_rng(seed, stream);
    rng.set_word_pos(u128::from(slot) << 32);
    rng
}

/// SplitMix64 finaliser.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a base seed and a path of labels.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix64(base), |acc, &p| mix64(acc ^ mix64(p)))
}
