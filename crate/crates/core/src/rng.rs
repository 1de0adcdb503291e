//! Seeded random streams.
//!
//! All randomness goes through ChaCha8 with an explicit `(seed, stream)` pair.
//! ChaCha is counter-based, so a stream id selects an independent sequence
//! without any shared state: samplers give each block or row its own stream
//! and stay deterministic however the work is split.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// The generator for stream `stream` under `seed`.
pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A child seed for replicate `index`, e.g. the i-th of N sampled databases.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform in `(0, 1]`, safe to take the logarithm of.
pub(crate) fn open_unit<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}
