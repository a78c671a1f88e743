//! Seeded randomness.
//!
//! All stochastic code draws from [`SimRng`] (ChaCha8), whose output stream is
//! specified independently of platform and word size. Sub-streams are derived
//! from a master seed with a SplitMix64 mix so that trials are reproducible
//! regardless of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream tags keep the genome, read and noise draws of one trial independent.
pub mod stream {
    pub const GENOME: u64 = 1;
    pub const READS: u64 = 2;
    pub const NOISE: u64 = 3;
    pub const PLANT: u64 = 4;
    pub const REPEAT: u64 = 5;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from `master` and a path of labels.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}
