//! Seed derivation for reproducible parallel streams.
//!
//! Every Monte-Carlo trial or replicate gets its own generator seeded from
//! `(seed, stream, index)`, so results never depend on how work is split
//! across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a base seed with a stream tag and an index.
pub fn derive(seed: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ index)
}

pub fn rng(seed: u64, stream: u64, index: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(derive(seed, stream, index))
}

/// Stream tags, one per consumer, so unrelated draws never share a sequence.
pub mod streams {
    pub const VECTORS: u64 = 1;
    pub const SAMPLE_A: u64 = 2;
    pub const MEMBERSHIP: u64 = 3;
    pub const COVER: u64 = 4;
    pub const PROBE: u64 = 5;
    pub const EDGES: u64 = 6;
    pub const INTEGRAL: u64 = 7;
}
