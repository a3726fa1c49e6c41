//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from a [`RngStream`], a
//! `(seed, stream)` pair backed by ChaCha8. ChaCha output is specified
//! bit-for-bit, so equal pairs give equal samples on every platform, and
//! the 2^64 stream ids of one seed are independent keystreams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// A stream dedicated to one purpose (weights, edges, replicate `i`, ...)
    /// of this stream. Distinct purposes map to distinct stream ids.
    pub fn substream(&self, purpose: u64) -> RngStream {
        RngStream {
            seed: self.seed,
            stream: mix2(self.stream, purpose),
        }
    }

    /// Stream of replicate `replicate` under this stream.
    pub fn replicate(&self, replicate: u64) -> RngStream {
        self.substream(0x5245_504c ^ replicate.rotate_left(17))
    }
}

/// Purpose tags for substreams, shared by the generators.
pub mod purpose {
    pub const EDGES: u64 = 1;
    pub const WEIGHTS: u64 = 2;
    pub const POINTS: u64 = 3;
    pub const OCCUPATION: u64 = 4;
    pub const DEGREES: u64 = 5;
    pub const MATCHING: u64 = 6;
    pub const ANALYSIS: u64 = 7;
}

/// SplitMix64 finaliser.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix2(a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(a) ^ b.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// Stream id of replicate `replicate` at grid point `grid_index` of a sweep
/// seeded with `seed`.
pub fn derive_stream(seed: u64, grid_index: u64, replicate: u64) -> u64 {
    mix2(mix2(seed, grid_index), replicate)
}
