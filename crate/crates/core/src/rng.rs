use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Addresses one reproducible random stream: a master seed plus a stream
/// index. Experiments give trial `i` the stream `(master_seed, i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub const fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// Builds the generator for this stream. ChaCha supports 2^64 disjoint
    /// streams per key, so distinct indices never overlap.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }

    /// A fresh master seed derived from this pair (splitmix64 finalizer), for
    /// operations that hand out one sub-stream per trial.
    pub fn fork_seed(&self) -> u64 {
        let mut z = self.master_seed ^ self.stream_index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Stream `index` under the same master seed.
    pub const fn with_index(&self, index: u64) -> Self {
        Self::new(self.master_seed, index)
    }
}
