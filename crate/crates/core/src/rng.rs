//! Counter-based random streams keyed by `(seed, stream_id)`.
//!
//! Every page owns a stream id (its index in the corpus), so pages can be
//! generated on any number of workers and still come out bit-identical.
//! Streams are ChaCha8 with the key derived from the seed and the purpose
//! tag, and the ChaCha stream selector set to the stream id.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream_id: u64,
}

/// What a derived stream is used for. Distinct purposes never share draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    PageConfig,
    Compose,
    Text,
    Asset,
    Noise,
    Downsample,
    Custom(u64),
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::PageConfig => 0x7061_6765_636f_6e66,
            Purpose::Compose => 0x636f_6d70_6f73_6500,
            Purpose::Text => 0x7465_7874_0000_0000,
            Purpose::Asset => 0x6173_7365_7400_0000,
            Purpose::Noise => 0x6e6f_6973_6500_0000,
            Purpose::Downsample => 0x646f_776e_0000_0000,
            Purpose::Custom(t) => t.rotate_left(17) ^ 0x9e37_79b9_7f4a_7c15,
        }
    }
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable 64-bit hash of a string (FNV-1a, then mixed).
pub fn hash_str(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    mix64(h)
}

impl RngSeed {
    pub const fn new(seed: u64, stream_id: u64) -> Self {
        RngSeed { seed, stream_id }
    }

    pub fn rng(&self, purpose: Purpose) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        let mut state = self.seed ^ purpose.tag();
        for chunk in key.chunks_exact_mut(8) {
            state = mix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream_id);
        rng
    }

    /// A seed for a sub-task of this stream, e.g. one text block on a page.
    pub fn child(&self, tag: u64) -> RngSeed {
        RngSeed {
            seed: mix64(self.seed ^ mix64(tag.wrapping_add(0x5bd1_e995))),
            stream_id: self.stream_id,
        }
    }

    pub fn with_stream(&self, stream_id: u64) -> RngSeed {
        RngSeed {
            seed: self.seed,
            stream_id,
        }
    }
}
