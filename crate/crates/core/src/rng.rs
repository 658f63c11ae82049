//! Seeded, splittable random streams.
//!
//! Every randomized routine takes a [`SeedStream`] and derives independent
//! sub-streams from it by label, so results depend only on the seed and the
//! label, never on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedStream {
    seed: u64,
}

impl SeedStream {
    pub const fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub const fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent generator for `label`.
    pub fn rng(&self, label: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(label);
        rng
    }

    /// Child stream whose seed mixes in `label`.
    pub fn split(&self, label: u64) -> SeedStream {
        SeedStream::new(splitmix64(self.seed ^ splitmix64(label)))
    }
}

/// Stable 64-bit hash of a byte string (FNV-1a followed by a splitmix finalizer).
pub fn stable_hash(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix64(h)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
