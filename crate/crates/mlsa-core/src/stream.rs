//! Deterministic derivation of independent random streams.
//!
//! Every cell of an experiment (scheme, accuracy, replication) and every
//! level inside a multilevel run gets its own ChaCha stream, derived from a
//! master seed by mixing tags. Results therefore depend only on the master
//! seed and the tag path, never on scheduling or thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Concrete generator used throughout the crate.
pub type StreamRng = ChaCha8Rng;

/// A mixed 64-bit key identifying one random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedKey(u64);

impl SeedKey {
    /// Key derived from a master seed.
    pub fn new(master: u64) -> Self {
        SeedKey(mix(0x9e37_79b9_7f4a_7c15 ^ master, master))
    }

    /// Child key for an integer tag (level index, replication index, ...).
    pub fn child(self, tag: u64) -> Self {
        SeedKey(mix(self.0, tag))
    }

    /// Child key for a string tag (scheme label).
    pub fn child_str(self, tag: &str) -> Self {
        // FNV-1a folds the string into one tag word.
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        for b in tag.as_bytes() {
            h ^= *b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        self.child(h)
    }

    /// Raw key value, recorded in run outputs for replay.
    pub fn raw(self) -> u64 {
        self.0
    }

    /// Expands the key into a full 256-bit ChaCha seed.
    pub fn rng(self) -> StreamRng {
        let mut state = self.0;
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        StreamRng::from_seed(seed)
    }
}

fn mix(key: u64, tag: u64) -> u64 {
    let mut state = key ^ tag.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    let a = splitmix64(&mut state);
    let b = splitmix64(&mut state);
    a ^ b.rotate_left(31)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
