//! Seed derivation and replication scheduling.
//!
//! Every random quantity is drawn from a ChaCha8 stream identified by a
//! triple `(seed, domain, index)`:
//!
//! - the 256-bit key is `seed` (little endian) followed by `domain` (little
//!   endian) followed by 16 zero bytes;
//! - the 64-bit stream number is `index`, usually the replication index.
//!
//! Distinct domains keep unrelated consumers (null table, shifted table,
//! finite-sample experiment, ...) on disjoint key spaces for the same user
//! seed. Because a replication only ever sees its own stream, results do not
//! depend on how replications are distributed over workers.

use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Domain tags used inside the crate.
pub mod domain {
    pub const LIMIT_LAW: u64 = 0x4c49_4d49_5400_0001;
    pub const EXPERIMENT: u64 = 0x4558_5045_5200_0002;
    pub const SHIFTED_SEED: u64 = 0x5348_4946_5400_0003;
    pub const SIMULATE: u64 = 0x5349_4d55_4c00_0004;
    pub const LAW_CHECK: u64 = 0x4c41_5743_4800_0005;
}

/// The generator for stream `index` of `(seed, domain)`.
pub fn substream(seed: u64, domain: u64, index: u64) -> StreamRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// A new 64-bit seed derived from `seed` and a tag (SplitMix64 finalizer on
/// the xor), for callers that need a second independent user-level seed.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs independent indexed jobs and returns their results in index order.
///
/// Implementations may run jobs in any order on any number of threads; the
/// output must equal `(0..count).map(job).collect()`.
pub trait Executor: Sync {
    fn map_indexed<T, F>(&self, count: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every job on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<T, F>(&self, count: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..count).map(job).collect()
    }
}
