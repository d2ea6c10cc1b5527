//! Seed handling.
//!
//! Every random choice in the toolkit descends from a single user seed. The
//! seed is split into independent ChaCha8 streams, one per purpose, so that
//! e.g. changing the partition strategy never perturbs the generated points.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Purpose of a random stream. The discriminant is the ChaCha stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Generator = 1,
    Order = 2,
    Partition = 3,
    Start = 4,
}

/// Independent generator for `purpose`, derived from `seed`.
pub fn stream(seed: u64, purpose: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(purpose as u64);
    rng
}

/// The `index`-th 64-bit sub-seed of a purpose stream (used for repetitions).
pub fn derive(seed: u64, purpose: Stream, index: u64) -> u64 {
    let mut rng = stream(seed, purpose);
    rng.set_word_pos(u128::from(index) * 2);
    rng.next_u64()
}
