//! Seeded random streams.
//!
//! Every stochastic routine in the crate draws from xoshiro256++ (a 64-bit
//! xor/shift/rotate generator). A master seed is expanded with SplitMix64
//! into the initial state; substream `k` is the master state advanced by
//! `k` applications of the generator's `jump()` (2^128 steps each), so
//! substreams never overlap and do not depend on how work is scheduled.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type StreamRng = Xoshiro256PlusPlus;

/// The generator for a master seed.
pub fn master(seed: u64) -> StreamRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// `count` non-overlapping substreams of `seed`, in substream order.
pub fn substreams(seed: u64, count: usize) -> Vec<StreamRng> {
    let mut rng = master(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(rng.clone());
        rng.jump();
    }
    out
}

/// Uniform index in `0..n`.
///
/// Drawn through a `u32` range so the sequence is the same on 32- and
/// 64-bit targets.
pub fn index<R: Rng>(rng: &mut R, n: usize) -> usize {
    debug_assert!(n > 0 && n <= u32::MAX as usize);
    rng.random_range(0..n as u32) as usize
}

/// Uniform draw of three distinct indices from `0..n` (`n >= 3`).
///
/// Each coordinate is drawn independently and the whole triple is redrawn
/// whenever two coincide.
pub fn distinct_triple<R: Rng>(rng: &mut R, n: usize) -> (usize, usize, usize) {
    assert!(n >= 3, "need at least 3 items");
    loop {
        let i = index(rng, n);
        let j = index(rng, n);
        let k = index(rng, n);
        if i != j && j != k && i != k {
            return (i, j, k);
        }
    }
}
