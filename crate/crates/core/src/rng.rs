//! Deterministic per-path random streams and ordered parallel ensembles.
//!
//! Every path index gets its own 64-bit seed mixed from the master seed.
//! A path seed then drives independent ChaCha streams, one per source of
//! randomness, so that adding a source never perturbs the others.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Independent random sources used by a single path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    /// Driver jumps on the positive half-line.
    Forward = 0,
    /// Driver jumps on the negative half-line.
    Backward = 1,
    /// Brownian increments.
    Brownian = 2,
    /// Gaussian stand-in for the distant past of two-sided drivers.
    Tail = 3,
}

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of path `index` within an ensemble started from `master`.
pub fn path_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ index.wrapping_mul(0xd134_2543_de82_ef95))
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Runs `f(index, path_seed)` for every path in parallel and returns the
/// results in index order, independent of the thread count.
pub fn ensemble_map<T, F>(master: u64, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, u64) -> T + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .map(|i| f(i, path_seed(master, i as u64)))
        .collect()
}
