//! Seeded, independently addressable PRNG streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// ChaCha8 keyed by `master_seed`, positioned on stream `stream`.
///
/// Distinct stream ids never overlap, so each trial or protocol step can own
/// its generator without consuming from a shared one.
pub fn stream_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}
