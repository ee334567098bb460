//! PRNG stream layout: every (round, batch, purpose) triple gets its own
//! ChaCha stream under the process master seed.

use rand_chacha::ChaCha8Rng;

use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub(crate) enum Purpose {
    KeyBits = 0,
    Permutation = 1,
    AliceBases = 2,
    Eavesdropper = 3,
    Channel = 4,
    Estimation = 5,
    Toeplitz = 6,
    BobBases = 7,
}

pub(crate) fn round_rng(master_seed: u64, round: u32, batch: u32, purpose: Purpose) -> ChaCha8Rng {
    let id = (u64::from(round) << 32) | (u64::from(batch) << 8) | purpose as u64;
    stream_rng(master_seed, id)
}
