//! Round 1: a plain BB84 exchange that seeds the chained key.
//!
//! Error correction is idealized: its cost `⌈f·H(q)·n_sift⌉` is charged
//! against the key budget, after which Bob is assumed to hold Alice's sifted
//! bits. Privacy amplification removes another `⌈H(q)·n_sift⌉` bits with a
//! real Toeplitz hash.

use rand::Rng;

use crate::bits::BitBlock;
use crate::error::Result;
use crate::rate_model::entropy;

use super::channel::{bsc_transmit, intercept_resend, random_bases, sample_without_replacement};
use super::config::{Eavesdropper, ProcessConfig};
use super::streams::{round_rng, Purpose};
use super::toeplitz::toeplitz_pa;

#[derive(Debug, Clone, PartialEq)]
pub struct Bb84Outcome {
    /// Established key (empty when aborted).
    pub key: BitBlock,
    /// Pooled estimate over all batches run.
    pub qber_est: f64,
    pub sifted: usize,
    pub sample: usize,
    pub mismatches: usize,
    pub batches: u32,
    pub aborted: bool,
}

/// Runs BB84 batches of `N` qubits until the key reaches `⌈H(E)N⌉` bits or
/// `round1_max_batches` is exhausted. Any batch whose estimate exceeds `E`
/// aborts the round.
pub fn run_bb84_round(config: &ProcessConfig) -> Result<Bb84Outcome> {
    let needed = config.frozen_count();
    let mut outcome = Bb84Outcome {
        key: BitBlock::default(),
        qber_est: 0.0,
        sifted: 0,
        sample: 0,
        mismatches: 0,
        batches: 0,
        aborted: false,
    };
    for batch in 0..config.round1_max_batches {
        let b = run_batch(config, batch)?;
        outcome.batches += 1;
        outcome.sifted += b.sifted;
        outcome.sample += b.sample;
        outcome.mismatches += b.mismatches;
        outcome.qber_est = if outcome.sample == 0 {
            0.0
        } else {
            outcome.mismatches as f64 / outcome.sample as f64
        };
        if b.aborted {
            outcome.aborted = true;
            outcome.key = BitBlock::default();
            return Ok(outcome);
        }
        outcome.key = outcome.key.concat(&b.key);
        if outcome.key.len() >= needed {
            break;
        }
    }
    Ok(outcome)
}

struct Batch {
    key: BitBlock,
    sifted: usize,
    sample: usize,
    mismatches: usize,
    aborted: bool,
}

fn run_batch(config: &ProcessConfig, batch: u32) -> Result<Batch> {
    let len = config.block_len;
    let rng = |purpose| round_rng(config.master_seed, 1, batch, purpose);

    let alice_bits = BitBlock::random(len, &mut rng(Purpose::KeyBits));
    let alice_bases = random_bases(len, &mut rng(Purpose::AliceBases));
    let mut bob_rng = rng(Purpose::BobBases);
    let bob_bases = random_bases(len, &mut bob_rng);

    let mut in_flight = alice_bits.clone();
    if let Eavesdropper::InterceptResend { fraction } = config.eavesdropper {
        in_flight = intercept_resend(
            &in_flight,
            &alice_bases,
            fraction,
            &mut rng(Purpose::Eavesdropper),
        )?;
    }
    let received = bsc_transmit(&in_flight, config.channel_e, &mut rng(Purpose::Channel))?;

    let mut bob_bits = received;
    for i in 0..len {
        if bob_bases[i] != alice_bases[i] {
            bob_bits.set(i, bob_rng.gen());
        }
    }

    let sifted: Vec<usize> = (0..len)
        .filter(|&i| alice_bases[i] == bob_bases[i])
        .collect();
    let n_sift = sifted.len();
    // β·n_sift disclosed, β = pe_sample / N
    let sample_size = (config.pe_sample * n_sift).div_ceil(len).min(n_sift);
    let sample = sample_without_replacement(&sifted, sample_size, &mut rng(Purpose::Estimation));
    let mismatches = sample
        .iter()
        .filter(|&&i| alice_bits.get(i) != bob_bits.get(i))
        .count();
    let qber = if sample_size == 0 {
        0.0
    } else {
        mismatches as f64 / sample_size as f64
    };
    if qber > config.design_e {
        return Ok(Batch {
            key: BitBlock::default(),
            sifted: n_sift,
            sample: sample_size,
            mismatches,
            aborted: true,
        });
    }

    let mut disclosed = vec![false; len];
    for &i in &sample {
        disclosed[i] = true;
    }
    let remaining: Vec<usize> = sifted.into_iter().filter(|&i| !disclosed[i]).collect();
    let h = entropy(qber);
    let ec_cost = (config.f_ec * h * n_sift as f64).ceil() as usize;
    let pa_cost = (h * n_sift as f64).ceil() as usize;
    let key_len = remaining.len().saturating_sub(ec_cost + pa_cost);

    let key = if key_len == 0 {
        BitBlock::default()
    } else {
        let reconciled = alice_bits.select(&remaining);
        let seed = BitBlock::random(reconciled.len() + key_len - 1, &mut rng(Purpose::Toeplitz));
        toeplitz_pa(&reconciled, &seed, key_len)?
    };
    Ok(Batch {
        key,
        sifted: n_sift,
        sample: sample_size,
        mismatches,
        aborted: false,
    })
}
