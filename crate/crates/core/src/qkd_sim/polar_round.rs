//! Rounds 2..M: systematic polar coding with frozen bits encrypted under the
//! previous round's key.

use rand::Rng;

use crate::bits::{check_len, BitBlock};
use crate::error::{Error, Result};
use crate::polar_codec::{systematic_decode, systematic_encode, PolarCode};
use crate::rate_model::entropy;

use super::channel::{
    apply_permutation, bsc_transmit, intercept_resend, invert_permutation, random_bases,
    random_permutation, sample_without_replacement, Basis,
};
use super::config::{Eavesdropper, PeMode, ProcessConfig};
use super::streams::{round_rng, Purpose};
use super::toeplitz::toeplitz_pa;

/// The chained key as each party holds it. The two copies agree unless
/// something went wrong upstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedKey {
    pub alice: BitBlock,
    pub bob: BitBlock,
}

impl SharedKey {
    pub fn agreed(key: BitBlock) -> Self {
        SharedKey {
            alice: key.clone(),
            bob: key,
        }
    }

    pub fn matches(&self) -> bool {
        self.alice == self.bob
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundResult {
    pub round: u32,
    pub qber_est: f64,
    /// Positions that entered the estimate.
    pub pe_sample: usize,
    pub pe_mismatches: usize,
    /// Crossover probability handed to the SC decoder.
    pub decoder_e: f64,
    /// `⌈H(qber_est)·N⌉`, removed by privacy amplification.
    pub leak: usize,
    pub key_next: BitBlock,
    pub key_secure: BitBlock,
    pub bob_key_next: BitBlock,
    pub bob_key_secure: BitBlock,
    pub aborted: bool,
    pub decode_failed: bool,
}

impl RoundResult {
    pub fn keys_agree(&self) -> bool {
        self.key_next == self.bob_key_next && self.key_secure == self.bob_key_secure
    }

    /// Key handed to the next round.
    pub fn next_key(&self) -> SharedKey {
        SharedKey {
            alice: self.key_next.clone(),
            bob: self.bob_key_next.clone(),
        }
    }
}

/// Public announcements of one round. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTranscript {
    pub round: u32,
    /// `permutation[p]` is the codeword index sent at position `p`.
    pub permutation: Vec<usize>,
    /// Alice's basis per transmitted position.
    pub bases: Vec<Basis>,
    /// Transmitted position of each frozen codeword bit, in frozen order.
    pub encrypted_frozen_positions: Vec<usize>,
    /// (codeword index, Bob's disclosed bit).
    pub pe_disclosure: Vec<(usize, u8)>,
    /// Alice's encrypted frozen bits, announced in the random-basis variant.
    pub announced_frozen: Option<BitBlock>,
    /// Bob's measurement basis per frozen bit, random-basis variant only.
    pub bob_bases: Option<Vec<Basis>>,
    pub toeplitz_seed: BitBlock,
    pub abort: bool,
}

/// XORs `key[k]` into the `k`-th frozen codeword position.
pub fn xor_frozen(word: &mut BitBlock, code: &PolarCode, key: &BitBlock) -> Result<()> {
    check_len(code.frozen_count(), key.len())?;
    for (k, &pos) in code.frozen_indices().iter().enumerate() {
        if key.get(k) == 1 {
            word.flip(pos);
        }
    }
    Ok(())
}

/// One polar round with the estimate taken from Bob's decrypted frozen bits.
pub fn run_polar_round(
    prev_key_next: &SharedKey,
    config: &ProcessConfig,
    code: &PolarCode,
    round: u32,
) -> Result<(RoundResult, RoundTranscript)> {
    round_impl(prev_key_next, config, code, round, PeMode::Disclosed)
}

/// Variant where Bob measures the frozen qubits in his own random bases and
/// decodes with Alice's announced frozen bits.
pub fn run_polar_round_alt_pe(
    prev_key_next: &SharedKey,
    config: &ProcessConfig,
    code: &PolarCode,
    round: u32,
) -> Result<(RoundResult, RoundTranscript)> {
    round_impl(prev_key_next, config, code, round, PeMode::RandomBasis)
}

fn round_impl(
    prev: &SharedKey,
    config: &ProcessConfig,
    code: &PolarCode,
    round: u32,
    mode: PeMode,
) -> Result<(RoundResult, RoundTranscript)> {
    let n = code.len();
    check_len(config.block_len, n)?;
    let frozen = code.frozen_indices();
    check_len(frozen.len(), prev.alice.len())?;
    check_len(frozen.len(), prev.bob.len())?;
    let rng = |purpose| round_rng(config.master_seed, round, 0, purpose);

    // Step 1
    let data = BitBlock::random(code.data_count(), &mut rng(Purpose::KeyBits));
    let codeword = systematic_encode(&data, code)?;
    let mut encrypted = codeword.clone();
    xor_frozen(&mut encrypted, code, &prev.alice)?;

    // Step 2
    let permutation = random_permutation(n, &mut rng(Purpose::Permutation));
    let bases = random_bases(n, &mut rng(Purpose::AliceBases));
    let mut in_flight = apply_permutation(&encrypted, &permutation)?;
    if let Eavesdropper::InterceptResend { fraction } = config.eavesdropper {
        in_flight = intercept_resend(
            &in_flight,
            &bases,
            fraction,
            &mut rng(Purpose::Eavesdropper),
        )?;
    }
    let received = bsc_transmit(&in_flight, config.channel_e, &mut rng(Purpose::Channel))?;

    // Step 3
    let mut position_of = vec![0usize; n];
    for (p, &src) in permutation.iter().enumerate() {
        position_of[src] = p;
    }
    let encrypted_frozen_positions: Vec<usize> = frozen.iter().map(|&f| position_of[f]).collect();
    let mut bob_word = invert_permutation(&received, &permutation)?;

    let frozen_order: Vec<usize> = (0..frozen.len()).collect();
    let sampled = sample_without_replacement(
        &frozen_order,
        config.pe_sample,
        &mut rng(Purpose::Estimation),
    );

    let mut pe_disclosure = Vec::new();
    let mut announced_frozen = None;
    let mut bob_bases = None;
    let mut mismatches = 0;
    match mode {
        PeMode::Disclosed => {
            for &k in &sampled {
                let pos = frozen[k];
                let disclosed = bob_word.get(pos) ^ prev.bob.get(k);
                pe_disclosure.push((pos, disclosed));
                if disclosed != codeword.get(pos) {
                    mismatches += 1;
                }
            }
        }
        PeMode::RandomBasis => {
            let mut bob_rng = rng(Purpose::BobBases);
            let measured_in = random_bases(frozen.len(), &mut bob_rng);
            let mut outcomes = Vec::with_capacity(frozen.len());
            for (k, &pos) in frozen.iter().enumerate() {
                let matched = measured_in[k] == bases[position_of[pos]];
                let bit = if matched {
                    bob_word.get(pos)
                } else {
                    u8::from(bob_rng.gen::<bool>())
                };
                outcomes.push((matched, bit));
            }
            for &k in &sampled {
                let (matched, bit) = outcomes[k];
                if !matched {
                    continue;
                }
                let pos = frozen[k];
                pe_disclosure.push((pos, bit));
                if bit != encrypted.get(pos) {
                    mismatches += 1;
                }
            }
            if pe_disclosure.len() < config.min_pe_sample.max(1) {
                return Err(Error::EstimationSample {
                    needed: config.min_pe_sample.max(1),
                    available: pe_disclosure.len(),
                });
            }
            // Bob continues with the frozen bits Alice announced.
            for &pos in frozen {
                bob_word.set(pos, encrypted.get(pos) == 1);
            }
            announced_frozen = Some(encrypted.select(frozen));
            bob_bases = Some(measured_in);
        }
    }
    let pe_sample = pe_disclosure.len();
    let qber_est = if pe_sample == 0 {
        0.0
    } else {
        mismatches as f64 / pe_sample as f64
    };

    let mut transcript = RoundTranscript {
        round,
        permutation,
        bases,
        encrypted_frozen_positions,
        pe_disclosure,
        announced_frozen,
        bob_bases,
        toeplitz_seed: BitBlock::default(),
        abort: false,
    };
    let mut result = RoundResult {
        round,
        qber_est,
        pe_sample,
        pe_mismatches: mismatches,
        decoder_e: 0.0,
        leak: 0,
        key_next: BitBlock::default(),
        key_secure: BitBlock::default(),
        bob_key_next: BitBlock::default(),
        bob_key_secure: BitBlock::default(),
        aborted: false,
        decode_failed: false,
    };
    if qber_est > config.design_e {
        result.aborted = true;
        transcript.abort = true;
        return Ok((result, transcript));
    }

    // Step 4
    xor_frozen(&mut bob_word, code, &prev.bob)?;
    // A zero estimate still needs a finite LLR.
    let decoder_e = qber_est
        .max(0.5 / pe_sample.max(1) as f64)
        .min(config.design_e);
    let bob_data = systematic_decode(&bob_word, decoder_e, code)?;
    result.decoder_e = decoder_e;
    result.decode_failed = bob_data != data;

    // Step 5
    let leak = (entropy(qber_est) * n as f64).ceil() as usize;
    let needed = frozen.len();
    let out_len = data.len().saturating_sub(leak);
    if out_len < needed {
        return Err(Error::InsufficientKey {
            needed,
            available: out_len,
        });
    }
    let seed = BitBlock::random(data.len() + out_len - 1, &mut rng(Purpose::Toeplitz));
    let alice_out = toeplitz_pa(&data, &seed, out_len)?;
    let bob_out = toeplitz_pa(&bob_data, &seed, out_len)?;
    transcript.toeplitz_seed = seed;

    // Step 6
    result.leak = leak;
    result.key_next = alice_out.slice(0, needed);
    result.key_secure = alice_out.slice(needed, out_len);
    result.bob_key_next = bob_out.slice(0, needed);
    result.bob_key_secure = bob_out.slice(needed, out_len);
    Ok((result, transcript))
}
