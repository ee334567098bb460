//! Seeded reference outputs committed under `tests/fixtures`.
//!
//! The `fixtures` CLI command writes [`all`] to disk; the regression tests
//! compare against the committed copies byte for byte.

use std::fmt::Write as _;

use crate::bits::BitBlock;
use crate::error::Result;
use crate::polar_codec::fer::{fer_csv, measure_fer};
use crate::polar_codec::PolarCode;
use crate::qkd_sim::{
    bsc_transmit, run_bb84_round, run_polar_round, run_polar_round_alt_pe, ProcessConfig,
    RoundResult, SharedKey,
};
use crate::rng::stream_rng;

pub const GOLDEN_SEED: u64 = 42;

/// `(file name, contents)` for every fixture.
pub fn all() -> Result<Vec<(&'static str, String)>> {
    Ok(vec![
        ("bsc_n4096_e0.02.txt", bsc()?),
        ("bb84_round_n4096_e0.02.txt", bb84_round()?),
        ("polar_round_n4096_e0.01.txt", polar_round(false)?),
        ("polar_round_alt_n4096_e0.01.txt", polar_round(true)?),
        ("fer_E0.04_seed42.csv", fer()?),
    ])
}

pub fn bsc() -> Result<String> {
    let input = BitBlock::random(4096, &mut stream_rng(GOLDEN_SEED, 0));
    let output = bsc_transmit(&input, 0.02, &mut stream_rng(GOLDEN_SEED, 1))?;
    let mut s = String::new();
    let _ = writeln!(s, "N = 4096\ne = 0.02\nseed = {GOLDEN_SEED}");
    let _ = writeln!(s, "flips = {}", input.hamming_distance(&output)?);
    let _ = writeln!(s, "input = {input}");
    let _ = writeln!(s, "output = {output}");
    Ok(s)
}

fn config(channel_e: f64) -> Result<ProcessConfig> {
    let mut config = ProcessConfig::new(4096, 2, 0.04, 0.0, GOLDEN_SEED)?;
    config.channel_e = channel_e;
    // one batch falls short of F at e = 0.02
    config.round1_max_batches = 2;
    config.validate()?;
    Ok(config)
}

pub fn bb84_round() -> Result<String> {
    let out = run_bb84_round(&config(0.02)?)?;
    let mut s = String::new();
    let _ = writeln!(s, "N = 4096\ne = 0.02\nE = 0.04\nseed = {GOLDEN_SEED}");
    let _ = writeln!(s, "batches = {}", out.batches);
    let _ = writeln!(s, "sifted = {}", out.sifted);
    let _ = writeln!(s, "sample = {}", out.sample);
    let _ = writeln!(s, "mismatches = {}", out.mismatches);
    let _ = writeln!(s, "qber_est = {:?}", out.qber_est);
    let _ = writeln!(s, "aborted = {}", out.aborted);
    let _ = writeln!(s, "key_len = {}", out.key.len());
    let _ = writeln!(s, "key = {}", out.key);
    Ok(s)
}

pub fn polar_round(alt: bool) -> Result<String> {
    let config = config(0.01)?;
    let code = PolarCode::design(config.design_e, config.block_len)?;
    let key = BitBlock::random(code.frozen_count(), &mut stream_rng(GOLDEN_SEED, u64::MAX));
    let key = SharedKey::agreed(key);
    let (r, _) = if alt {
        run_polar_round_alt_pe(&key, &config, &code, 2)?
    } else {
        run_polar_round(&key, &config, &code, 2)?
    };
    let mut s = String::new();
    let _ = writeln!(s, "N = 4096\ne = 0.01\nE = 0.04\nseed = {GOLDEN_SEED}");
    write_round(&mut s, &r);
    Ok(s)
}

fn write_round(s: &mut String, r: &RoundResult) {
    let _ = writeln!(s, "qber_est = {:?}", r.qber_est);
    let _ = writeln!(s, "pe_sample = {}", r.pe_sample);
    let _ = writeln!(s, "pe_mismatches = {}", r.pe_mismatches);
    let _ = writeln!(s, "decoder_e = {:?}", r.decoder_e);
    let _ = writeln!(s, "leak = {}", r.leak);
    let _ = writeln!(s, "aborted = {}", r.aborted);
    let _ = writeln!(s, "decode_failed = {}", r.decode_failed);
    let _ = writeln!(s, "keys_agree = {}", r.keys_agree());
    let _ = writeln!(s, "key_next = {}", r.key_next);
    let _ = writeln!(s, "key_secure = {}", r.key_secure);
}

/// FER table over N ∈ {2^8, 2^10, 2^12}, e ∈ {0.005, 0.01, 0.02}, E = 0.04,
/// 2000 trials per cell.
pub fn fer() -> Result<String> {
    let mut cells = Vec::new();
    for n in [256, 1024, 4096] {
        for e in [0.005, 0.01, 0.02] {
            cells.push(measure_fer(n, e, 0.04, 2000, GOLDEN_SEED)?);
        }
    }
    Ok(fer_csv(&cells))
}
