//! Toeplitz-hash privacy amplification over GF(2).
//!
//! The `out_len × n` matrix is fixed by `n + out_len - 1` seed bits:
//! `T[i][j] = seed[i - j]` on and below the diagonal (so the first column,
//! top to bottom, is `seed[0..out_len)`), and `T[i][j] = seed[out_len - 1 +
//! j - i]` above it (so the first row past the corner is `seed[out_len..]`).

use crate::bits::BitBlock;
use crate::error::{Error, Result};

pub fn toeplitz_entry(seed: &BitBlock, out_len: usize, i: usize, j: usize) -> u8 {
    if i >= j {
        seed.get(i - j)
    } else {
        seed.get(out_len - 1 + j - i)
    }
}

/// `T · bits` with `T` as described in the module docs.
pub fn toeplitz_pa(bits: &BitBlock, seed: &BitBlock, out_len: usize) -> Result<BitBlock> {
    let n = bits.len();
    if out_len == 0 {
        return Err(Error::Config {
            field: "out_len",
            reason: "must be positive".into(),
        });
    }
    if out_len > n {
        return Err(Error::Config {
            field: "out_len",
            reason: format!("{out_len} exceeds input length {n}"),
        });
    }
    let expected = n + out_len - 1;
    if seed.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: seed.len(),
        });
    }

    // Output i is the dot product of `bits` with the window
    // diag[out_len-1-i .. out_len-1-i+n] of the diagonal sequence
    // diag[t] = T[i][j] for t = out_len - 1 - i + j.
    let diag: Vec<u8> = (0..expected)
        .map(|t| {
            if t < out_len {
                seed.get(out_len - 1 - t)
            } else {
                seed.get(t)
            }
        })
        .collect();
    let diag_words = pack(&diag);
    let bit_words = pack(bits.as_slice());
    let mut out = BitBlock::zeros(out_len);
    for i in 0..out_len {
        let start = out_len - 1 - i;
        let mut acc = 0u64;
        for (w, &b) in bit_words.iter().enumerate() {
            acc ^= window_word(&diag_words, start + 64 * w) & b;
        }
        out.set(i, acc.count_ones() % 2 == 1);
    }
    Ok(out)
}

fn pack(bits: &[u8]) -> Vec<u64> {
    let mut words = vec![0u64; bits.len().div_ceil(64) + 1];
    for (i, &b) in bits.iter().enumerate() {
        words[i / 64] |= u64::from(b) << (i % 64);
    }
    words
}

/// 64 bits starting at bit offset `offset`; reads past the end are zero.
fn window_word(words: &[u64], offset: usize) -> u64 {
    let (q, r) = (offset / 64, offset % 64);
    let lo = words.get(q).copied().unwrap_or(0) >> r;
    if r == 0 {
        lo
    } else {
        lo | (words.get(q + 1).copied().unwrap_or(0) << (64 - r))
    }
}
