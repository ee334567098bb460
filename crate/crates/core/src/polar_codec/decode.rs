use crate::bits::{check_len, BitBlock};
use crate::error::{Error, Result};

use super::{encode, PolarCode};

/// Successive-cancellation estimate of the source word `u` from a BSC
/// output `y`. Frozen positions are forced to 0.
pub fn sc_decode(y: &BitBlock, channel_e: f64, code: &PolarCode) -> Result<BitBlock> {
    check_len(code.len(), y.len())?;
    let llrs = bsc_llrs(y, channel_e)?;
    sc_decode_llr(&llrs, code)
}

/// Systematic decoding: SC-decode, re-encode, and read the data positions.
pub fn systematic_decode(y: &BitBlock, channel_e: f64, code: &PolarCode) -> Result<BitBlock> {
    let u_hat = sc_decode(y, channel_e, code)?;
    let x_hat = encode(&u_hat, code)?;
    Ok(x_hat.select(code.data_indices()))
}

fn bsc_llrs(y: &BitBlock, channel_e: f64) -> Result<Vec<f64>> {
    if !(channel_e > 0.0 && channel_e < 0.5) {
        return Err(Error::DegenerateChannel(channel_e));
    }
    let magnitude = ((1.0 - channel_e) / channel_e).ln();
    Ok(y.iter()
        .map(|b| if b == 0 { magnitude } else { -magnitude })
        .collect())
}

/// SC decoding from channel log-likelihood ratios `ln P(y|0)/P(y|1)`.
///
/// Bit decisions are `1` only for strictly negative LLRs.
pub fn sc_decode_llr(llrs: &[f64], code: &PolarCode) -> Result<BitBlock> {
    check_len(code.len(), llrs.len())?;
    let len = llrs.len();
    let mut u = vec![0u8; len];
    let mut x = vec![0u8; len];
    // LLR workspace for the left/right children: N/2 + N/4 + ... < N
    let mut scratch = vec![0.0f64; len.max(1)];
    decode_node(llrs, code.frozen_mask(), &mut u, &mut x, &mut scratch);
    BitBlock::from_bits(u)
}

fn decode_node(llr: &[f64], frozen: &[bool], u: &mut [u8], x: &mut [u8], scratch: &mut [f64]) {
    let len = llr.len();
    if len == 1 {
        let bit = u8::from(!frozen[0] && llr[0] < 0.0);
        u[0] = bit;
        x[0] = bit;
        return;
    }
    let half = len / 2;
    let (child_llr, rest) = scratch.split_at_mut(half);
    let (l1, l2) = llr.split_at(half);
    let (f1, f2) = frozen.split_at(half);
    let (u1, u2) = u.split_at_mut(half);
    let (x1, x2) = x.split_at_mut(half);

    // x1 = c_a ⊕ c_b, x2 = c_b
    for (out, (&a, &b)) in child_llr.iter_mut().zip(l1.iter().zip(l2)) {
        *out = check_node(a, b);
    }
    decode_node(child_llr, f1, u1, x1, rest);

    for ((out, (&a, &b)), &c) in child_llr.iter_mut().zip(l1.iter().zip(l2)).zip(x1.iter()) {
        *out = if c == 0 { b + a } else { b - a };
    }
    decode_node(child_llr, f2, u2, x2, rest);

    for (a, b) in x1.iter_mut().zip(x2.iter()) {
        *a ^= *b;
    }
}

/// Exact box-plus `2 atanh(tanh(a/2) tanh(b/2))`.
///
/// The product form is used while one input is small, where the result is
/// small too and the log form would cancel. The log form takes over for
/// large magnitudes, where `atanh` of a product near 1 loses precision.
pub(crate) fn check_node(a: f64, b: f64) -> f64 {
    if a.abs().min(b.abs()) < 1.0 {
        return 2.0 * ((0.5 * a).tanh() * (0.5 * b).tanh()).atanh();
    }
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}
