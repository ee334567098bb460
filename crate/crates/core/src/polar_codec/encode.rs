use crate::bits::{check_len, BitBlock};
use crate::error::{Error, Result};

use super::PolarCode;

/// Largest `n` for which [`generator_matrix`] will materialize `F^{⊗n}`.
const MAX_MATRIX_LOG_LEN: u32 = 12;

/// Dense `F^{⊗n}`, row-major. Reference use only.
pub fn generator_matrix(log_len: u32) -> Result<Vec<Vec<u8>>> {
    if log_len > MAX_MATRIX_LOG_LEN {
        return Err(Error::MatrixTooLarge(log_len));
    }
    let len = 1usize << log_len;
    // G[r][c] = 1 iff the bits of c are a subset of the bits of r
    Ok((0..len)
        .map(|r| (0..len).map(|c| u8::from(r & c == c)).collect())
        .collect())
}

/// `x = u F^{⊗n}` in place, by the `n`-stage butterfly.
pub fn polar_transform_in_place(bits: &mut [u8]) {
    let len = bits.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in bits.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}

/// Non-systematic encoding `x = uG`. The transform is its own inverse.
pub fn encode(u: &BitBlock, code: &PolarCode) -> Result<BitBlock> {
    check_len(code.len(), u.len())?;
    let mut x = u.clone();
    polar_transform_in_place(x.as_mut_slice());
    Ok(x)
}

/// Systematic encoding: returns the codeword `x` with `x[data] = d` and
/// `(xG)[frozen] = 0`.
///
/// Splitting `x = [x1, x2]` gives `xG = [(x1 ⊕ x2)G', x2 G']`, so the second
/// half is a self-contained half-size problem and, once solved, the first
/// half is the same problem in `z = x1 ⊕ x2`. This holds for any frozen set.
pub fn systematic_encode(d: &BitBlock, code: &PolarCode) -> Result<BitBlock> {
    check_len(code.data_count(), d.len())?;
    let mut x = vec![0u8; code.len()];
    for (&pos, bit) in code.data_indices().iter().zip(d.iter()) {
        x[pos] = bit;
    }
    solve_systematic(&mut x, code.frozen_mask());
    BitBlock::from_bits(x)
}

fn solve_systematic(x: &mut [u8], frozen: &[bool]) {
    if x.len() == 1 {
        if frozen[0] {
            x[0] = 0;
        }
        return;
    }
    let half = x.len() / 2;
    let (x1, x2) = x.split_at_mut(half);
    let (f1, f2) = frozen.split_at(half);
    solve_systematic(x2, f2);
    for (a, b) in x1.iter_mut().zip(x2.iter()) {
        *a ^= *b;
    }
    solve_systematic(x1, f1);
    for (a, b) in x1.iter_mut().zip(x2.iter()) {
        *a ^= *b;
    }
}

/// Encode, clear the frozen positions, encode again.
///
/// Equals [`systematic_encode`] only when the data set is closed under
/// binary domination (which reliability-ordered constructions satisfy in
/// practice); for other frozen sets the data positions come out wrong.
pub fn systematic_encode_two_pass(d: &BitBlock, code: &PolarCode) -> Result<BitBlock> {
    check_len(code.data_count(), d.len())?;
    let mut v = vec![0u8; code.len()];
    for (&pos, bit) in code.data_indices().iter().zip(d.iter()) {
        v[pos] = bit;
    }
    polar_transform_in_place(&mut v);
    for &pos in code.frozen_indices() {
        v[pos] = 0;
    }
    polar_transform_in_place(&mut v);
    BitBlock::from_bits(v)
}
