//! Reference oracles built straight from the definitions, sharing no code
//! with the library's fast paths.
#![allow(dead_code)]

use polar_qkd::BitBlock;

/// `G[r][c]` of `F^{⊗n}`: set iff the bits of `c` are a subset of those of `r`.
pub fn g_entry(r: usize, c: usize) -> u8 {
    u8::from(r & c == c)
}

/// Dense `u·G` over GF(2).
pub fn dense_encode(u: &[u8]) -> Vec<u8> {
    let n = u.len();
    (0..n)
        .map(|c| (0..n).fold(0u8, |acc, r| acc ^ (u[r] & g_entry(r, c))))
        .collect()
}

/// Solves `{x[data] = d, (xG)[frozen] = 0}` by Gaussian elimination.
/// Returns `None` if the system is singular (it never is for polar codes).
pub fn gaussian_systematic(frozen_mask: &[bool], d: &[u8]) -> Option<Vec<u8>> {
    let n = frozen_mask.len();
    let words = n.div_ceil(64) + 1; // last word bit 0 carries the right-hand side
    let rhs_word = words - 1;
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut k = 0;
    for (i, &frozen) in frozen_mask.iter().enumerate() {
        let mut row = vec![0u64; words];
        if frozen {
            for r in 0..n {
                if g_entry(r, i) == 1 {
                    row[r / 64] |= 1 << (r % 64);
                }
            }
        } else {
            row[i / 64] |= 1 << (i % 64);
            row[rhs_word] = u64::from(d[k]);
            k += 1;
        }
        rows.push(row);
    }
    let mut pivot_row = 0;
    let mut pivots = vec![usize::MAX; n];
    for col in 0..n {
        let bit = 1u64 << (col % 64);
        let Some(p) = (pivot_row..n).find(|&r| rows[r][col / 64] & bit != 0) else {
            continue;
        };
        rows.swap(pivot_row, p);
        for r in 0..n {
            if r != pivot_row && rows[r][col / 64] & bit != 0 {
                let src = rows[pivot_row].clone();
                for (w, s) in rows[r].iter_mut().zip(&src) {
                    *w ^= s;
                }
            }
        }
        pivots[col] = pivot_row;
        pivot_row += 1;
    }
    if pivot_row < n {
        return None;
    }
    Some(
        (0..n)
            .map(|c| (rows[pivots[c]][rhs_word] & 1) as u8)
            .collect(),
    )
}

/// `T[i][j] = seed[i − j]` on and below the diagonal, `seed[m − 1 + j − i]`
/// above it, for an `m × n` matrix and a seed of `n + m − 1` bits.
pub fn dense_toeplitz(bits: &[u8], seed: &[u8], m: usize) -> Vec<u8> {
    let n = bits.len();
    assert_eq!(seed.len(), n + m - 1);
    (0..m)
        .map(|i| {
            (0..n).fold(0u8, |acc, j| {
                let t = if i >= j {
                    seed[i - j]
                } else {
                    seed[m - 1 + j - i]
                };
                acc ^ (t & bits[j])
            })
        })
        .collect()
}

/// Worked-example codeword `x = uG` for `u = (0,0,0,d1,0,d2,d3,d4)`,
/// N = 8, frozen set {1, 2, 3, 5}.
pub fn worked_example_codeword(d: [u8; 4]) -> [u8; 8] {
    let [d1, d2, d3, d4] = d;
    [
        d1 ^ d2 ^ d3 ^ d4,
        d1 ^ d2 ^ d4,
        d1 ^ d3 ^ d4,
        d1 ^ d4,
        d2 ^ d3 ^ d4,
        d2 ^ d4,
        d3 ^ d4,
        d4,
    ]
}

/// Worked-example "systematization" `x'`: the data positions of `x`
/// replaced by the plain data bits.
pub fn worked_example_substituted(d: [u8; 4]) -> [u8; 8] {
    let [d1, d2, d3, d4] = d;
    [
        d1 ^ d2 ^ d3 ^ d4,
        d1 ^ d2 ^ d4,
        d1 ^ d3 ^ d4,
        d1,
        d2 ^ d3 ^ d4,
        d2,
        d3,
        d4,
    ]
}

pub fn all_nibbles() -> impl Iterator<Item = [u8; 4]> {
    (0u8..16).map(|w| [w >> 3 & 1, w >> 2 & 1, w >> 1 & 1, w & 1])
}

pub fn block(bits: &[u8]) -> BitBlock {
    BitBlock::from_bits(bits.to_vec()).unwrap()
}
