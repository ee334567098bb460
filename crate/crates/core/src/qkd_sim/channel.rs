//! Classical stand-ins for the quantum link.
//!
//! When Bob measures in the basis Alice announces, each qubit reduces to a
//! bit flipped independently with the channel error rate. Bases are still
//! drawn and recorded so transcripts follow the protocol.

use rand::Rng;

use crate::bits::{check_len, BitBlock};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Computational,
    Hadamard,
}

impl Basis {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        if rng.gen::<bool>() {
            Basis::Hadamard
        } else {
            Basis::Computational
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Basis::Computational => 'Z',
            Basis::Hadamard => 'X',
        }
    }
}

pub fn random_bases<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Basis> {
    (0..len).map(|_| Basis::random(rng)).collect()
}

/// Binary symmetric channel: flips each bit independently with probability `e`.
pub fn bsc_transmit<R: Rng + ?Sized>(x: &BitBlock, e: f64, rng: &mut R) -> Result<BitBlock> {
    if !(0.0..0.5).contains(&e) {
        return Err(Error::Domain {
            name: "e",
            value: e,
            range: "[0, 0.5)",
        });
    }
    let mut y = x.clone();
    for i in 0..y.len() {
        if rng.gen::<f64>() < e {
            y.flip(i);
        }
    }
    Ok(y)
}

/// Intercept-resend attack on a `fraction` of positions.
///
/// Eve measures in a uniformly random basis and re-prepares what she saw.
/// When her basis differs from Alice's, Bob's measurement in Alice's basis
/// is a fair coin, so each attacked position flips with probability 1/4.
pub fn intercept_resend<R: Rng + ?Sized>(
    x: &BitBlock,
    bases: &[Basis],
    fraction: f64,
    rng: &mut R,
) -> Result<BitBlock> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::Domain {
            name: "fraction",
            value: fraction,
            range: "[0, 1]",
        });
    }
    check_len(x.len(), bases.len())?;
    let mut y = x.clone();
    if fraction == 0.0 {
        return Ok(y);
    }
    for (i, &alice_basis) in bases.iter().enumerate() {
        if rng.gen::<f64>() >= fraction {
            continue;
        }
        if Basis::random(rng) != alice_basis {
            y.set(i, rng.gen());
        }
    }
    Ok(y)
}

/// Uniform random permutation by Fisher–Yates; `perm[p]` is the source
/// index carried at transmitted position `p`.
pub fn random_permutation<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// `out[p] = x[perm[p]]`.
pub fn apply_permutation(x: &BitBlock, perm: &[usize]) -> Result<BitBlock> {
    check_len(x.len(), perm.len())?;
    Ok(x.select(perm))
}

/// Inverse of [`apply_permutation`]: `out[perm[p]] = y[p]`.
pub fn invert_permutation(y: &BitBlock, perm: &[usize]) -> Result<BitBlock> {
    check_len(y.len(), perm.len())?;
    let mut out = BitBlock::zeros(y.len());
    for (p, &src) in perm.iter().enumerate() {
        out.set(src, y.get(p) == 1);
    }
    Ok(out)
}

/// `k` distinct elements of `items`, uniformly, in draw order.
pub fn sample_without_replacement<R: Rng + ?Sized>(
    items: &[usize],
    k: usize,
    rng: &mut R,
) -> Vec<usize> {
    let mut pool = items.to_vec();
    let k = k.min(pool.len());
    for i in 0..k {
        let j = rng.gen_range(i..pool.len());
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}
