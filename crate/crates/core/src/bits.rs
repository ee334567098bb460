//! Fixed-length binary sequences.

use std::fmt;
use std::ops::BitXor;

use rand::Rng;

use crate::error::{Error, Result};

/// A sequence of binary symbols, stored one symbol per byte.
///
/// Every element is 0 or 1; the constructors enforce this.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitBlock {
    bits: Vec<u8>,
}

impl BitBlock {
    pub fn zeros(len: usize) -> Self {
        BitBlock { bits: vec![0; len] }
    }

    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some((index, &value)) = bits.iter().enumerate().find(|(_, &b)| b > 1) {
            return Err(Error::NonBinary { index, value });
        }
        Ok(BitBlock { bits })
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitBlock {
            bits: iter.into_iter().map(u8::from).collect(),
        }
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("invalid bit character {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(|bits| BitBlock { bits })
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        BitBlock {
            bits: (0..len).map(|_| rng.gen::<bool>() as u8).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        self.bits[i] = bit as u8;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] ^= 1;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [u8] {
        &mut self.bits
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Element-wise XOR; both blocks must have the same length.
    pub fn xor(&self, other: &BitBlock) -> Result<BitBlock> {
        check_len(self.len(), other.len())?;
        Ok(BitBlock {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// Number of positions where the two blocks differ.
    pub fn hamming_distance(&self, other: &BitBlock) -> Result<usize> {
        check_len(self.len(), other.len())?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count())
    }

    /// Gathers the bits at `indices` (0-based) into a new block.
    pub fn select(&self, indices: &[usize]) -> BitBlock {
        BitBlock {
            bits: indices.iter().map(|&i| self.bits[i]).collect(),
        }
    }

    /// Sub-block `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> BitBlock {
        BitBlock {
            bits: self.bits[start..end].to_vec(),
        }
    }

    pub fn concat(&self, other: &BitBlock) -> BitBlock {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BitBlock { bits }
    }
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, actual })
    }
}

impl BitXor for &BitBlock {
    type Output = BitBlock;

    /// Panics on length mismatch; use [`BitBlock::xor`] for the fallible form.
    fn bitxor(self, rhs: &BitBlock) -> BitBlock {
        self.xor(rhs).expect("xor of unequal-length blocks")
    }
}

impl fmt::Display for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(if *b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitBlock({self})")
    }
}
