//! Binary polar codes with generator `G = F^{⊗n}`, `F = [[1,0],[1,1]]`.
//!
//! No bit-reversal permutation is applied, so both the encoder and the
//! successive-cancellation decoder work in natural index order. Indices are
//! 0-based internally and 1-based wherever a frozen set crosses the public
//! boundary ([`PolarCode::frozen_set`], [`PolarCode::from_frozen_set`], the
//! descriptor file).

mod construct;
mod decode;
mod descriptor;
mod encode;
pub mod fer;
mod tal_vardy;

pub use construct::{
    bhattacharyya_parameters, bit_channel_error_probabilities, compute_frozen_count,
    construct_frozen_set, construct_frozen_set_with, Construction,
};
pub use decode::{sc_decode, sc_decode_llr, systematic_decode};
pub use encode::{
    encode, generator_matrix, polar_transform_in_place, systematic_encode,
    systematic_encode_two_pass,
};

use crate::error::{Error, Result};

/// Largest supported `n` (block length `2^n`).
pub const MAX_LOG_LEN: u32 = 24;

/// A polar code descriptor: block length and frozen index set.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCode {
    log_len: u32,
    frozen_mask: Vec<bool>,
    frozen: Vec<usize>,
    data: Vec<usize>,
    design_e: Option<f64>,
}

impl PolarCode {
    /// Builds a code from 0-based frozen indices.
    pub fn new(log_len: u32, frozen: &[usize]) -> Result<Self> {
        if log_len > MAX_LOG_LEN {
            return Err(Error::BlockLength(1usize << log_len.min(63)));
        }
        let len = 1usize << log_len;
        let mut mask = vec![false; len];
        for &i in frozen {
            if i >= len {
                return Err(Error::FrozenSet(format!(
                    "index {i} out of range for N = {len}"
                )));
            }
            if mask[i] {
                return Err(Error::FrozenSet(format!("duplicate index {i}")));
            }
            mask[i] = true;
        }
        Ok(Self::from_mask(log_len, mask, None))
    }

    /// Builds a code from a 1-based frozen set.
    pub fn from_frozen_set(log_len: u32, frozen_one_based: &[usize]) -> Result<Self> {
        let zero_based = frozen_one_based
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or_else(|| Error::FrozenSet("index 0 in a 1-based frozen set".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(log_len, &zero_based)
    }

    /// Sizes the frozen set as `⌈H(E)·N⌉` and fills it with the least reliable
    /// bit-channels for a BSC with crossover `design_e`, using the default
    /// [`Construction`].
    pub fn design(design_e: f64, block_len: usize) -> Result<Self> {
        Self::design_with(Construction::default(), design_e, block_len)
    }

    pub fn design_with(
        construction: Construction,
        design_e: f64,
        block_len: usize,
    ) -> Result<Self> {
        let log_len = log2_exact(block_len)?;
        let frozen_count = compute_frozen_count(design_e, block_len)?;
        let frozen = if frozen_count == 0 {
            Vec::new()
        } else {
            construct_frozen_set_with(construction, design_e, block_len, frozen_count)?
        };
        let mut code = Self::from_frozen_set(log_len, &frozen)?;
        code.design_e = Some(design_e);
        Ok(code)
    }

    pub(crate) fn from_mask(log_len: u32, frozen_mask: Vec<bool>, design_e: Option<f64>) -> Self {
        let (frozen, data): (Vec<usize>, Vec<usize>) =
            (0..frozen_mask.len()).partition(|&i| frozen_mask[i]);
        PolarCode {
            log_len,
            frozen_mask,
            frozen,
            data,
            design_e,
        }
    }

    pub fn with_design_e(mut self, design_e: f64) -> Self {
        self.design_e = Some(design_e);
        self
    }

    pub fn log_len(&self) -> u32 {
        self.log_len
    }

    /// Block length `N`.
    pub fn len(&self) -> usize {
        self.frozen_mask.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of frozen positions `F`.
    pub fn frozen_count(&self) -> usize {
        self.frozen.len()
    }

    /// Number of data positions `K = N - F`.
    pub fn data_count(&self) -> usize {
        self.data.len()
    }

    pub fn design_e(&self) -> Option<f64> {
        self.design_e
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen_mask[i]
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen_mask
    }

    /// Frozen positions, 0-based, ascending.
    pub fn frozen_indices(&self) -> &[usize] {
        &self.frozen
    }

    /// Data positions, 0-based, ascending.
    pub fn data_indices(&self) -> &[usize] {
        &self.data
    }

    /// Frozen positions, 1-based, ascending.
    pub fn frozen_set(&self) -> Vec<usize> {
        self.frozen.iter().map(|i| i + 1).collect()
    }
}

/// `n` such that `2^n = block_len`.
pub fn log2_exact(block_len: usize) -> Result<u32> {
    if block_len == 0 || !block_len.is_power_of_two() {
        return Err(Error::BlockLength(block_len));
    }
    let log_len = block_len.trailing_zeros();
    if log_len > MAX_LOG_LEN {
        return Err(Error::BlockLength(block_len));
    }
    Ok(log_len)
}
