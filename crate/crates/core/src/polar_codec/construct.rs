use crate::error::{Error, Result};
use crate::rate_model::binary_entropy;

use super::{log2_exact, tal_vardy};

/// Reliability ordering used to pick frozen positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// BSC-initialized Bhattacharyya recursion `Z⁻ = 2Z - Z²`, `Z⁺ = Z²`.
    Bhattacharyya,
    /// Degrading-merge density evolution keeping at most `max_outputs`
    /// conjugate output pairs per bit-channel; ranks by error probability.
    TalVardy { max_outputs: usize },
}

impl Default for Construction {
    fn default() -> Self {
        Construction::TalVardy { max_outputs: 8 }
    }
}

impl std::str::FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bhattacharyya" => Ok(Construction::Bhattacharyya),
            "tal-vardy" => Ok(Construction::default()),
            other => match other.strip_prefix("tal-vardy:").map(str::parse) {
                Some(Ok(max_outputs)) if max_outputs >= 2 => {
                    Ok(Construction::TalVardy { max_outputs })
                }
                _ => Err(Error::Parse(format!(
                    "unknown construction {other:?} (expected `bhattacharyya`, `tal-vardy` or `tal-vardy:<outputs>`)"
                ))),
            },
        }
    }
}

/// Frozen-set size `⌈H(E)·N⌉`.
pub fn compute_frozen_count(design_e: f64, block_len: usize) -> Result<usize> {
    if !(0.0..=0.5).contains(&design_e) {
        return Err(Error::Domain {
            name: "E",
            value: design_e,
            range: "[0, 0.5]",
        });
    }
    log2_exact(block_len)?;
    let h = binary_entropy(design_e)?;
    Ok(((h * block_len as f64).ceil() as usize).min(block_len))
}

/// Natural-log Bhattacharyya parameters of the `N` synthesized channels of a
/// BSC with crossover `design_e`, in natural (non-bit-reversed) order.
///
/// Working in the log domain keeps resolution at both ends: near 0 where
/// squaring underflows, and near 1 where `2Z - Z^2` rounds to 1.
pub fn bhattacharyya_parameters(design_e: f64, block_len: usize) -> Result<Vec<f64>> {
    check_design_e(design_e)?;
    let log_len = log2_exact(block_len)?;
    let z0 = 2.0 * (design_e * (1.0 - design_e)).sqrt();
    let mut log_z = vec![z0.ln()];
    for _ in 0..log_len {
        let mut next = Vec::with_capacity(log_z.len() * 2);
        for &lz in &log_z {
            // ln(2z - z^2) = ln z + ln(1 + (1 - z))
            let one_minus_z = -lz.exp_m1();
            next.push(lz + one_minus_z.ln_1p());
            next.push(2.0 * lz);
        }
        log_z = next;
    }
    Ok(log_z)
}

fn check_design_e(design_e: f64) -> Result<()> {
    if design_e > 0.0 && design_e < 0.5 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "design_e",
            value: design_e,
            range: "(0, 0.5)",
        })
    }
}

/// The `frozen_count` least reliable positions (largest Bhattacharyya
/// parameter, lower index first on ties), 1-based and ascending.
pub fn construct_frozen_set(
    design_e: f64,
    block_len: usize,
    frozen_count: usize,
) -> Result<Vec<usize>> {
    construct_frozen_set_with(
        Construction::Bhattacharyya,
        design_e,
        block_len,
        frozen_count,
    )
}

/// Bit-channel error probabilities from the degrading-merge construction.
pub fn bit_channel_error_probabilities(
    design_e: f64,
    block_len: usize,
    max_outputs: usize,
) -> Result<Vec<f64>> {
    check_design_e(design_e)?;
    let log_len = log2_exact(block_len)?;
    Ok(tal_vardy::bit_channel_error_probabilities(
        design_e,
        log_len,
        max_outputs,
    ))
}

/// Like [`construct_frozen_set`], with the reliability measure chosen by
/// `construction`. Larger score means less reliable; ties freeze the lower
/// index first.
pub fn construct_frozen_set_with(
    construction: Construction,
    design_e: f64,
    block_len: usize,
    frozen_count: usize,
) -> Result<Vec<usize>> {
    if frozen_count > block_len {
        return Err(Error::FrozenSet(format!(
            "F = {frozen_count} exceeds N = {block_len}"
        )));
    }
    let score = match construction {
        Construction::Bhattacharyya => bhattacharyya_parameters(design_e, block_len)?,
        Construction::TalVardy { max_outputs } => {
            bit_channel_error_probabilities(design_e, block_len, max_outputs)?
        }
    };
    let mut order: Vec<usize> = (0..block_len).collect();
    order.sort_by(|&a, &b| score[b].total_cmp(&score[a]).then(a.cmp(&b)));
    let mut frozen: Vec<usize> = order[..frozen_count].iter().map(|i| i + 1).collect();
    frozen.sort_unstable();
    Ok(frozen)
}
