//! Monte Carlo frame-error-rate measurement over a BSC.
//!
//! Trial `t` of a cell draws all of its randomness from stream `t` of the
//! cell seed, so results do not depend on thread count, and cells that share
//! a seed see nested error patterns as `e` grows.

use std::fmt::Write as _;
use std::thread;

use rand::Rng;

use crate::bits::BitBlock;
use crate::error::{Error, Result};
use crate::rng::stream_rng;

use super::{systematic_decode, systematic_encode, PolarCode};

pub const FER_CSV_HEADER: &str = "N,e,E,trials,frame_errors,seed";

#[derive(Debug, Clone, PartialEq)]
pub struct FerCell {
    pub block_len: usize,
    pub channel_e: f64,
    pub design_e: f64,
    pub trials: u64,
    pub frame_errors: u64,
    pub seed: u64,
}

impl FerCell {
    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.trials as f64
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:?},{:?},{},{},{}",
            self.block_len,
            self.channel_e,
            self.design_e,
            self.trials,
            self.frame_errors,
            self.seed
        )
    }
}

/// Runs `trials` systematic encode / BSC / decode frames with a code
/// designed for `design_e`.
///
/// The decoder is fed LLRs for the true `channel_e`; on a noiseless channel
/// it uses `design_e` instead since any positive reliability decodes
/// correctly.
pub fn measure_fer(
    block_len: usize,
    channel_e: f64,
    design_e: f64,
    trials: u64,
    seed: u64,
) -> Result<FerCell> {
    if trials == 0 {
        return Err(Error::Config {
            field: "trials",
            reason: "must be positive".into(),
        });
    }
    if !(0.0..0.5).contains(&channel_e) {
        return Err(Error::Domain {
            name: "e",
            value: channel_e,
            range: "[0, 0.5)",
        });
    }
    let code = PolarCode::design(design_e, block_len)?;
    let decoder_e = if channel_e > 0.0 { channel_e } else { design_e };

    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(trials as usize);
    let per_worker = trials.div_ceil(workers as u64);
    let frame_errors = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                let code = &code;
                let range = (w * per_worker)..((w + 1) * per_worker).min(trials);
                scope.spawn(move || -> Result<u64> {
                    let mut errors = 0;
                    for trial in range {
                        if !run_frame(code, channel_e, decoder_e, seed, trial)? {
                            errors += 1;
                        }
                    }
                    Ok(errors)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("FER worker panicked"))
            .sum::<Result<u64>>()
    })?;

    Ok(FerCell {
        block_len,
        channel_e,
        design_e,
        trials,
        frame_errors,
        seed,
    })
}

/// Returns true when the frame decodes correctly.
fn run_frame(
    code: &PolarCode,
    channel_e: f64,
    decoder_e: f64,
    seed: u64,
    trial: u64,
) -> Result<bool> {
    let mut rng = stream_rng(seed, trial);
    let data = BitBlock::random(code.data_count(), &mut rng);
    let mut y = systematic_encode(&data, code)?;
    for i in 0..y.len() {
        if rng.gen::<f64>() < channel_e {
            y.flip(i);
        }
    }
    Ok(systematic_decode(&y, decoder_e, code)? == data)
}

pub fn fer_csv(cells: &[FerCell]) -> String {
    let mut out = String::from(FER_CSV_HEADER);
    out.push('\n');
    for cell in cells {
        let _ = writeln!(out, "{}", cell.csv_row());
    }
    out
}
