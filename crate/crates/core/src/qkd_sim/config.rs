use serde::Deserialize;

use crate::error::{Error, Result};
use crate::polar_codec::{compute_frozen_count, log2_exact, Construction};
use crate::rate_model::{entropy, DEFAULT_PE_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Eavesdropper {
    #[default]
    Off,
    /// Intercept-resend on this fraction of transmitted qubits.
    InterceptResend { fraction: f64 },
}

impl Eavesdropper {
    /// Extra flip probability Eve adds on top of channel noise.
    pub fn induced_error(self) -> f64 {
        match self {
            Eavesdropper::Off => 0.0,
            Eavesdropper::InterceptResend { fraction } => 0.25 * fraction,
        }
    }
}

/// How the polar rounds estimate the QBER.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PeMode {
    /// Bob measures everything in Alice's announced bases and discloses a
    /// sample of his (still encrypted) frozen bits.
    #[default]
    Disclosed,
    /// Bob measures frozen positions in his own random bases, keeps the
    /// matching ones for estimation, and takes Alice's announced frozen bits
    /// for decoding.
    RandomBasis,
}

/// Everything one protocol process run depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessConfig {
    pub block_len: usize,
    pub rounds: u32,
    pub design_e: f64,
    pub channel_e: f64,
    pub pe_sample: usize,
    pub f_ec: f64,
    pub master_seed: u64,
    pub eavesdropper: Eavesdropper,
    pub pe_mode: PeMode,
    /// BB84 batches the first round may run to reach `⌈H(E)N⌉` key bits.
    pub round1_max_batches: u32,
    /// Smallest surviving estimation sample accepted in [`PeMode::RandomBasis`].
    pub min_pe_sample: usize,
    pub construction: Construction,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "N")]
    block_len: usize,
    #[serde(rename = "M")]
    rounds: u32,
    #[serde(rename = "E")]
    design_e: f64,
    channel_e: f64,
    f_ec: f64,
    master_seed: u64,
    pe_sample: Option<usize>,
    eavesdropper: Option<RawEavesdropper>,
    pe_mode: Option<String>,
    round1_max_batches: Option<u32>,
    min_pe_sample: Option<usize>,
    construction: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEavesdropper {
    intercept_resend: f64,
}

impl ProcessConfig {
    /// A config with the default estimation sample, no eavesdropper and a
    /// single BB84 batch.
    pub fn new(
        block_len: usize,
        rounds: u32,
        design_e: f64,
        channel_e: f64,
        master_seed: u64,
    ) -> Result<Self> {
        let config = ProcessConfig {
            block_len,
            rounds,
            design_e,
            channel_e,
            pe_sample: default_pe_sample(design_e, block_len).unwrap_or(0),
            f_ec: crate::rate_model::DEFAULT_F_EC,
            master_seed,
            eavesdropper: Eavesdropper::Off,
            pe_mode: PeMode::Disclosed,
            round1_max_batches: 1,
            min_pe_sample: 1,
            construction: Construction::default(),
        };
        config.validate()?;
        Ok(config)
    }

    /// Parses the TOML config file format:
    ///
    /// ```toml
    /// N = 4096
    /// M = 8
    /// E = 0.04
    /// channel_e = 0.01
    /// f_ec = 1.1
    /// master_seed = 42
    /// # optional
    /// pe_sample = 993
    /// eavesdropper = { intercept_resend = 1.0 }
    /// pe_mode = "disclosed"        # or "random-basis"
    /// round1_max_batches = 1
    /// min_pe_sample = 1
    /// construction = "tal-vardy"   # or "bhattacharyya"
    /// ```
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let pe_sample = match raw.pe_sample {
            Some(s) => s,
            // validate() reports the offending N or E
            None => default_pe_sample(raw.design_e, raw.block_len).unwrap_or(0),
        };
        let pe_mode = match raw.pe_mode.as_deref() {
            None | Some("disclosed") => PeMode::Disclosed,
            Some("random-basis") => PeMode::RandomBasis,
            Some(other) => {
                return Err(Error::Config {
                    field: "pe_mode",
                    reason: format!("unknown mode {other:?}"),
                })
            }
        };
        let construction = match raw.construction.as_deref() {
            None => Construction::default(),
            Some(s) => s.parse().map_err(|e: Error| Error::Config {
                field: "construction",
                reason: e.to_string(),
            })?,
        };
        let config = ProcessConfig {
            block_len: raw.block_len,
            rounds: raw.rounds,
            design_e: raw.design_e,
            channel_e: raw.channel_e,
            pe_sample,
            f_ec: raw.f_ec,
            master_seed: raw.master_seed,
            eavesdropper: raw.eavesdropper.map_or(Eavesdropper::Off, |e| {
                Eavesdropper::InterceptResend {
                    fraction: e.intercept_resend,
                }
            }),
            pe_mode,
            round1_max_batches: raw.round1_max_batches.unwrap_or(1),
            min_pe_sample: raw.min_pe_sample.unwrap_or(1),
            construction,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn frozen_count(&self) -> usize {
        compute_frozen_count(self.design_e, self.block_len).unwrap_or(self.block_len)
    }

    /// Fraction of the block sacrificed for parameter estimation.
    pub fn beta(&self) -> f64 {
        self.pe_sample as f64 / self.block_len as f64
    }

    /// Combined flip probability of channel noise and the eavesdropper.
    pub fn effective_error(&self) -> f64 {
        let q = self.eavesdropper.induced_error();
        self.channel_e + q - 2.0 * self.channel_e * q
    }

    /// Expected first-round key length from the BB84 rate at the honest
    /// channel error rate.
    pub fn expected_round1_key(&self) -> f64 {
        let h = entropy(self.channel_e);
        0.5 * self.block_len as f64
            * (1.0 - self.beta() - (1.0 + self.f_ec) * h)
            * f64::from(self.round1_max_batches)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &'static str, reason: String| Err(Error::Config { field, reason });
        if self.block_len < 2 || log2_exact(self.block_len).is_err() {
            return bad(
                "N",
                format!("{} is not a power of two >= 2", self.block_len),
            );
        }
        if self.rounds < 2 {
            return bad("M", format!("{} rounds; at least 2 required", self.rounds));
        }
        if !(self.design_e > 0.0 && self.design_e < 0.5) {
            return bad("E", format!("{} is outside (0, 0.5)", self.design_e));
        }
        if !(0.0..0.5).contains(&self.channel_e) {
            return bad(
                "channel_e",
                format!("{} is outside [0, 0.5)", self.channel_e),
            );
        }
        if !(self.f_ec >= 1.0 && self.f_ec.is_finite()) {
            return bad("f_ec", format!("{} is below 1", self.f_ec));
        }
        if let Eavesdropper::InterceptResend { fraction } = self.eavesdropper {
            if !(0.0..=1.0).contains(&fraction) {
                return bad(
                    "eavesdropper",
                    format!("fraction {fraction} is outside [0, 1]"),
                );
            }
        }
        if self.round1_max_batches == 0 {
            return bad("round1_max_batches", "must be at least 1".into());
        }
        let frozen = self.frozen_count();
        if self.pe_sample == 0 || self.pe_sample > frozen {
            return bad(
                "pe_sample",
                format!("{} is outside [1, F = {frozen}]", self.pe_sample),
            );
        }
        if 3 * frozen > self.block_len {
            return bad(
                "E",
                format!(
                    "3·⌈H(E)N⌉ = {} exceeds N; a polar round could not refill the chained key",
                    3 * frozen
                ),
            );
        }
        // A channel above threshold is expected to abort at estimation, so
        // the shortfall check only applies to runs that would proceed.
        if self.channel_e <= self.design_e && self.expected_round1_key() < frozen as f64 {
            return Err(Error::InsufficientKey {
                needed: frozen,
                available: self.expected_round1_key().max(0.0) as usize,
            });
        }
        Ok(())
    }
}

/// `min(⌈H(E)N⌉, 5000)`.
pub fn default_pe_sample(design_e: f64, block_len: usize) -> Result<usize> {
    let frozen = compute_frozen_count(design_e, block_len)?;
    Ok(frozen.min(DEFAULT_PE_BUDGET as usize))
}
