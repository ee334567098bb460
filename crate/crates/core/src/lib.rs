//! Systematic polar coding and a multi-round QKD protocol process built on it.
//!
//! The crate is split into four areas:
//!
//! * [`bits`]: the [`BitBlock`] carrier used for source words, codewords and keys.
//! * [`polar_codec`]: frozen-set sizing and construction, the polar transform,
//!   systematic encoding and successive-cancellation decoding.
//! * [`rate_model`]: closed-form key rates for the polar-code process, BB84 and
//!   efficient BB84, plus sweep tables over the error rate.
//! * [`qkd_sim`]: Alice/Bob simulation of the round-chained protocol over a
//!   bit-flip channel, with parameter estimation and Toeplitz privacy
//!   amplification.
//!
//! [`golden`] renders the seeded reference outputs kept under `tests/fixtures`.

pub mod bits;
pub mod error;
pub mod golden;
pub mod polar_codec;
pub mod qkd_sim;
pub mod rate_model;
pub mod rng;

pub use bits::BitBlock;
pub use error::{Error, Result};
