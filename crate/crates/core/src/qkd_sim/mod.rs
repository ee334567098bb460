//! Protocol simulator: a BB84 initialization round followed by chained
//! polar-code rounds over a classical flip channel.

mod bb84;
mod channel;
mod config;
mod polar_round;
mod process;
mod streams;
mod toeplitz;

pub use bb84::{run_bb84_round, Bb84Outcome};
pub use channel::{
    apply_permutation, bsc_transmit, intercept_resend, invert_permutation, random_bases,
    random_permutation, sample_without_replacement, Basis,
};
pub use config::{default_pe_sample, Eavesdropper, PeMode, ProcessConfig};
pub use polar_round::{
    run_polar_round, run_polar_round_alt_pe, xor_frozen, RoundResult, RoundTranscript, SharedKey,
};
pub use process::{run_process, ProcessReport, SUMMARY_HEADER};
pub use toeplitz::{toeplitz_entry, toeplitz_pa};
