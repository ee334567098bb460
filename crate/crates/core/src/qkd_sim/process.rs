//! The multi-round process: one BB84 round followed by `M − 1` chained polar
//! rounds.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::polar_codec::PolarCode;
use crate::rate_model::{rate_bb84, rate_polar_process, rate_polar_round};

use super::bb84::{run_bb84_round, Bb84Outcome};
use super::config::{PeMode, ProcessConfig};
use super::polar_round::{
    run_polar_round, run_polar_round_alt_pe, RoundResult, RoundTranscript, SharedKey,
};

pub const SUMMARY_HEADER: &str =
    "measured_rate,analytic_rate,rounds_completed,decode_failures,aborted";

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessReport {
    pub config: ProcessConfig,
    pub frozen_count: usize,
    pub round1: Bb84Outcome,
    /// Polar rounds in order, starting at round 2.
    pub rounds: Vec<RoundResult>,
    pub transcripts: Vec<RoundTranscript>,
    /// Secure bits of successfully decoded rounds ÷ (M·N).
    pub measured_rate: f64,
    /// Process rate with the true channel error (eavesdropper included).
    pub analytic_rate: Option<f64>,
    /// Same, with the parties' QBER estimates in place of the true error.
    pub analytic_rate_estimated: Option<f64>,
    pub key_mismatch_count: usize,
    pub decode_failures: usize,
    /// Round whose estimate exceeded `E`.
    pub aborted_at: Option<u32>,
}

impl ProcessReport {
    pub fn aborted(&self) -> bool {
        self.aborted_at.is_some()
    }

    pub fn secure_bits(&self) -> usize {
        self.rounds
            .iter()
            .filter(|r| !r.aborted && !r.decode_failed)
            .map(|r| r.key_secure.len())
            .sum()
    }

    /// Rounds that ran to the end, BB84 round included.
    pub fn rounds_completed(&self) -> usize {
        usize::from(!self.round1.aborted) + self.rounds.iter().filter(|r| !r.aborted).count()
    }

    /// Analytic process rate with decode-failed rounds contributing nothing.
    pub fn analytic_rate_excluding_failures(&self) -> Option<f64> {
        let c = &self.config;
        let e = c.effective_error();
        let r1 = rate_bb84(e, c.f_ec, c.beta());
        let r_round = rate_polar_round(e, c.design_e)?;
        let m = f64::from(c.rounds);
        let good = m - 1.0 - self.decode_failures as f64;
        Some((-r1 + good * r_round) / m)
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{:.6},{},{},{},{}",
            self.measured_rate,
            self.analytic_rate
                .map(|r| format!("{r:.6}"))
                .unwrap_or_default(),
            self.rounds_completed(),
            self.decode_failures,
            self.aborted()
        )
    }

    /// Human-readable round table followed by the summary header and line.
    pub fn render(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "N={} M={} E={:?} channel_e={:?} F={} pe_sample={} seed={}",
            c.block_len,
            c.rounds,
            c.design_e,
            c.channel_e,
            self.frozen_count,
            c.pe_sample,
            c.master_seed
        );
        let _ = writeln!(
            out,
            "{:>5} {:>5} {:>9} {:>9} {:>6} {:>8} {:>10} status",
            "round", "kind", "qber_est", "pe_sample", "leak", "key_next", "key_secure"
        );
        let r1 = &self.round1;
        let _ = writeln!(
            out,
            "{:>5} {:>5} {:>9.6} {:>9} {:>6} {:>8} {:>10} {}",
            1,
            "bb84",
            r1.qber_est,
            r1.sample,
            "-",
            r1.key.len(),
            0,
            if r1.aborted { "aborted" } else { "ok" }
        );
        for r in &self.rounds {
            let status = if r.aborted {
                "aborted"
            } else if r.decode_failed {
                "decode-failed"
            } else if !r.keys_agree() {
                "key-mismatch"
            } else {
                "ok"
            };
            let _ = writeln!(
                out,
                "{:>5} {:>5} {:>9.6} {:>9} {:>6} {:>8} {:>10} {}",
                r.round,
                "polar",
                r.qber_est,
                r.pe_sample,
                r.leak,
                r.key_next.len(),
                r.key_secure.len(),
                status
            );
        }
        let opt = |x: Option<f64>| x.map(|r| format!("{r:.6}")).unwrap_or_else(|| "n/a".into());
        let _ = writeln!(out, "secure_bits={}", self.secure_bits());
        let _ = writeln!(
            out,
            "analytic_rate_estimated={}",
            opt(self.analytic_rate_estimated)
        );
        let _ = writeln!(out, "key_mismatch_count={}", self.key_mismatch_count);
        let _ = writeln!(out, "{SUMMARY_HEADER}");
        let _ = writeln!(out, "{}", self.summary_line());
        out
    }

    /// Per-round public announcements, 1-based indices.
    pub fn render_transcripts(&self) -> String {
        let mut out = String::new();
        for t in &self.transcripts {
            let _ = writeln!(out, "[round {}]", t.round);
            let _ = writeln!(out, "permutation = {}", join_one_based(&t.permutation));
            let bases: String = t.bases.iter().map(|b| b.symbol()).collect();
            let _ = writeln!(out, "bases = {bases}");
            let _ = writeln!(
                out,
                "encrypted_frozen_positions = {}",
                join_one_based(&t.encrypted_frozen_positions)
            );
            let pe: Vec<String> = t
                .pe_disclosure
                .iter()
                .map(|(i, b)| format!("{}:{b}", i + 1))
                .collect();
            let _ = writeln!(out, "pe_disclosure = {}", pe.join(" "));
            if let Some(frozen) = &t.announced_frozen {
                let _ = writeln!(out, "announced_frozen = {frozen}");
            }
            if let Some(bob) = &t.bob_bases {
                let s: String = bob.iter().map(|b| b.symbol()).collect();
                let _ = writeln!(out, "bob_bases = {s}");
            }
            let _ = writeln!(out, "toeplitz_seed = {}", t.toeplitz_seed);
            let _ = writeln!(out, "abort = {}", t.abort);
        }
        out
    }
}

fn join_one_based(indices: &[usize]) -> String {
    let parts: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
    parts.join(" ")
}

/// Runs the whole process. Decode failures are counted and the parties keep
/// their previous chained key. An estimate above `E` stops the process.
pub fn run_process(config: &ProcessConfig) -> Result<ProcessReport> {
    config.validate()?;
    let code = PolarCode::design_with(config.construction, config.design_e, config.block_len)?;
    let frozen_count = code.frozen_count();

    let round1 = run_bb84_round(config)?;
    let mut report = ProcessReport {
        config: config.clone(),
        frozen_count,
        round1,
        rounds: Vec::new(),
        transcripts: Vec::new(),
        measured_rate: 0.0,
        analytic_rate: None,
        analytic_rate_estimated: None,
        key_mismatch_count: 0,
        decode_failures: 0,
        aborted_at: None,
    };
    if report.round1.aborted {
        report.aborted_at = Some(1);
        return Ok(finish(report));
    }
    if report.round1.key.len() < frozen_count {
        return Err(Error::InsufficientKey {
            needed: frozen_count,
            available: report.round1.key.len(),
        });
    }

    let mut key = SharedKey::agreed(report.round1.key.slice(0, frozen_count));
    for round in 2..=config.rounds {
        let (result, transcript) = match config.pe_mode {
            PeMode::Disclosed => run_polar_round(&key, config, &code, round)?,
            PeMode::RandomBasis => run_polar_round_alt_pe(&key, config, &code, round)?,
        };
        let aborted = result.aborted;
        if aborted {
            report.aborted_at = Some(round);
        } else if result.decode_failed {
            report.decode_failures += 1;
        } else {
            if !result.keys_agree() {
                report.key_mismatch_count += 1;
            }
            key = result.next_key();
        }
        report.rounds.push(result);
        report.transcripts.push(transcript);
        if aborted {
            break;
        }
    }
    Ok(finish(report))
}

fn finish(mut report: ProcessReport) -> ProcessReport {
    let c = &report.config;
    let total = f64::from(c.rounds) * c.block_len as f64;
    report.measured_rate = report.secure_bits() as f64 / total;

    let e = c.effective_error();
    report.analytic_rate =
        rate_polar_process(e, c.design_e, c.rounds, rate_bb84(e, c.f_ec, c.beta()));

    let done: Vec<&RoundResult> = report.rounds.iter().filter(|r| !r.aborted).collect();
    if !report.round1.aborted && !done.is_empty() {
        let mean = done.iter().map(|r| r.qber_est).sum::<f64>() / done.len() as f64;
        let r1 = rate_bb84(report.round1.qber_est, c.f_ec, c.beta());
        report.analytic_rate_estimated = rate_polar_process(mean, c.design_e, c.rounds, r1);
    }
    report
}
