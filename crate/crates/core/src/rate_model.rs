//! Closed-form key rates and the rate-comparison sweep.
//!
//! All rate functions return the raw formula value, which may be negative
//! at high error rates. Clamping is left to whoever plots the numbers.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Default information-reconciliation efficiency for the BB84-style rates.
pub const DEFAULT_F_EC: f64 = 1.1;

/// Parameter-estimation sample budget, in bits, used to derive beta.
pub const DEFAULT_PE_BUDGET: f64 = 5000.0;

/// Binary Shannon entropy in bits. `H(0) = H(1) = 0` exactly.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            range: "[0, 1]",
        });
    }
    Ok(entropy(x))
}

pub(crate) fn entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// `s (1 - H(e) - f H(e))`: asymptotic round key rate.
pub fn rate_asymptotic(s: f64, e: f64, f_ec: f64) -> f64 {
    rate_finite(s, e, f_ec, 0.0)
}

/// `s (1 - H(e) - f H(e) - beta)`: finite-size round key rate, with `beta`
/// the fraction of qubits sacrificed for parameter estimation.
pub fn rate_finite(s: f64, e: f64, f_ec: f64, beta: f64) -> f64 {
    let h = entropy(e);
    s * (1.0 - h - f_ec * h - beta)
}

/// Per-round rate of the polar-code rounds, `1 - H(e) - 2 H(E)`.
///
/// One `H(E)` is the frozen block discarded after decoding, the other the
/// key part reserved to encrypt the next round's frozen bits. Returns `None`
/// (the protocol does not operate) when `e > E`.
pub fn rate_polar_round(e: f64, design_e: f64) -> Option<f64> {
    if e > design_e {
        return None;
    }
    Some(1.0 - entropy(e) - 2.0 * entropy(design_e))
}

/// Average rate over `rounds` rounds when the first (initialization) round's
/// key, of rate `r1`, is consumed: `(-R1 + (M - 1) R') / M`.
pub fn rate_polar_process(e: f64, design_e: f64, rounds: u32, r1: f64) -> Option<f64> {
    let r_round = rate_polar_round(e, design_e)?;
    let m = f64::from(rounds);
    Some((-r1 + (m - 1.0) * r_round) / m)
}

/// Round-wise BB84: sifting coefficient 1/2.
pub fn rate_bb84(e: f64, f_ec: f64, beta: f64) -> f64 {
    rate_finite(0.5, e, f_ec, beta)
}

/// Efficient BB84 with Hadamard-basis probability `p`:
/// `beta = p^2`, `s = 1 - 2p(1-p)`.
pub fn rate_ebb84(e: f64, f_ec: f64, p: f64) -> f64 {
    rate_finite(ebb84_sifting(p), e, f_ec, p * p)
}

pub fn ebb84_sifting(p: f64) -> f64 {
    1.0 - 2.0 * p * (1.0 - p)
}

/// How beta is derived from the parameter-estimation budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetaMode {
    /// `budget / N` rounded to one significant digit (0.08 at 2^16, 0.04 at 2^17).
    #[default]
    PaperRounded,
    /// `budget / N` unrounded.
    Exact,
}

impl std::str::FromStr for BetaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-rounded" | "paper" => Ok(BetaMode::PaperRounded),
            "exact" => Ok(BetaMode::Exact),
            other => Err(Error::Parse(format!(
                "unknown beta mode {other:?} (expected `paper-rounded` or `exact`)"
            ))),
        }
    }
}

impl std::fmt::Display for BetaMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BetaMode::PaperRounded => "paper-rounded",
            BetaMode::Exact => "exact",
        })
    }
}

pub fn beta_for(block_len: usize, pe_budget: f64, mode: BetaMode) -> f64 {
    let beta = pe_budget / block_len as f64;
    match mode {
        BetaMode::Exact => beta,
        BetaMode::PaperRounded => round_to_sig_digit(beta),
    }
}

fn round_to_sig_digit(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(x.abs().log10().floor() as i32);
    (x / scale).round() * scale
}

/// Inputs to [`sweep`].
#[derive(Debug, Clone)]
pub struct SweepParams {
    pub e_grid: Vec<f64>,
    pub design_es: Vec<f64>,
    pub block_len: usize,
    pub f_ec: f64,
    pub pe_budget: f64,
    pub beta_mode: BetaMode,
}

impl SweepParams {
    pub fn new(block_len: usize, e_grid: Vec<f64>, design_es: Vec<f64>) -> Self {
        SweepParams {
            e_grid,
            design_es,
            block_len,
            f_ec: DEFAULT_F_EC,
            pe_budget: DEFAULT_PE_BUDGET,
            beta_mode: BetaMode::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub e: f64,
    pub r_bb84: f64,
    pub r_ebb84: f64,
    /// One entry per design threshold, `None` where the protocol does not operate.
    pub r_polar: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateCurve {
    pub block_len: usize,
    pub beta: f64,
    pub p: f64,
    pub f_ec: f64,
    pub beta_mode: BetaMode,
    pub design_es: Vec<f64>,
    pub rows: Vec<RateRow>,
}

/// Evenly spaced grid of `steps` points from `lo` to `hi` inclusive.
/// A single step yields just `lo`.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

/// Tabulates BB84, efficient BB84 and polar-code process rates over the
/// error-rate grid. The polar column uses the many-rounds limit.
pub fn sweep(params: &SweepParams) -> Result<RateCurve> {
    if params.e_grid.is_empty() {
        return Err(Error::Config {
            field: "e_grid",
            reason: "grid is empty".into(),
        });
    }
    for w in params.e_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Config {
                field: "e_grid",
                reason: "grid must be strictly ascending".into(),
            });
        }
    }
    for &e in &params.e_grid {
        if !(0.0..=0.5).contains(&e) {
            return Err(Error::Domain {
                name: "e",
                value: e,
                range: "[0, 0.5]",
            });
        }
    }
    for &design_e in &params.design_es {
        if !(design_e > 0.0 && design_e < 0.5) {
            return Err(Error::Domain {
                name: "E",
                value: design_e,
                range: "(0, 0.5)",
            });
        }
    }
    if !params.block_len.is_power_of_two() {
        return Err(Error::BlockLength(params.block_len));
    }
    let beta = beta_for(params.block_len, params.pe_budget, params.beta_mode);
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Domain {
            name: "beta",
            value: beta,
            range: "(0, 1)",
        });
    }
    let p = beta.sqrt();
    let rows = params
        .e_grid
        .iter()
        .map(|&e| RateRow {
            e,
            r_bb84: rate_bb84(e, params.f_ec, beta),
            r_ebb84: rate_ebb84(e, params.f_ec, p),
            r_polar: params
                .design_es
                .iter()
                .map(|&design_e| rate_polar_round(e, design_e))
                .collect(),
        })
        .collect();
    Ok(RateCurve {
        block_len: params.block_len,
        beta,
        p,
        f_ec: params.f_ec,
        beta_mode: params.beta_mode,
        design_es: params.design_es.clone(),
        rows,
    })
}

impl RateCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("e,r_bb84,r_ebb84");
        for design_e in &self.design_es {
            let _ = write!(out, ",r_polar_E{design_e}");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(
                out,
                "{},{},{}",
                format_sig6(row.e),
                format_sig6(row.r_bb84),
                format_sig6(row.r_ebb84)
            );
            for cell in &row.r_polar {
                out.push(',');
                if let Some(v) = cell {
                    out.push_str(&format_sig6(*v));
                }
            }
            out.push('\n');
        }
        out
    }

    /// One-line description of the derived constants.
    pub fn metadata(&self) -> String {
        format!(
            "N={} beta={} beta_mode={} p={} s_ebb84={} f_ec={}",
            self.block_len,
            format_sig6(self.beta),
            self.beta_mode,
            format_sig6(self.p),
            format_sig6(ebb84_sifting(self.p)),
            format_sig6(self.f_ec)
        )
    }
}

/// Formats with six significant digits in the style of C's `%g`.
pub fn format_sig6(x: f64) -> String {
    const DIGITS: i32 = 6;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
