//! `polar-qkd` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 configuration error,
//! 3 protocol abort, 4 decode-failure budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polar_qkd::polar_codec::fer::{fer_csv, measure_fer};
use polar_qkd::polar_codec::{systematic_decode, systematic_encode, PolarCode};
use polar_qkd::qkd_sim::{bsc_transmit, run_process, ProcessConfig};
use polar_qkd::rate_model::{
    linear_grid, sweep, BetaMode, SweepParams, DEFAULT_F_EC, DEFAULT_PE_BUDGET,
};
use polar_qkd::rng::stream_rng;
use polar_qkd::{golden, BitBlock, Error};

/// Default directory for files written without an explicit `--out`.
const OUT_DIR_ENV: &str = "POLAR_QKD_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "polar-qkd",
    version,
    about = "Polar-code QKD rates, simulation and codec tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Key-rate sweep of BB84, efficient BB84 and polar-code QKD as CSV.
    Rates(RatesArgs),
    /// Run the multi-round protocol from a TOML config.
    Simulate(SimulateArgs),
    /// Encode, transmit and decode one block.
    CodecRoundtrip(RoundtripArgs),
    /// Monte Carlo frame error rates of the SC decoder as CSV.
    CodecFer(FerArgs),
    /// Regenerate the golden regression files.
    Fixtures(FixturesArgs),
}

#[derive(Args)]
struct RatesArgs {
    /// Block length exponent, N = 2^n.
    #[arg(long, default_value_t = 16)]
    n_exp: u32,
    /// Design error rates, one r_polar column each.
    #[arg(long = "E", value_delimiter = ',', default_values_t = [0.04, 0.03, 0.02, 0.01])]
    design_es: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    e_min: f64,
    #[arg(long, default_value_t = 0.12)]
    e_max: f64,
    #[arg(long, default_value_t = 121)]
    steps: usize,
    #[arg(long, default_value_t = DEFAULT_F_EC)]
    f_ec: f64,
    #[arg(long, default_value_t = DEFAULT_PE_BUDGET)]
    pe_budget: f64,
    /// `paper-rounded` or `exact`.
    #[arg(long, default_value = "paper-rounded")]
    beta_mode: BetaMode,
    /// Output file; stdout if omitted and no default directory is set.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    config: PathBuf,
    /// Overrides `master_seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Write per-round public announcements to this file.
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// Exit with code 4 when more rounds than this fail to decode.
    #[arg(long)]
    max_decode_failures: Option<usize>,
}

#[derive(Args)]
struct RoundtripArgs {
    #[arg(long, default_value_t = 3)]
    n_exp: u32,
    /// Design error rate for the frozen-set construction.
    #[arg(long = "E", default_value_t = 0.11)]
    design_e: f64,
    /// Explicit 1-based frozen set, overriding `--E`.
    #[arg(long, value_delimiter = ',')]
    frozen: Option<Vec<usize>>,
    /// Data bits such as `1011`; random if omitted.
    #[arg(long)]
    data: Option<String>,
    /// Channel crossover probability.
    #[arg(long, default_value_t = 0.0)]
    e: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct FerArgs {
    /// Block lengths.
    #[arg(long, value_delimiter = ',', default_values_t = [256, 1024, 4096])]
    n_list: Vec<usize>,
    /// Channel error rates.
    #[arg(long, value_delimiter = ',', default_values_t = [0.005, 0.01, 0.02])]
    e_list: Vec<f64>,
    #[arg(long = "E", default_value_t = 0.04)]
    design_e: f64,
    #[arg(long, default_value_t = 2000)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FixturesArgs {
    /// Target directory; defaults to the output directory variable or `.`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(path: &Path, err: std::io::Error) -> Self {
        Failure {
            code: 1,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Config { .. }
            | Error::Parse(_)
            | Error::Domain { .. }
            | Error::InsufficientKey { .. } => 2,
            Error::FrozenSet(_)
            | Error::BlockLength(_)
            | Error::NonBinary { .. }
            | Error::LengthMismatch { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Rates(args) => rates(args),
        Command::Simulate(args) => simulate(args),
        Command::CodecRoundtrip(args) => roundtrip(args),
        Command::CodecFer(args) => codec_fer(args),
        Command::Fixtures(args) => fixtures(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn default_dir() -> Option<PathBuf> {
    std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)
}

/// Writes to `out`, else `<default dir>/<name>`, else stdout.
fn emit(out: Option<PathBuf>, name: &str, contents: &str) -> CmdResult {
    let path = out.or_else(|| default_dir().map(|d| d.join(name)));
    match path {
        Some(path) => {
            fs::write(&path, contents).map_err(|e| Failure::io(&path, e))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{contents}"),
    }
    Ok(())
}

fn rates(args: RatesArgs) -> CmdResult {
    if args.n_exp == 0 || args.n_exp > 40 {
        return Err(Failure {
            code: 2,
            message: format!("--n-exp {} is outside 1..=40", args.n_exp),
        });
    }
    if args.steps == 0 {
        return Err(Failure {
            code: 2,
            message: "--steps must be at least 1".into(),
        });
    }
    let params = SweepParams {
        e_grid: linear_grid(args.e_min, args.e_max, args.steps),
        design_es: args.design_es,
        block_len: 1usize << args.n_exp,
        f_ec: args.f_ec,
        pe_budget: args.pe_budget,
        beta_mode: args.beta_mode,
    };
    let curve = sweep(&params)?;
    eprintln!("{}", curve.metadata());
    emit(
        args.out,
        &format!("rates_n{}.csv", args.n_exp),
        &curve.to_csv(),
    )
}

fn simulate(args: SimulateArgs) -> CmdResult {
    let text = fs::read_to_string(&args.config).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", args.config.display()),
    })?;
    let mut config = ProcessConfig::from_toml(&text)?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    let report = run_process(&config)?;
    print!("{}", report.render());
    if let Some(path) = &args.transcript {
        fs::write(path, report.render_transcripts()).map_err(|e| Failure::io(path, e))?;
    }
    if let Some(round) = report.aborted_at {
        return Err(Failure {
            code: 3,
            message: format!("protocol aborted in round {round}: estimated QBER above E"),
        });
    }
    if let Some(budget) = args.max_decode_failures {
        if report.decode_failures > budget {
            return Err(Failure {
                code: 4,
                message: format!(
                    "{} decode failures exceed the budget of {budget}",
                    report.decode_failures
                ),
            });
        }
    }
    Ok(())
}

fn roundtrip(args: RoundtripArgs) -> CmdResult {
    let code = match &args.frozen {
        Some(frozen) => PolarCode::from_frozen_set(args.n_exp, frozen)?,
        None => PolarCode::design(args.design_e, 1usize << args.n_exp)?,
    };
    let data = match &args.data {
        Some(bits) => BitBlock::parse(bits)?,
        None => BitBlock::random(code.data_count(), &mut stream_rng(args.seed, 0)),
    };
    let codeword = systematic_encode(&data, &code)?;
    let received = bsc_transmit(&codeword, args.e, &mut stream_rng(args.seed, 1))?;
    // the decoder needs a non-degenerate crossover even on a clean channel
    let decoder_e = if args.e > 0.0 {
        args.e
    } else {
        code.design_e().unwrap_or(0.01)
    };
    let decoded = systematic_decode(&received, decoder_e, &code)?;
    print!("{}", code.to_descriptor());
    println!("data = {data}");
    println!("codeword = {codeword}");
    println!("received = {received}");
    println!("decoded = {decoded}");
    let ok = decoded == data;
    println!("ok = {ok}");
    if ok {
        Ok(())
    } else {
        Err(Failure {
            code: 4,
            message: "decoded data differs from the input".into(),
        })
    }
}

fn codec_fer(args: FerArgs) -> CmdResult {
    let mut cells = Vec::new();
    for &n in &args.n_list {
        for &e in &args.e_list {
            cells.push(measure_fer(n, e, args.design_e, args.trials, args.seed)?);
        }
    }
    emit(args.out, "codec_fer.csv", &fer_csv(&cells))
}

fn fixtures(args: FixturesArgs) -> CmdResult {
    let dir = args
        .out
        .or_else(default_dir)
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| Failure::io(&dir, e))?;
    for (name, contents) in golden::all()? {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| Failure::io(&path, e))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
