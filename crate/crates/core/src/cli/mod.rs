//! `chaospend` command line.
//!
//! Exit codes: 0 success, 1 selftest failure, 2 usage or input error,
//! 3 generator failure at run time (degeneracy under `--reseed halt`,
//! reference-layer overflow).

mod analyze;
mod decode;
mod gen;
mod manifest;
mod tools;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::fixnum::{Fix32, Layer};
use crate::prng::{ReseedPolicy, Seed64};
use crate::sensorio::HmcOrder;

pub use manifest::RunManifest;

/// Environment variable naming the default arithmetic layer.
pub const LAYER_ENV: &str = "CHAOSPEND_DEFAULT_LAYER";

#[derive(Debug)]
pub enum CliError {
    Selftest(String),
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Selftest(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Selftest(m) | CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "chaospend", version, about = "Double-pendulum PRNG emulator and analysis tools")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a stream of 10-digit numbers and a replay manifest.
    Gen(GenArgs),
    /// Histogram, digit chi-square, lag correlation, series export and
    /// optional cycle search for a generated stream.
    Analyze(AnalyzeArgs),
    /// Run the built-in verification suite.
    Selftest(SelftestArgs),
    /// Decode sensor frames, seed files and sensor logs.
    Decode(DecodeArgs),
    /// Regenerate the hardware-vs-reference quirk census.
    Census(CensusArgs),
    /// Dump a pendulum trajectory as CSV.
    Trace(TraceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// One zero-padded number per line.
    #[default]
    Text,
    /// `index,value` with a header row.
    Csv,
}

#[derive(Debug, Args)]
#[group(id = "seed", required = true, multiple = false)]
struct SeedSource {
    /// Seed as 16 hex digits.
    #[arg(long, value_name = "HEX")]
    seed_hex: Option<Seed64>,
    /// Seed file: 8 raw bytes in link order or 16 hex characters.
    #[arg(long, value_name = "FILE")]
    seed_file: Option<PathBuf>,
    /// Sensor log CSV; the first record is packed into the seed.
    #[arg(long, value_name = "FILE")]
    sensor_log: Option<PathBuf>,
    /// Draw the seed from the operating system.
    #[arg(long)]
    os_entropy: bool,
    /// Replay the run recorded in a manifest.
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenConfigArgs {
    /// Arithmetic layer [default: hw, or $CHAOSPEND_DEFAULT_LAYER].
    #[arg(long, conflicts_with = "manifest")]
    layer: Option<Layer>,
    /// Integration step, +0.01 to +0.50.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "manifest")]
    dt: Option<Fix32>,
    /// Steps discarded before the first output.
    #[arg(long, conflicts_with = "manifest")]
    warmup: Option<u64>,
    /// Pendulum steps per emitted number.
    #[arg(long, conflicts_with = "manifest")]
    steps_per_output: Option<u64>,
    /// Reaction to a degenerate denominator: halt or perturb-counter.
    #[arg(long, conflicts_with = "manifest")]
    reseed: Option<ReseedPolicy>,
}

#[derive(Debug, Args)]
pub(crate) struct GenArgs {
    #[command(flatten)]
    seed: SeedSource,
    #[command(flatten)]
    config: GenConfigArgs,
    /// Number of outputs.
    #[arg(short = 'n', long = "count", required_unless_present = "manifest", conflicts_with = "manifest")]
    count: Option<u64>,
    /// Output file [default: stdout].
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "manifest")]
    format: Option<Format>,
    /// Manifest path [default: <out>.manifest.json, or stderr when writing to stdout].
    #[arg(long, value_name = "FILE")]
    manifest_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub(crate) struct AnalyzeArgs {
    /// Stream written by `gen` (text or CSV).
    input: PathBuf,
    /// Histogram bucket count.
    #[arg(long, default_value_t = crate::stats::DEFAULT_BUCKETS)]
    histogram: usize,
    /// Directory for the reports [default: next to the input].
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Number of shards the stream is split into; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    shards: usize,
    /// Worker threads [default: one per core].
    #[arg(long)]
    threads: Option<usize>,
    /// Values written to the series export.
    #[arg(long, default_value_t = 1000)]
    series_first: usize,
    /// Lags for the correlation report.
    #[arg(long = "lag", default_values_t = vec![1usize])]
    lags: Vec<usize>,
    /// Replay the generator from the manifest and search for a repeated state.
    #[arg(long)]
    cycle: bool,
    /// States examined by the cycle search [default: the manifest's count].
    #[arg(long, requires = "cycle")]
    max_steps: Option<u64>,
    /// Manifest for --cycle [default: <input>.manifest.json].
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub(crate) struct SelftestArgs {
    /// Reduced sweep (10^4 pairs per op).
    #[arg(long)]
    quick: bool,
    /// Full census CSV to compare line by line.
    #[arg(long, value_name = "FILE")]
    census: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(id = "input", required = true, multiple = false)]
struct DecodeInput {
    /// Six-byte magnetometer read as hex.
    #[arg(long, value_name = "HEX")]
    hmc: Option<String>,
    /// Seed file (8 raw bytes or 16 hex characters).
    #[arg(long, value_name = "FILE")]
    seed_file: Option<PathBuf>,
    /// Sensor log CSV.
    #[arg(long, value_name = "FILE")]
    sensor_log: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub(crate) struct DecodeArgs {
    #[command(flatten)]
    input: DecodeInput,
    /// Axis order of the magnetometer data registers.
    #[arg(long, default_value_t = HmcOrder::Xzy)]
    hmc_order: HmcOrder,
    /// Print one packed seed per sensor-log record.
    #[arg(long, requires = "sensor_log")]
    pack: bool,
}

#[derive(Debug, Args)]
pub(crate) struct CensusArgs {
    /// Write the full census CSV here.
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
    /// Write the compact digest here (`-` for stdout).
    #[arg(long, value_name = "FILE")]
    digest: Option<PathBuf>,
    /// Largest integer part swept.
    #[arg(long, default_value_t = crate::fixnum::census::DEFAULT_MAX_INT)]
    max_int: u8,
}

#[derive(Debug, Args)]
#[group(id = "trace_seed", required = true, multiple = false)]
struct TraceSeed {
    #[arg(long, value_name = "HEX")]
    seed_hex: Option<Seed64>,
    #[arg(long, value_name = "FILE")]
    seed_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub(crate) struct TraceArgs {
    #[command(flatten)]
    seed: TraceSeed,
    /// Steps to take; the file holds steps + 1 rows.
    #[arg(long, default_value_t = 1000)]
    steps: u64,
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
    #[arg(long)]
    layer: Option<Layer>,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<Fix32>,
}

/// Layer from the flag, else the environment, else the hardware layer.
pub(crate) fn resolve_layer(flag: Option<Layer>) -> Result<Layer, CliError> {
    if let Some(l) = flag {
        return Ok(l);
    }
    match std::env::var(LAYER_ENV) {
        Ok(v) if !v.is_empty() => v.parse().map_err(|_| usage(format!("{LAYER_ENV}={v:?} is not hw or ref"))),
        _ => Ok(Layer::default()),
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen::run(a),
        Command::Analyze(a) => analyze::run(a),
        Command::Selftest(a) => tools::selftest(a),
        Command::Decode(a) => decode::run(a),
        Command::Census(a) => tools::census(a),
        Command::Trace(a) => tools::trace(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("chaospend: {}", e.message());
            e.exit_code()
        }
    }
}
