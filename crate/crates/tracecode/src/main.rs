//! Command-line surface: build codec bundles, encode/decode, simulate the
//! channel, run seeded experiment sweeps, and check synchronization
//! strings.
//!
//! Exit codes: 0 success, 1 negative result (decode failure or a sync
//! string failing verification), 2 usage/config/build errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tracecode::error::{Error, Result};
use tracecode::experiment::{
    build_from_config, run_experiment, write_csv, BuiltCodec, ExperimentConfig,
};
use tracecode::syncstr::{verify_sync, SyncString};
use tracecode::textio::{decode_traces, encode_message, resolve_q, simulate_traces};

#[derive(Parser)]
#[command(
    name = "tracecode",
    version,
    about = "Coded trace reconstruction over the binary deletion channel",
    after_help = "Exit codes: 0 success, 1 decode/verification failure, 2 usage error."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the codec for a config's first grid point; write a JSON bundle.
    BuildCodec {
        /// Experiment config, TOML or JSON.
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a message with a codec bundle.
    Encode {
        /// Codec bundle JSON from build-codec.
        #[arg(long)]
        codec: PathBuf,
        /// Comma-separated symbols, or a 01-string for avgcase.
        #[arg(long)]
        message: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode traces (one per line) with a codec bundle.
    Decode {
        #[arg(long)]
        codec: PathBuf,
        /// File of traces, one per line (01-strings, or comma-separated
        /// symbols for bigalpha; blank lines are empty traces).
        #[arg(long)]
        traces: PathBuf,
        /// Channel deletion probability; defaults to the codec's own.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a message and emit simulated channel traces, one per line.
    Simulate {
        #[arg(long)]
        codec: PathBuf,
        #[arg(long)]
        message: String,
        /// Number of traces.
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Channel deletion probability; defaults to the codec's own.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo sweep from a config file and emit CSV.
    Experiment {
        /// Experiment config, TOML or JSON.
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report real wall-clock times instead of the deterministic 0.000.
        #[arg(long)]
        timing: bool,
    },
    /// Verify a synchronization string JSON file ({eta, alphabet_size,
    /// symbols}); exits 0 when it passes.
    VerifySync {
        #[arg(long)]
        file: PathBuf,
    },
}

fn read_config(path: &PathBuf, seed: Option<u64>) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if seed.is_some() {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_codec(path: &PathBuf) -> Result<BuiltCodec> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn write_out(out: Option<PathBuf>, text: String) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::BuildCodec { config, seed, out } => {
            let cfg = read_config(&config, seed)?;
            let codec = build_from_config(&cfg)?;
            let mut text = serde_json::to_string_pretty(&codec)?;
            text.push('\n');
            write_out(out, text)
        }
        Cmd::Encode { codec, message, out } => {
            let codec = load_codec(&codec)?;
            let mut text = encode_message(&codec, &message)?;
            text.push('\n');
            write_out(out, text)
        }
        Cmd::Decode { codec, traces, q, out } => {
            let codec = load_codec(&codec)?;
            let q = resolve_q(&codec, q)?;
            let content = fs::read_to_string(&traces)?;
            let lines: Vec<&str> = content.lines().collect();
            let mut text = decode_traces(&codec, &lines, q)?;
            text.push('\n');
            write_out(out, text)
        }
        Cmd::Simulate { codec, message, t, q, seed, out } => {
            let codec = load_codec(&codec)?;
            let q = resolve_q(&codec, q)?;
            write_out(out, simulate_traces(&codec, &message, t, q, seed)?)
        }
        Cmd::Experiment { config, seed, out, timing } => {
            let cfg = read_config(&config, seed)?;
            let rows = run_experiment(&cfg)?;
            let mut buf = Vec::new();
            write_csv(&rows, timing, &mut buf)?;
            match out {
                Some(path) => fs::write(path, buf)?,
                None => print!("{}", String::from_utf8_lossy(&buf)),
            }
            Ok(())
        }
        Cmd::VerifySync { file } => {
            let s: SyncString = serde_json::from_str(&fs::read_to_string(&file)?)?;
            let check = verify_sync(&s.symbols, s.eta)?;
            match check.violation {
                None => {
                    println!(
                        "OK: {} symbols, eta {}, alphabet {}",
                        s.symbols.len(),
                        s.eta,
                        s.alphabet_size
                    );
                    Ok(())
                }
                Some((i, j, k)) => Err(Error::DecodeFailure(format!(
                    "synchronization violation at (i={i}, j={j}, k={k})"
                ))),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::DecodeFailure(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
