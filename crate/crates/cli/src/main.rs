//! `semecs`: key generation, signing, verification and benchmarks.
//!
//! Exit status: 0 success, 1 signature rejected, 2 usage error or malformed
//! input, 3 state, I/O or key-exhaustion failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "semecs", version, about = "Multiple-time signatures with a group-operation-free signer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Schnorr,
    Eta,
    Semecs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchScheme {
    All,
    Schnorr,
    Eta,
    Semecs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    /// 24-bit Schnorr group. Tests and demonstrations only.
    Toy,
    /// ristretto255, 128-bit security.
    Prod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DigestArg {
    Blake2s,
    Sha256,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair, writing <prefix>.sk and <prefix>.pk
    Keygen {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long, value_enum, default_value = "prod")]
        group: GroupArg,
        /// Number of signatures the key supports (ETA and SEMECS only)
        #[arg(short = 'K', value_parser = clap::value_parser!(u64).range(1..=1 << 32))]
        capacity: Option<u64>,
        /// Defaults to $SEMECS_HOME/<scheme>-<group>, or ./<scheme>-<group> when unset
        #[arg(long)]
        out_prefix: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "blake2s")]
        digest: DigestArg,
        /// Replace existing key files
        #[arg(long)]
        force: bool,
    },
    /// Sign a message, advancing the signer state on disk first
    Sign {
        #[arg(long)]
        sk: PathBuf,
        /// Message file, or - for standard input
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify an envelope and write the (recovered) message to standard output
    Verify {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        env: PathBuf,
        /// Locate the token by binary search instead of trusting the index (SEMECS)
        #[arg(long)]
        no_index: bool,
    },
    /// Show metadata of a key or state file; secrets are never printed
    Inspect { file: PathBuf },
    /// Time sign and verify, with exact group-operation counts
    Bench {
        #[arg(long, value_enum, default_value = "all")]
        scheme: BenchScheme,
        #[arg(long, value_enum, default_value = "prod")]
        group: GroupArg,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        iters: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Fill the energy columns from measured time with this profile
        #[arg(long)]
        profile: Option<String>,
    },
    /// Apply an energy profile to a bench CSV or to a cycle and bit count
    EnergyReport {
        #[arg(long, default_value = "avr-atmega2560")]
        profile: String,
        #[arg(long, conflicts_with_all = ["cycles", "bits"])]
        from: Option<PathBuf>,
        #[arg(long)]
        cycles: Option<u64>,
        #[arg(long)]
        bits: Option<u64>,
        /// Write the report here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failed command and the exit status it maps to.
#[derive(Debug)]
pub enum Failure {
    Rejected(String),
    Usage(String),
    State(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Rejected(_) => 1,
            Failure::Usage(_) => 2,
            Failure::State(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Rejected(m) | Failure::Usage(m) | Failure::State(m) => m,
        }
    }
}

impl From<semecs::Error> for Failure {
    fn from(e: semecs::Error) -> Self {
        use semecs::Error::*;
        match e {
            KeyExhausted { .. }
            | StaleState { .. }
            | StatePersistFailure(_)
            | CorruptState(_)
            | IoFailure(_)
            | RngFailure(_) => Failure::State(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::State(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Keygen { scheme, group, capacity, out_prefix, digest, force } => {
            commands::keygen(scheme, group, capacity, out_prefix, digest, force)
        }
        Command::Sign { sk, input, out } => commands::sign(&sk, &input, &out),
        Command::Verify { pk, env, no_index } => commands::verify(&pk, &env, no_index),
        Command::Inspect { file } => commands::inspect(&file),
        Command::Bench { scheme, group, iters, csv, json, profile } => {
            commands::bench(scheme, group, iters, csv.as_deref(), json.as_deref(), profile.as_deref())
        }
        Command::EnergyReport { profile, from, cycles, bits, out } => {
            commands::energy_report(&profile, from.as_deref(), cycles, bits, out.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("semecs: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
