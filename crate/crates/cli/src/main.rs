use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::rngs::OsRng;

use ndnsec::sigcore::SchemeId;
use ndnsec_cli::bench::{self, BenchConfig, Operation};
use ndnsec_cli::keys::KeyFile;
use ndnsec_cli::sim;

#[derive(Parser)]
#[command(name = "ndnsec", version, about = "Signature benchmarks and NDN forwarding simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time keygen, sign and verify for each scheme and write a CSV table.
    Bench {
        /// Comma-separated schemes, or "all".
        #[arg(long, default_value = "all")]
        schemes: String,
        #[arg(long, default_value_t = bench::DEFAULT_ITERATIONS)]
        iterations: usize,
        #[arg(long, default_value_t = bench::DEFAULT_MSG_SIZE)]
        msg_size: usize,
        /// Comma-separated subset of keygen,sign,verify.
        #[arg(long, default_value = "keygen,sign,verify")]
        operations: String,
        #[arg(long, default_value_t = bench::DEFAULT_WARMUP)]
        warmup: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a scenario and write trace.jsonl, counters.csv and deliveries.jsonl.
    Sim {
        #[arg(long)]
        topology: PathBuf,
        /// Scenario file; when absent the schedule is read from the topology file.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a key pair and write it as a TOML key file.
    Keygen {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("ndnsec: {msg}");
    ExitCode::from(code)
}

fn cmd_bench(
    schemes: &str,
    operations: &str,
    config: BenchConfig,
    out: Option<PathBuf>,
) -> ExitCode {
    let schemes = match bench::parse_schemes(schemes) {
        Ok(s) => s,
        Err(e) => return fail(2, e),
    };
    let operations: Result<Vec<Operation>, _> = operations
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect();
    let operations = match operations {
        Ok(o) => o,
        Err(e) => return fail(2, e),
    };
    if !bench::pin_to_one_core() {
        eprintln!("ndnsec: could not pin to one core; timings may be noisier");
    }
    let rows = match bench::run(&BenchConfig { schemes, operations, ..config }) {
        Ok(r) => r,
        Err(e) => return fail(2, e),
    };
    let csv = bench::to_csv(&rows);
    let written = match &out {
        Some(path) => fs::write(path, csv),
        None => std::io::stdout().write_all(csv.as_bytes()),
    };
    if let Err(e) = written {
        return fail(1, e);
    }
    for op in [Operation::Keygen, Operation::Sign, Operation::Verify] {
        let order = bench::ranking(&rows, op);
        if !order.is_empty() {
            let names: Vec<&str> = order.iter().map(|s| s.name()).collect();
            eprintln!("{op} slowest to fastest: {}", names.join(" > "));
        }
    }
    ExitCode::SUCCESS
}

fn cmd_keygen(scheme: &str, out: PathBuf) -> ExitCode {
    let scheme: SchemeId = match scheme.parse() {
        Ok(s) => s,
        Err(e) => return fail(2, e),
    };
    let kf = match KeyFile::generate(scheme, &mut OsRng) {
        Ok(k) => k,
        Err(e) => return fail(1, e),
    };
    match fs::write(&out, kf.to_toml()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(1, format_args!("{}: {e}", out.display())),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Bench {
            schemes,
            iterations,
            msg_size,
            operations,
            warmup,
            seed,
            out,
        } => {
            let config = BenchConfig {
                iterations,
                msg_size,
                warmup,
                seed,
                ..BenchConfig::default()
            };
            cmd_bench(&schemes, &operations, config, out)
        }
        Command::Sim { topology, scenario, out } => match sim::run_files(&topology, scenario.as_deref(), &out) {
            Ok(_) => ExitCode::SUCCESS,
            Err(e) => fail(e.exit_code(), e),
        },
        Command::Keygen { scheme, out } => cmd_keygen(&scheme, out),
    }
}
