//! Running a simulation from config files and writing its outputs.

use std::fs;
use std::path::{Path, PathBuf};

use ndnsec::simnet::{self, SimError, Trace};

pub const TRACE_FILE: &str = "trace.jsonl";
pub const COUNTERS_FILE: &str = "counters.csv";
pub const DELIVERIES_FILE: &str = "deliveries.jsonl";

#[derive(Debug, thiserror::Error)]
pub enum SimCmdError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Sim(#[from] SimError),
}

impl SimCmdError {
    pub fn exit_code(&self) -> u8 {
        match self {
            SimCmdError::Io { .. } => 1,
            SimCmdError::Sim(SimError::TickLimitExceeded { .. }) => 3,
            SimCmdError::Sim(SimError::Config(_) | SimError::UnknownNode(_)) => 2,
            SimCmdError::Sim(SimError::Signing(_)) => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, SimCmdError> {
    fs::read_to_string(path).map_err(|source| SimCmdError::Io { path: path.to_owned(), source })
}

fn write(path: PathBuf, text: &str) -> Result<(), SimCmdError> {
    fs::write(&path, text).map_err(|source| SimCmdError::Io { path, source })
}

/// Loads the topology (and optional separate scenario), runs it and writes
/// the trace, counters and deliveries into `out_dir`.
pub fn run_files(topology: &Path, scenario: Option<&Path>, out_dir: &Path) -> Result<Trace, SimCmdError> {
    let topo_text = read(topology)?;
    let (topo, scen) = match scenario {
        Some(p) => simnet::load_pair(&topo_text, &read(p)?)?,
        None => simnet::load(&topo_text)?,
    };
    let trace = simnet::run(&topo, &scen)?;
    fs::create_dir_all(out_dir).map_err(|source| SimCmdError::Io { path: out_dir.to_owned(), source })?;
    write(out_dir.join(TRACE_FILE), &trace.to_jsonl())?;
    write(out_dir.join(COUNTERS_FILE), &trace.counters_csv())?;
    write(out_dir.join(DELIVERIES_FILE), &trace.deliveries_jsonl())?;
    Ok(trace)
}
