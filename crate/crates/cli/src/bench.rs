//! Keygen/sign/verify timing for the six schemes.
//!
//! Iterations are round-robin over schemes. Each (scheme, operation) pair
//! gets `warmup` untimed runs first. Rank 1 is the slowest scheme.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use ndnsec::sigcore::{self, KeyPair, SchemeId, SchemeParams, SigError, Signature, ALL_SCHEMES};

pub const DEFAULT_ITERATIONS: usize = 1000;
pub const DEFAULT_MSG_SIZE: usize = 1024;
pub const DEFAULT_WARMUP: usize = 10;
pub const CSV_HEADER: &str = "scheme,operation,iterations,mean_us,std_us,msg_size,rank";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operation {
    Keygen,
    Sign,
    Verify,
}

impl Operation {
    pub const ALL: [Operation; 3] = [Operation::Keygen, Operation::Sign, Operation::Verify];

    pub fn name(self) -> &'static str {
        match self {
            Operation::Keygen => "keygen",
            Operation::Sign => "sign",
            Operation::Verify => "verify",
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Operation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Operation::ALL
            .into_iter()
            .find(|o| o.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown operation {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub scheme: SchemeId,
    pub operation: Operation,
    pub iterations: usize,
    pub mean_us: f64,
    pub std_us: f64,
    pub msg_size: usize,
    /// 1 is the most time-consuming scheme for this operation.
    pub rank: usize,
    /// Raw per-iteration times, kept for medians and ratios.
    pub samples_us: Vec<f64>,
}

impl BenchRow {
    pub fn median_us(&self) -> f64 {
        median(&self.samples_us)
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{:.3},{:.3},{},{}",
            self.scheme, self.operation, self.iterations, self.mean_us, self.std_us, self.msg_size, self.rank
        )
    }
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// Mean and sample standard deviation; the deviation of one sample is 0.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub schemes: Vec<SchemeId>,
    pub operations: Vec<Operation>,
    pub iterations: usize,
    pub msg_size: usize,
    pub warmup: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            schemes: ALL_SCHEMES.to_vec(),
            operations: Operation::ALL.to_vec(),
            iterations: DEFAULT_ITERATIONS,
            msg_size: DEFAULT_MSG_SIZE,
            warmup: DEFAULT_WARMUP,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("iterations must be at least 1")]
    NoIterations,
    #[error("no schemes selected")]
    NoSchemes,
    #[error(transparent)]
    Sig(#[from] SigError),
}

/// Parses a comma-separated scheme list; `all` selects the six schemes.
pub fn parse_schemes(list: &str) -> Result<Vec<SchemeId>, SigError> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(ALL_SCHEMES.to_vec());
    }
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let s: SchemeId = part.parse()?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Pins the calling thread to its first allowed core. False when the
/// platform does not allow it.
pub fn pin_to_one_core() -> bool {
    match core_affinity::get_core_ids().and_then(|ids| ids.into_iter().next()) {
        Some(id) => core_affinity::set_for_current(id),
        None => false,
    }
}

fn message<R: RngCore>(rng: &mut R, len: usize) -> Vec<u8> {
    let mut m = vec![0u8; len];
    rng.fill_bytes(&mut m);
    m
}

fn elapsed_us(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e6
}

struct Subject {
    scheme: SchemeId,
    params: SchemeParams,
    key: KeyPair,
}

/// Runs the benchmark and returns one row per (scheme, operation), in
/// scheme-major order, with ranks filled in.
pub fn run(config: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    if config.iterations == 0 {
        return Err(BenchError::NoIterations);
    }
    if config.schemes.is_empty() {
        return Err(BenchError::NoSchemes);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let mut subjects = Vec::with_capacity(config.schemes.len());
    for &scheme in &config.schemes {
        let params = SchemeParams::new(scheme);
        let key = sigcore::keygen(&params, &mut rng)?;
        subjects.push(Subject { scheme, params, key });
    }

    let mut samples: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); Operation::ALL.len()]; subjects.len()];
    let ops = |o: Operation| config.operations.contains(&o);

    if ops(Operation::Keygen) {
        for round in 0..config.warmup + config.iterations {
            for (i, s) in subjects.iter().enumerate() {
                let t = Instant::now();
                let k = sigcore::keygen(&s.params, &mut rng)?;
                let us = elapsed_us(t);
                std::hint::black_box(k);
                if round >= config.warmup {
                    samples[i][0].push(us);
                }
            }
        }
    }
    if ops(Operation::Sign) || ops(Operation::Verify) {
        for round in 0..config.warmup + config.iterations {
            for (i, s) in subjects.iter().enumerate() {
                let msg = message(&mut rng, config.msg_size);
                let t = Instant::now();
                let sig: Signature = sigcore::sign(&s.key, &msg, &mut rng)?;
                let sign_us = elapsed_us(t);
                let pk = s.key.public();
                let t = Instant::now();
                let ok = sigcore::verify(&pk, &msg, &sig)?;
                let verify_us = elapsed_us(t);
                assert!(ok, "{} produced a signature that does not verify", s.scheme);
                if round >= config.warmup {
                    samples[i][1].push(sign_us);
                    samples[i][2].push(verify_us);
                }
            }
        }
    }

    let mut rows = Vec::new();
    for (i, s) in subjects.iter().enumerate() {
        for (j, op) in Operation::ALL.into_iter().enumerate() {
            if !ops(op) {
                continue;
            }
            let xs = std::mem::take(&mut samples[i][j]);
            let (mean, std) = mean_std(&xs);
            rows.push(BenchRow {
                scheme: s.scheme,
                operation: op,
                iterations: xs.len(),
                mean_us: mean,
                std_us: std,
                msg_size: config.msg_size,
                rank: 0,
                samples_us: xs,
            });
        }
    }
    assign_ranks(&mut rows);
    Ok(rows)
}

/// Ranks rows within each operation by mean time, slowest first.
pub fn assign_ranks(rows: &mut [BenchRow]) {
    for op in Operation::ALL {
        let mut idx: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].operation == op).collect();
        idx.sort_by(|&a, &b| rows[b].mean_us.total_cmp(&rows[a].mean_us));
        for (r, i) in idx.into_iter().enumerate() {
            rows[i].rank = r + 1;
        }
    }
}

/// Schemes for `op` ordered slowest first, read off the rows' ranks.
pub fn ranking(rows: &[BenchRow], op: Operation) -> Vec<SchemeId> {
    let mut v: Vec<&BenchRow> = rows.iter().filter(|r| r.operation == op).collect();
    v.sort_by_key(|r| r.rank);
    v.into_iter().map(|r| r.scheme).collect()
}

pub fn row(rows: &[BenchRow], scheme: SchemeId, op: Operation) -> Option<&BenchRow> {
    rows.iter().find(|r| r.scheme == scheme && r.operation == op)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats() {
        assert_eq!(mean_std(&[4.0]), (4.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - 1.290_994).abs() < 1e-6);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn scheme_lists() {
        assert_eq!(parse_schemes("all").unwrap().len(), 6);
        assert_eq!(parse_schemes("rsa, BLS,rsa").unwrap(), vec![SchemeId::Rsa, SchemeId::Bls]);
        assert!(parse_schemes("rsa,elgamal").is_err());
    }

    #[test]
    fn single_iteration_rows() {
        let config = BenchConfig {
            schemes: vec![SchemeId::Ecdsa, SchemeId::Bls],
            iterations: 1,
            warmup: 0,
            msg_size: 16,
            ..BenchConfig::default()
        };
        let rows = run(&config).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.iterations == 1 && r.std_us == 0.0));
        let csv = to_csv(&rows);
        assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(csv.lines().count(), 7);
        for op in Operation::ALL {
            let mut ranks: Vec<usize> = rows.iter().filter(|r| r.operation == op).map(|r| r.rank).collect();
            ranks.sort();
            assert_eq!(ranks, vec![1, 2]);
        }
    }

    #[test]
    fn ranks_follow_means() {
        let mk = |scheme, mean| BenchRow {
            scheme,
            operation: Operation::Verify,
            iterations: 1,
            mean_us: mean,
            std_us: 0.0,
            msg_size: 0,
            rank: 0,
            samples_us: vec![mean],
        };
        let mut rows = vec![mk(SchemeId::Rsa, 1.0), mk(SchemeId::Ring, 9.0), mk(SchemeId::Bls, 5.0)];
        assign_ranks(&mut rows);
        assert_eq!(
            ranking(&rows, Operation::Verify),
            vec![SchemeId::Ring, SchemeId::Bls, SchemeId::Rsa]
        );
    }
}
