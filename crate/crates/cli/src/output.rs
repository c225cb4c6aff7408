//! Atomic file writes, parameter parsing and the run manifest.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use markoff_core::field::is_prime;
use markoff_core::ParamQuad;
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

/// Writes through a temporary file in the target directory, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Parses `A,B,C,D` as signed decimal integers.
pub fn parse_params(s: &str) -> Result<ParamQuad> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        bail!("expected four comma-separated integers A,B,C,D, got {s:?}");
    }
    let mut v = Vec::with_capacity(4);
    for part in parts {
        let n: BigInt = part
            .parse()
            .with_context(|| format!("{part:?} is not a decimal integer"))?;
        v.push(n);
    }
    let [a, b, c, d]: [BigInt; 4] = v.try_into().expect("four parts");
    Ok(ParamQuad::new(a, b, c, d))
}

/// Parses an inclusive range `LO..HI`.
pub fn parse_range(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = s
        .split_once("..")
        .with_context(|| format!("expected LO..HI, got {s:?}"))?;
    let lo: u64 = lo
        .trim()
        .parse()
        .with_context(|| format!("bad lower bound {lo:?}"))?;
    let hi: u64 = hi
        .trim()
        .parse()
        .with_context(|| format!("bad upper bound {hi:?}"))?;
    if lo > hi {
        bail!("empty range {s:?}");
    }
    Ok((lo, hi))
}

/// All primes in `[lo, hi]` except 2 and 3.
pub fn sweep_primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(5)..=hi).filter(|&n| is_prime(n)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportRecord {
    pub prime: u64,
    pub file: String,
    pub sha256: String,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub params: Vec<Value>,
    pub primes: Vec<u64>,
    pub group: &'static str,
    pub threshold: u64,
    pub workers: usize,
    pub reports: Vec<ReportRecord>,
    pub summary_sha256: String,
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
