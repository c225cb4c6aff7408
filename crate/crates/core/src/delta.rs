//! Coefficient table of Δ(A,B,C,D), shipped as data.

use std::sync::OnceLock;

use sha2::{Digest, Sha256};

pub const DELTA_TABLE: &str = include_str!("../data/delta.txt");

/// SHA-256 of `data/delta.txt`.
pub const DELTA_SHA256: &str = "ad94ab66f4efa887307f7c36c3d4bc7e87617979ef51557cca6a9ac091026274";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaTerm {
    /// Exponents of A, B, C, D.
    pub exps: [u32; 4],
    pub coeff: i64,
}

/// Parses lines of the form `eA eB eC eD coefficient`.
pub fn parse_table(text: &str) -> Result<Vec<DeltaTerm>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(format!("line {}: expected 5 fields", n + 1));
        }
        let mut exps = [0u32; 4];
        for (slot, f) in exps.iter_mut().zip(&fields[..4]) {
            *slot = f
                .parse()
                .map_err(|e| format!("line {}: bad exponent {f:?}: {e}", n + 1))?;
        }
        let coeff = fields[4]
            .parse()
            .map_err(|e| format!("line {}: bad coefficient {:?}: {e}", n + 1, fields[4]))?;
        out.push(DeltaTerm { exps, coeff });
    }
    Ok(out)
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn checksum_ok() -> bool {
    sha256_hex(DELTA_TABLE) == DELTA_SHA256
}

pub fn terms() -> &'static [DeltaTerm] {
    static TERMS: OnceLock<Vec<DeltaTerm>> = OnceLock::new();
    TERMS.get_or_init(|| parse_table(DELTA_TABLE).expect("shipped Δ table parses"))
}
