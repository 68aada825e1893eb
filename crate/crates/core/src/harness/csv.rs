//! CSV output and Eb/N0 list parsing.

use std::fmt::Write as _;

use crate::codes::{min_distance_asymptote, LinearCode};
use crate::error::{Error, Result};

use super::BerRecord;

pub const CSV_HEADER: &str = "code,decoder,ebn0_db,frames,bit_errors,ber,l,iterations,beta,seed";
pub const ASYMPTOTE_HEADER: &str = "ebn0_db,ber_asymptote";

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

/// One line per record after the header. Empty fields mean "not applicable".
pub fn emit_csv(records: &[BerRecord]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{:e},{},{},{},{}",
            r.code,
            r.decoder,
            r.ebn0_db,
            r.frames,
            r.bit_errors,
            r.ber,
            opt(r.l),
            opt(r.iterations),
            opt(r.beta),
            r.seed
        )
        .expect("writing to a String");
    }
    out
}

pub fn emit_asymptote(code: &LinearCode, ebn0_points: &[f64]) -> Result<String> {
    let mut out = format!("{ASYMPTOTE_HEADER}\n");
    for &p in ebn0_points {
        writeln!(out, "{p},{:e}", min_distance_asymptote(code, p)?).expect("writing to a String");
    }
    Ok(out)
}

fn number(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::ConfigInvalid(format!("not a number: {s:?}")))
}

/// Parses `"3,4,5.5"`.
pub fn parse_ebno_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(number)
        .collect()
}

/// Parses `"lo:hi:step"` into the inclusive grid `lo, lo + step, ..., hi`.
pub fn parse_ebno_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts[..] else {
        return Err(Error::ConfigInvalid(format!(
            "expected lo:hi:step, got {s:?}"
        )));
    };
    let (lo, hi, step) = (number(lo)?, number(hi)?, number(step)?);
    if step <= 0.0 || hi < lo {
        return Err(Error::ConfigInvalid(format!("empty range {s:?}")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    // Rounding to 1e-9 keeps printed grid values clean.
    Ok((0..=n)
        .map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9)
        .collect())
}
