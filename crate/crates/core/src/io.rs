//! Serialization helpers: FockVector JSON and fixed-format CSV.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::phasespace::PhaseSpaceMap;

/// Formats a float with 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn state_to_json(s: &FockVector) -> String {
    serde_json::to_string_pretty(s).expect("FockVector serializes infallibly")
}

pub fn state_from_json(text: &str) -> Result<FockVector> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

/// Row-major CSV with header `x,p,value`.
pub fn map_to_csv(map: &PhaseSpaceMap) -> String {
    map_to_csv_with_header(map, "x,p,value")
}

pub fn map_to_csv_with_header(map: &PhaseSpaceMap, header: &str) -> String {
    let xs = map.grid.xs();
    let ps = map.grid.ps();
    let mut out = String::with_capacity(60 * map.values.len() + 16);
    out.push_str(header);
    out.push('\n');
    for (ix, x) in xs.iter().enumerate() {
        for (ip, p) in ps.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", fmt_f64(*x), fmt_f64(*p), fmt_f64(map.get(ix, ip)));
        }
    }
    out
}

/// CSV from named columns of equal length.
pub fn columns_to_csv(headers: &[&str], columns: &[Vec<f64>]) -> String {
    assert_eq!(headers.len(), columns.len(), "one header per column");
    let rows = columns.first().map_or(0, Vec::len);
    let mut out = headers.join(",");
    out.push('\n');
    for r in 0..rows {
        let line: Vec<String> = columns.iter().map(|c| fmt_f64(c[r])).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
