//! CSV and flat JSON writers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use acr_core::{SpinExpectation, TimeSeries};
use serde_json::Value;

use crate::error::Result;

pub const SERIES_HEADER: &str = "t,site,sx,sy,sz,purity,bloch_norm";

/// Flat key-value summary.
pub type Summary = BTreeMap<String, Value>;

/// Twelve significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn series_csv(series: &TimeSeries) -> String {
    let mut out = String::with_capacity(64 * series.times.len() * series.sites.len() + 64);
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for (ti, &t) in series.times.iter().enumerate() {
        for (si, &site) in series.sites.iter().enumerate() {
            let e: &SpinExpectation = &series.records[si][ti];
            let _ = writeln!(
                out,
                "{},{site},{},{},{},{},{}",
                fmt_float(t),
                fmt_float(e.sx),
                fmt_float(e.sy),
                fmt_float(e.sz),
                fmt_float(e.purity),
                fmt_float(e.bloch_norm)
            );
        }
    }
    out
}

/// Generic table with a header line and preformatted cells.
pub fn table_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn summary_json(summary: &Summary) -> String {
    let mut text = serde_json::to_string_pretty(summary).expect("summary values are plain JSON");
    text.push('\n');
    text
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, dir.join(name))?;
    Ok(())
}

pub fn put(summary: &mut Summary, key: &str, value: impl Into<Value>) {
    summary.insert(key.to_string(), value.into());
}

/// Non-finite floats become `null`.
pub fn put_f64(summary: &mut Summary, key: &str, value: f64) {
    let v = serde_json::Number::from_f64(value)
        .map(Value::Number)
        .unwrap_or(Value::Null);
    summary.insert(key.to_string(), v);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_float(0.5), "5.00000000000e-1");
        assert_eq!(fmt_float(-0.353611), "-3.53611000000e-1");
        let parsed: f64 = fmt_float(std::f64::consts::PI).parse().unwrap();
        assert!((parsed - std::f64::consts::PI).abs() < 1e-11);
    }

    #[test]
    fn series_layout() {
        let e = SpinExpectation {
            sx: 0.0,
            sy: 0.5,
            sz: 0.0,
            purity: 1.0,
            bloch_norm: 0.5,
        };
        let s = TimeSeries {
            times: vec![0.0, 1.0],
            sites: vec![1, 3],
            records: vec![vec![e; 2], vec![e; 2]],
        };
        let csv = series_csv(&s);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SERIES_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[2].starts_with("0.00000000000e0,3,"));
        assert!(lines[3].starts_with("1.00000000000e0,1,"));
    }

    #[test]
    fn non_finite_becomes_null() {
        let mut s = Summary::new();
        put_f64(&mut s, "x", f64::NAN);
        assert_eq!(s["x"], Value::Null);
    }
}
