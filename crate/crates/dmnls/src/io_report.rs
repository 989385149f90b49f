//! Binary field files, JSON run records and CSV series.
//!
//! Field file layout, all little-endian:
//!
//! ```text
//! b"DMNLSF2D" | version: u32 | n: u32 | length: f64 | n² × (re: f64, im: f64)
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::EnergyBreakdown;
use crate::spectral::{make_grid, ComplexField, C64};

pub const FIELD_MAGIC: &[u8; 8] = b"DMNLSF2D";
pub const FIELD_VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 4 + 8;

pub const SCHEMA_VERSION: u32 = 1;

pub fn encode_field(f: &ComplexField) -> Vec<u8> {
    let n = f.grid().n();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * n * n);
    out.extend_from_slice(FIELD_MAGIC);
    out.extend_from_slice(&FIELD_VERSION.to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&f.grid().length().to_le_bytes());
    for z in f.values() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

pub fn decode_field(bytes: &[u8]) -> Result<ComplexField> {
    if bytes.len() < 8 || &bytes[..8] != FIELD_MAGIC {
        return Err(Error::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::TruncatedPayload { expected: HEADER_LEN, found: bytes.len() });
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let f64_at = |i: usize| f64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    let version = u32_at(8);
    if version != FIELD_VERSION {
        return Err(Error::VersionMismatch { found: version, expected: FIELD_VERSION });
    }
    let n = u32_at(12) as usize;
    let length = f64_at(16);
    let expected = HEADER_LEN + 16 * n * n;
    if bytes.len() != expected {
        return Err(Error::TruncatedPayload { expected, found: bytes.len() });
    }
    let grid = make_grid(n, length)?;
    let values = (0..n * n)
        .map(|k| {
            let o = HEADER_LEN + 16 * k;
            C64::new(f64_at(o), f64_at(o + 8))
        })
        .collect();
    ComplexField::from_values(&grid, values)
}

pub fn write_field(f: &ComplexField, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_field(f))?;
    Ok(())
}

pub fn read_field(path: impl AsRef<Path>) -> Result<ComplexField> {
    decode_field(&std::fs::read(path)?)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunParams {
    pub dav: Option<f64>,
    pub p: Option<f64>,
    pub lambda: Option<f64>,
    pub n: Option<usize>,
    pub length: Option<f64>,
    pub m: Option<usize>,
    pub seed: Option<u64>,
}

/// A named `(x, y)` table.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Series {
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(x_label: impl Into<String>, y_label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { x_label: x_label.into(), y_label: y_label.into(), points }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunResults {
    pub energy: Option<EnergyBreakdown>,
    pub omega: Option<f64>,
    pub residual: Option<f64>,
    pub status: Option<String>,
    pub iterations: Option<usize>,
    /// Any further named scalars (constants, thresholds, errors).
    pub scalars: BTreeMap<String, f64>,
    /// Wall-clock seconds per phase.
    pub timings: BTreeMap<String, f64>,
    pub series: Vec<Series>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub revision: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub schema_version: u32,
    pub command: String,
    pub params: RunParams,
    pub results: RunResults,
    pub provenance: Provenance,
}

impl RunRecord {
    pub fn new(command: impl Into<String>, params: RunParams, results: RunResults, provenance: Provenance) -> Self {
        Self { schema_version: SCHEMA_VERSION, command: command.into(), params, results, provenance }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(s)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::VersionMismatch { found: r.schema_version, expected: SCHEMA_VERSION });
        }
        Ok(r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportFormat {
    Json,
    CsvSeries,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" | "csv-series" => Ok(Self::CsvSeries),
            _ => crate::error::invalid(format!("unknown report format {s:?} (use json or csv-series)")),
        }
    }
}

/// Render a record. JSON keys follow struct order and sorted maps; CSV
/// prints each series as a header row plus data rows, blocks separated by a blank line.
pub fn emit_report(record: &RunRecord, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(record).expect("records always serialize");
            s.push('\n');
            s
        }
        ReportFormat::CsvSeries => {
            let mut out = String::new();
            for (i, series) in record.results.series.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let _ = writeln!(out, "{},{}", series.x_label, series.y_label);
                for (x, y) in &series.points {
                    let _ = writeln!(out, "{x:e},{y:e}");
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::random_smooth;

    fn record() -> RunRecord {
        let mut results = RunResults { omega: Some(0.25), status: Some("converged".into()), ..Default::default() };
        results.scalars.insert("b".into(), 2.0);
        results.scalars.insert("a".into(), 1.0);
        results.series.push(Series::new("lambda", "energy", vec![(1.0, -0.5), (2.0, -1.25)]));
        RunRecord::new(
            "test",
            RunParams { p: Some(3.0), ..Default::default() },
            results,
            Provenance { revision: "abc".into(), timestamp: 7 },
        )
    }

    #[test]
    fn field_round_trip_and_errors() {
        let g = make_grid(16, 9.5).unwrap();
        let f = random_smooth(&g, 4, 1.0);
        let bytes = encode_field(&f);
        assert_eq!(bytes.len(), HEADER_LEN + 16 * 256);
        let back = decode_field(&bytes).unwrap();
        assert_eq!(back.grid().length().to_bits(), 9.5f64.to_bits());
        assert!(back.values().iter().zip(f.values()).all(|(a, b)| a.re.to_bits() == b.re.to_bits()
            && a.im.to_bits() == b.im.to_bits()));

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(decode_field(&bad), Err(Error::BadMagic)));
        let mut ver = bytes.clone();
        ver[8] = 9;
        assert!(matches!(decode_field(&ver), Err(Error::VersionMismatch { found: 9, .. })));
        assert!(matches!(decode_field(&bytes[..bytes.len() - 3]), Err(Error::TruncatedPayload { .. })));
        assert!(matches!(decode_field(&bytes[..12]), Err(Error::TruncatedPayload { .. })));
    }

    #[test]
    fn json_is_deterministic_and_strict() {
        let r = record();
        let a = emit_report(&r, ReportFormat::Json);
        assert_eq!(a, emit_report(&r.clone(), ReportFormat::Json));
        assert_eq!(RunRecord::from_json(&a).unwrap(), r);
        assert!(a.find("\"a\"").unwrap() < a.find("\"b\"").unwrap());
        let extra = a.replacen("\"command\"", "\"bogus\": 1,\n  \"command\"", 1);
        assert!(RunRecord::from_json(&extra).is_err());
    }

    #[test]
    fn csv_series() {
        let csv = emit_report(&record(), ReportFormat::CsvSeries);
        assert_eq!(csv.lines().next(), Some("lambda,energy"));
        assert_eq!(csv.lines().count(), 3);
        let mut r = record();
        r.results.series[0].points.clear();
        assert_eq!(emit_report(&r, ReportFormat::CsvSeries), "lambda,energy\n");
    }
}
