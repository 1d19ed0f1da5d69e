use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Kernel;
use crate::io::{format_hex, parse_hex};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Serialization format for audit reports. Floating-point fields are written
/// as hexadecimal floats in both formats, so parsing restores them exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::Parse(format!("unknown report format {s:?}"))),
        }
    }
}

/// One audited trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub workers: usize,
    /// SHA-256 of the output bit patterns.
    pub digest: String,
    /// First output value.
    #[serde(with = "hex")]
    pub head: f64,
    /// Widest output interval, for interval kernels.
    #[serde(with = "hex_opt")]
    pub width: Option<f64>,
    pub inclusion: Option<bool>,
}

/// Result of an audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproReport {
    pub schema_version: u32,
    pub kernel: Kernel,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Condition number of the summed values, when the kernel is a float sum.
    #[serde(with = "hex_opt")]
    pub input_condition: Option<f64>,
    /// All trials produced bit-identical outputs.
    pub bitwise_reproducible: bool,
    /// `None` when no trial produced a checkable enclosure.
    pub inclusion_held: Option<bool>,
    /// Largest ulp distance between trials at any output position.
    pub spread_ulps: u64,
    #[serde(with = "hex_opt")]
    pub width_min: Option<f64>,
    #[serde(with = "hex_opt")]
    pub width_max: Option<f64>,
    #[serde(with = "hex_opt")]
    pub width_mean: Option<f64>,
    pub records: Vec<TrialRecord>,
}

impl ReproReport {
    /// False when the kernel promised reproducibility and did not deliver it,
    /// or when an enclosure missed the exact result.
    pub fn contract_held(&self) -> bool {
        (!self.kernel.promises_reproducibility() || self.bitwise_reproducible) && self.inclusion_held != Some(false)
    }
}

mod hex {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::io::format_hex(*v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        crate::io::parse_hex(&s).map_err(serde::de::Error::custom)
    }
}

mod hex_opt {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&crate::io::format_hex(*v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| crate::io::parse_hex(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

const CSV_HEADER: [&str; 19] = [
    "record_type",
    "schema_version",
    "kernel",
    "n",
    "trials",
    "seed",
    "input_condition",
    "bitwise_reproducible",
    "inclusion_held",
    "spread_ulps",
    "width_min",
    "width_max",
    "width_mean",
    "trial",
    "workers",
    "digest",
    "head",
    "width",
    "inclusion",
];

fn opt_hex(v: Option<f64>) -> String {
    v.map(format_hex).unwrap_or_default()
}

fn opt_bool(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

/// Serializes a report.
pub fn emit_report(report: &ReproReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(report).map_err(|e| Error::Parse(format!("json: {e}")))
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Parse(format!("csv: {e}"));
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            let mut summary = vec![
                "summary".to_string(),
                report.schema_version.to_string(),
                report.kernel.to_string(),
                report.n.to_string(),
                report.trials.to_string(),
                report.seed.to_string(),
                opt_hex(report.input_condition),
                report.bitwise_reproducible.to_string(),
                opt_bool(report.inclusion_held),
                report.spread_ulps.to_string(),
                opt_hex(report.width_min),
                opt_hex(report.width_max),
                opt_hex(report.width_mean),
            ];
            summary.resize(CSV_HEADER.len(), String::new());
            w.write_record(&summary).map_err(csv_err)?;
            for r in &report.records {
                let mut row = vec![String::new(); CSV_HEADER.len()];
                row[0] = "trial".into();
                row[13] = r.trial.to_string();
                row[14] = r.workers.to_string();
                row[15] = r.digest.clone();
                row[16] = format_hex(r.head);
                row[17] = opt_hex(r.width);
                row[18] = opt_bool(r.inclusion);
                w.write_record(&row).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Parse(format!("csv: {e}")))?;
            String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

fn field<T: FromStr>(row: &csv::StringRecord, i: usize) -> Result<T> {
    let s = row.get(i).unwrap_or("");
    s.parse()
        .map_err(|_| Error::Parse(format!("csv column {}: bad value {s:?}", CSV_HEADER[i])))
}

fn field_hex_opt(row: &csv::StringRecord, i: usize) -> Result<Option<f64>> {
    match row.get(i).unwrap_or("") {
        "" => Ok(None),
        s => parse_hex(s).map(Some),
    }
}

fn field_bool_opt(row: &csv::StringRecord, i: usize) -> Result<Option<bool>> {
    match row.get(i).unwrap_or("") {
        "" => Ok(None),
        _ => field(row, i).map(Some),
    }
}

/// Parses a report written by [`emit_report`].
pub fn parse_report(text: &str, format: ReportFormat) -> Result<ReproReport> {
    let report = match format {
        ReportFormat::Json => serde_json::from_str::<ReproReport>(text).map_err(|e| Error::Parse(format!("json: {e}")))?,
        ReportFormat::Csv => {
            let mut rd = csv::Reader::from_reader(text.as_bytes());
            let header = rd.headers().map_err(|e| Error::Parse(format!("csv: {e}")))?;
            if header.iter().ne(CSV_HEADER) {
                return Err(Error::Parse("csv: unexpected header".into()));
            }
            let mut rows = rd.records();
            let s = rows
                .next()
                .ok_or_else(|| Error::Parse("csv: missing summary row".into()))?
                .map_err(|e| Error::Parse(format!("csv: {e}")))?;
            if s.get(0) != Some("summary") {
                return Err(Error::Parse("csv: first row must be the summary".into()));
            }
            let mut report = ReproReport {
                schema_version: field(&s, 1)?,
                kernel: field(&s, 2)?,
                n: field(&s, 3)?,
                trials: field(&s, 4)?,
                seed: field(&s, 5)?,
                input_condition: field_hex_opt(&s, 6)?,
                bitwise_reproducible: field(&s, 7)?,
                inclusion_held: field_bool_opt(&s, 8)?,
                spread_ulps: field(&s, 9)?,
                width_min: field_hex_opt(&s, 10)?,
                width_max: field_hex_opt(&s, 11)?,
                width_mean: field_hex_opt(&s, 12)?,
                records: Vec::new(),
            };
            for row in rows {
                let r = row.map_err(|e| Error::Parse(format!("csv: {e}")))?;
                if r.get(0) != Some("trial") {
                    return Err(Error::Parse("csv: expected a trial row".into()));
                }
                report.records.push(TrialRecord {
                    trial: field(&r, 13)?,
                    workers: field(&r, 14)?,
                    digest: field(&r, 15)?,
                    head: parse_hex(r.get(16).unwrap_or(""))?,
                    width: field_hex_opt(&r, 17)?,
                    inclusion: field_bool_opt(&r, 18)?,
                });
            }
            report
        }
    };
    if report.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema version {}", report.schema_version)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ReproReport {
        ReproReport {
            schema_version: SCHEMA_VERSION,
            kernel: Kernel::SumIntervals,
            n: 3,
            trials: 2,
            seed: 7,
            input_condition: None,
            bitwise_reproducible: false,
            inclusion_held: Some(true),
            spread_ulps: 4,
            width_min: Some(0.1),
            width_max: Some(f64::from_bits(1)),
            width_mean: Some(-0.0),
            records: vec![
                TrialRecord {
                    trial: 0,
                    workers: 1,
                    digest: "ab".into(),
                    head: 1.0 / 3.0,
                    width: Some(f64::INFINITY),
                    inclusion: Some(true),
                },
                TrialRecord {
                    trial: 1,
                    workers: 8,
                    digest: "cd".into(),
                    head: -0.0,
                    width: None,
                    inclusion: None,
                },
            ],
        }
    }

    #[test]
    fn round_trips_bitwise() {
        let r = sample();
        for fmt in [ReportFormat::Json, ReportFormat::Csv] {
            let text = emit_report(&r, fmt).unwrap();
            let back = parse_report(&text, fmt).unwrap();
            assert_eq!(back, r);
            assert_eq!(back.records[1].head.to_bits(), (-0.0f64).to_bits());
            assert_eq!(back.width_mean.unwrap().to_bits(), (-0.0f64).to_bits());
        }
    }

    #[test]
    fn floats_are_hex_in_json() {
        let text = emit_report(&sample(), ReportFormat::Json).unwrap();
        assert!(text.contains("\"head\": \"0x1.5555555555555p-2\""));
        assert!(text.contains("\"kernel\": \"sum_intervals\""));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_report("{}", ReportFormat::Json).is_err());
        assert!(parse_report("a,b\n1,2\n", ReportFormat::Csv).is_err());
        let mut r = sample();
        r.schema_version = 99;
        let text = emit_report(&r, ReportFormat::Json).unwrap();
        assert!(parse_report(&text, ReportFormat::Json).is_err());
    }
}
