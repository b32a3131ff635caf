//! Report types and their JSON and CSV encodings.
//!
//! JSON floats are written with 17 significant digits so every value round-trips
//! bit-exactly; non-finite values become `null`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use evomr_core::relations::{ExactRecord, Params, SecondaryCheck, Verdict};
use evomr_core::{Algorithm, FitnessKind};
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub suite_config: SuiteConfigRecord,
    pub active_fault: Option<FaultRecord>,
    pub outcomes: Vec<OutcomeRecord>,
    /// Keyed by relation id.
    pub summary: BTreeMap<String, Tally>,
}

impl SuiteReport {
    /// True when no executed relation failed.
    pub fn all_passed(&self) -> bool {
        self.summary.values().all(|t| t.fail == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteConfigRecord {
    pub relation_ids: Vec<String>,
    /// A fitness name, or `default` for each relation's catalog default.
    pub fitness: String,
    pub algorithm: Algorithm,
    pub repetitions: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FaultRecord {
    pub id: String,
    pub target: String,
    pub description: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: u32,
    pub fail: u32,
    pub skip: u32,
}

impl Tally {
    pub fn add(&mut self, status: Status) {
        match status {
            Status::Pass => self.pass += 1,
            Status::Fail => self.fail += 1,
            Status::Skip => self.skip += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Samples {
    pub initial: Vec<f64>,
    pub follow_up: Vec<f64>,
}

/// One relation at one repetition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OutcomeRecord {
    pub relation_id: String,
    pub repetition: u32,
    pub fitness: FitnessKind,
    pub algorithm: Algorithm,
    pub status: Status,
    pub pass: bool,
    /// Seed and stream of the substream the relation ran on.
    pub seed: u64,
    pub stream: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Samples>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secondary: Option<SecondaryCheck>,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
}

/// Pretty JSON with `{:.16e}` floats.
struct Precise<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {$(
        fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        }
    )*};
}

impl Formatter for Precise<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", format_float(value))
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

/// 17 significant digits in exponent form; `NaN`/`inf` spelled out for CSV.
pub fn format_float(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.16e}")
    } else {
        value.to_string()
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Precise(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

pub fn parse_report(json: &str) -> Result<SuiteReport> {
    Ok(serde_json::from_str(json)?)
}

pub fn read_report(path: &Path) -> Result<SuiteReport> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Read {
        path: path.to_owned(),
        source,
    })?;
    parse_report(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

const CSV_HEADER: [&str; 20] = [
    "relationId",
    "repetition",
    "fitness",
    "algorithm",
    "status",
    "seed",
    "stream",
    "kind",
    "statistic",
    "pValue",
    "alternative",
    "reject",
    "degenerate",
    "checks",
    "violations",
    "initialMean",
    "followUpMean",
    "sampleSize",
    "secondaryPValue",
    "skipReason",
];

fn mean(values: &[f64]) -> String {
    if values.is_empty() {
        String::new()
    } else {
        format_float(values.iter().sum::<f64>() / values.len() as f64)
    }
}

fn csv_row(o: &OutcomeRecord) -> Vec<String> {
    let blank = String::new;
    let (kind, stat) = match &o.verdict {
        Some(Verdict::Statistical(v)) => (
            "statistical",
            [
                format_float(v.statistic),
                format_float(v.p_value),
                v.alternative.to_string(),
                v.reject.to_string(),
                v.degenerate.to_string(),
                blank(),
                blank(),
            ],
        ),
        Some(Verdict::Exact(ExactRecord { checks, violations, .. })) => (
            "exact",
            [blank(), blank(), blank(), blank(), blank(), checks.to_string(), violations.to_string()],
        ),
        None => ("", Default::default()),
    };
    let (initial_mean, follow_up_mean, n) = match &o.samples {
        Some(s) => (mean(&s.initial), mean(&s.follow_up), s.initial.len().to_string()),
        None => (blank(), blank(), blank()),
    };
    let mut row = vec![
        o.relation_id.clone(),
        o.repetition.to_string(),
        o.fitness.to_string(),
        o.algorithm.to_string(),
        format!("{:?}", o.status).to_lowercase(),
        o.seed.to_string(),
        o.stream.to_string(),
        kind.to_string(),
    ];
    row.extend(stat);
    row.extend([
        initial_mean,
        follow_up_mean,
        n,
        o.secondary.as_ref().map(|s| format_float(s.verdict.p_value)).unwrap_or_default(),
        o.skip_reason.clone().unwrap_or_default(),
    ]);
    row
}

/// One row per (relation, repetition).
pub fn write_csv<W: Write>(report: &SuiteReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for o in &report.outcomes {
        w.write_record(csv_row(o))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn to_csv(report: &SuiteReport) -> Result<String> {
    let mut out = Vec::new();
    write_csv(report, &mut out)?;
    Ok(String::from_utf8(out).expect("csv of UTF-8 fields"))
}

/// Write `report` to `path` in `format`.
pub fn emit_report(report: &SuiteReport, format: Format, path: &Path) -> Result<()> {
    let text = match format {
        Format::Json => to_json(report)?,
        Format::Csv => to_csv(report)?,
    };
    write_file(path, text.as_bytes())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let wrap = |source| HarnessError::Write {
        path: path.to_owned(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(wrap)?);
    w.write_all(bytes).map_err(wrap)?;
    w.flush().map_err(wrap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(86490961.0), "8.6490961000000000e7");
        for v in [0.1, 1.0 / 3.0, 2.1373314175528463e-6, f64::MAX, -0.0] {
            let back: f64 = format_float(v).parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits());
        }
    }

    #[test]
    fn json_floats_are_parseable_and_exact() {
        let values = vec![0.1, 13.241973844941171, 5e-324, f64::NAN];
        let text = to_json(&values).unwrap();
        assert!(text.contains("1.3241973844941171e1"));
        assert!(text.contains("null"));
        let back: Vec<Option<f64>> = serde_json::from_str(&text).unwrap();
        assert_eq!(back[..3], [Some(0.1), Some(13.241973844941171), Some(5e-324)]);
        assert_eq!(back[3], None);
    }

    #[test]
    fn tally_counts_each_status() {
        let mut t = Tally::default();
        for s in [Status::Pass, Status::Fail, Status::Pass, Status::Skip] {
            t.add(s);
        }
        assert_eq!(t, Tally { pass: 2, fail: 1, skip: 1 });
    }
}
