use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use qratio_core::{positivity_report, IntPoly, PositivityReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    NotPolynomial,
    NegativeFound,
    IdentityViolation,
}

/// One line of structured output.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub command: &'static str,
    pub input: Value,
    pub status: Status,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Usage = 1,
    Negative = 2,
    Violation = 3,
}

/// Everything one invocation produces.
#[derive(Debug)]
pub struct Output {
    pub records: Vec<Record>,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub exit: Exit,
}

impl Output {
    pub fn new(csv_header: Vec<&'static str>) -> Self {
        Output {
            records: Vec::new(),
            csv_header,
            csv_rows: Vec::new(),
            exit: Exit::Success,
        }
    }
}

/// Exit code implied by the worst record status.
pub fn exit_for(records: &[Record]) -> Exit {
    match records.iter().map(|r| r.status).max() {
        Some(Status::IdentityViolation) => Exit::Violation,
        Some(Status::NegativeFound) => Exit::Negative,
        _ => Exit::Success,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
}

pub fn write_output(out: &Output, format: Format, sink: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Jsonl => {
            for r in &out.records {
                serde_json::to_writer(&mut *sink, r)?;
                sink.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(&out.csv_header)?;
            for row in &out.csv_rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// File name for a result, from a hash of its input parameters.
pub fn content_name(prefix: &str, input: &Value) -> String {
    let digest = Sha256::digest(input.to_string().as_bytes());
    format!("{prefix}-{}.jsonl", &hex::encode(digest)[..16])
}

pub fn persist(dir: &Path, prefix: &str, input: &Value, records: &[Record]) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(content_name(prefix, input));
    let mut buf = Vec::new();
    for r in records {
        serde_json::to_writer(&mut buf, r)?;
        buf.push(b'\n');
    }
    fs::write(&path, buf)?;
    Ok(path)
}

/// Polynomial summary shared by every command that emits polynomials.
pub struct PolySummary {
    pub report: PositivityReport,
    pub num_terms: usize,
    pub min_coeff: String,
}

impl PolySummary {
    pub fn of(p: &IntPoly) -> Self {
        PolySummary {
            report: positivity_report(p),
            num_terms: p.num_terms(),
            min_coeff: p.min_coeff().map(ToString::to_string).unwrap_or_else(|| "0".into()),
        }
    }

    pub fn degree_string(&self) -> String {
        self.report
            .degree
            .map(|d| d.to_string())
            .unwrap_or_else(|| "-inf".into())
    }

    pub fn to_json(&self, poly: Option<&IntPoly>) -> Value {
        let mut v = serde_json::json!({
            "report": self.report,
            "degree": self.degree_string(),
            "num_terms": self.num_terms,
            "min_coeff": self.min_coeff,
        });
        if let Some(p) = poly {
            v["coefficients"] = serde_json::to_value(p).expect("IntPoly serializes");
        }
        v
    }

    pub fn status(&self) -> Status {
        if self.report.is_positive {
            Status::Ok
        } else {
            Status::NegativeFound
        }
    }

    /// `[label, degree, num_terms, min_coeff, is_positive]`.
    pub fn csv_row(&self, label: String) -> Vec<String> {
        vec![
            label,
            self.degree_string(),
            self.num_terms.to_string(),
            self.min_coeff.clone(),
            self.report.is_positive.to_string(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn rec(status: Status) -> Record {
        Record {
            command: "t",
            input: json!({}),
            status,
            payload: Value::Null,
            elapsed_ms: None,
        }
    }

    #[test]
    fn exit_codes_follow_worst_status() {
        assert_eq!(exit_for(&[]), Exit::Success);
        assert_eq!(exit_for(&[rec(Status::Ok), rec(Status::NotPolynomial)]), Exit::Success);
        assert_eq!(exit_for(&[rec(Status::Ok), rec(Status::NegativeFound)]), Exit::Negative);
        assert_eq!(
            exit_for(&[rec(Status::NegativeFound), rec(Status::IdentityViolation)]),
            Exit::Violation
        );
        assert_eq!(Exit::Negative as i32, 2);
        assert_eq!(Exit::Violation as i32, 3);
    }

    #[test]
    fn negative_polynomial_is_reported() {
        let s = PolySummary::of(&IntPoly::from_i64s(&[1, -3, 1]));
        assert_eq!(s.status(), Status::NegativeFound);
        assert_eq!(s.min_coeff, "-3");
        assert_eq!(s.csv_row("1".into()), vec!["1", "2", "3", "-3", "false"]);
        let z = PolySummary::of(&IntPoly::zero());
        assert_eq!(z.degree_string(), "-inf");
    }

    #[test]
    fn record_schema() {
        let mut r = rec(Status::NegativeFound);
        r.elapsed_ms = Some(5);
        let line = serde_json::to_string(&r).unwrap();
        assert_eq!(
            line,
            r#"{"command":"t","input":{},"status":"negative-found","payload":null,"elapsed_ms":5}"#
        );
        r.elapsed_ms = None;
        assert!(!serde_json::to_string(&r).unwrap().contains("elapsed_ms"));
    }

    #[test]
    fn content_names_are_stable() {
        let a = content_name("sweep", &json!({"a": [2], "b": [1, 1]}));
        assert_eq!(a, content_name("sweep", &json!({"b": [1, 1], "a": [2]})));
        assert_ne!(a, content_name("sweep", &json!({"a": [3], "b": [2, 1]})));
        assert_eq!(a.len(), "sweep-".len() + 16 + ".jsonl".len());
    }
}
