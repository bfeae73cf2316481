use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bench::{CostReport, LatencyReport};
use crate::rates::FailureRateReport;
use crate::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    FailureRate(FailureRateReport),
    Latency(LatencyReport),
    Cost(CostReport),
}

impl Report {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn dp(v: f64, decimals: usize) -> String {
    format!("{v:.decimals$}")
}

fn opt_dp(v: Option<f64>, decimals: usize) -> String {
    v.map(|v| dp(v, decimals)).unwrap_or_default()
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, EvalError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| EvalError::Render(e.to_string());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| EvalError::Render(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| EvalError::Render(e.to_string()))
}

/// Renders a report. Field order is fixed and numbers use fixed decimals:
/// rates and percentages 2, USD 5, milliseconds 1.
pub fn render_report(report: &Report, format: Format) -> Result<String, EvalError> {
    match format {
        Format::Json => serde_json::to_string_pretty(report)
            .map(|s| s + "\n")
            .map_err(|e| EvalError::Render(e.to_string())),
        Format::Csv => match report {
            Report::FailureRate(r) => csv_text(
                &["error_type", "n_i", "N", "R_i"],
                r.per_type
                    .iter()
                    .map(|(t, rate)| vec![t.to_string(), rate.n_i.to_string(), r.n.to_string(), dp(rate.r_i, 2)])
                    .collect(),
            ),
            Report::Latency(r) => csv_text(
                &[
                    "profile",
                    "count",
                    "mean_ms",
                    "min_ms",
                    "max_ms",
                    "p50_ms",
                    "p90_ms",
                    "delta_pct",
                    "failures",
                ],
                r.profiles
                    .iter()
                    .map(|p| {
                        let s = &p.stats;
                        vec![
                            p.profile.clone(),
                            s.count.to_string(),
                            dp(s.mean_ms, 1),
                            dp(s.min_ms, 1),
                            dp(s.max_ms, 1),
                            dp(s.p50_ms, 1),
                            dp(s.p90_ms, 1),
                            opt_dp(p.delta_pct, 2),
                            p.failures.len().to_string(),
                        ]
                    })
                    .collect(),
            ),
            Report::Cost(r) => csv_text(
                &[
                    "profile",
                    "model_id",
                    "records",
                    "mean_input_tokens",
                    "mean_output_tokens",
                    "mean_usd",
                    "delta_pct",
                    "failures",
                ],
                r.profiles
                    .iter()
                    .map(|p| {
                        vec![
                            p.profile.clone(),
                            r.model_id.clone(),
                            p.records.to_string(),
                            dp(p.mean_input_tokens, 2),
                            dp(p.mean_output_tokens, 2),
                            dp(p.mean_cost.usd, 5),
                            opt_dp(p.delta_pct, 2),
                            p.failures.len().to_string(),
                        ]
                    })
                    .collect(),
            ),
        },
    }
}

/// Renders `report` and writes it to `path`.
pub fn emit_report(report: &Report, format: Format, path: impl AsRef<Path>) -> Result<(), EvalError> {
    let path = path.as_ref();
    let text = render_report(report, format)?;
    std::fs::write(path, text).map_err(|e| EvalError::FileUnwritable {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use codetutor_core::judge::ErrorType;

    use super::*;
    use crate::rates::{rate, TypeRate};

    fn report() -> Report {
        let mut per_type = BTreeMap::new();
        for (t, n_i) in [(ErrorType::HardCoding, 23), (ErrorType::UnnecessaryCode, 19)] {
            per_type.insert(
                t,
                TypeRate {
                    n_i,
                    r_i: rate(n_i, 108),
                },
            );
        }
        Report::FailureRate(FailureRateReport { n: 108, per_type })
    }

    #[test]
    fn failure_rate_csv() {
        let csv = render_report(&report(), Format::Csv).unwrap();
        assert_eq!(
            csv,
            "error_type,n_i,N,R_i\nUnnecessaryCode,19,108,17.59\nHardCoding,23,108,21.30\n"
        );
    }

    #[test]
    fn empty_csv_is_header_only() {
        let empty = Report::FailureRate(FailureRateReport {
            n: 0,
            per_type: BTreeMap::new(),
        });
        assert_eq!(render_report(&empty, Format::Csv).unwrap(), "error_type,n_i,N,R_i\n");
    }

    #[test]
    fn json_uses_fixed_decimals_and_round_trips() {
        let json = render_report(&report(), Format::Json).unwrap();
        assert!(json.contains("\"R_i\": 21.30"), "{json}");
        assert!(json.contains("\"N\": 108"));
        let again = render_report(&Report::from_json(&json).unwrap(), Format::Json).unwrap();
        assert_eq!(json, again);
    }

    #[test]
    fn emitted_twice_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        emit_report(&report(), Format::Csv, &a).unwrap();
        emit_report(&report(), Format::Csv, &b).unwrap();
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    }

    #[test]
    fn unwritable_path() {
        let err = emit_report(&report(), Format::Json, "/nonexistent-dir/x.json").unwrap_err();
        assert!(matches!(err, EvalError::FileUnwritable { .. }));
    }
}
