use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use codetutor_core::bank::DatasetRecord;
use codetutor_core::gateway::LlmUsage;
use codetutor_core::judge::{CorrectnessVerdict, ErrorType, VerdictState};

use crate::fixed::dp2;
use crate::EvalError;

/// One judged submission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    /// Index of the record in its bank.
    pub record_id: usize,
    pub record: DatasetRecord,
    pub verdict: CorrectnessVerdict,
    pub usage: LlmUsage,
    pub profile_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeRate {
    pub n_i: usize,
    #[serde(rename = "R_i", serialize_with = "dp2")]
    pub r_i: f64,
}

/// `R_i = n_i / N * 100`, where `n_i` counts submissions of error type `i`
/// that the judge did not accept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRateReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub per_type: BTreeMap<ErrorType, TypeRate>,
}

pub fn rate(n_i: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        n_i as f64 / n as f64 * 100.0
    }
}

pub fn failure_rate(records: &[EvalRecord]) -> Result<FailureRateReport, EvalError> {
    let mut counts: BTreeMap<ErrorType, usize> = BTreeMap::new();
    for r in records {
        let label = r.record.error_type.ok_or(EvalError::MissingLabel(r.record_id))?;
        let n_i = counts.entry(label).or_default();
        if r.verdict.state != VerdictState::Correct {
            *n_i += 1;
        }
    }
    let n = records.len();
    let per_type = counts
        .into_iter()
        .map(|(t, n_i)| (t, TypeRate { n_i, r_i: rate(n_i, n) }))
        .collect();
    Ok(FailureRateReport { n, per_type })
}

/// Relative reduction of `value` against `baseline`, in percent.
pub fn delta_pct(baseline: f64, value: f64) -> Option<f64> {
    if baseline == 0.0 {
        return (value == 0.0).then_some(0.0);
    }
    Some((baseline - value) / baseline * 100.0)
}
