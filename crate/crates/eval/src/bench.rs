use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use codetutor_core::bank::{Bank, DatasetRecord};
use codetutor_core::gateway::{Gateway, LlmUsage, PricingTable};
use codetutor_core::judge::{run_submission_flow, CorrectnessVerdict, SubmissionOutcome, VerdictState};
use codetutor_core::review::{run_review_pipeline, PromptProfile};

use crate::fixed::{dp1, dp2, dp2_opt, dp5};
use crate::rates::{delta_pct, EvalRecord};
use crate::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Upper bound on records evaluated concurrently.
    pub workers: usize,
    /// Passes over the bank per profile.
    pub trials: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { workers: 4, trials: 1 }
    }
}

/// A record the gateway could not complete; kept out of the statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordFailure {
    pub record_id: usize,
    pub ex_id: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyStats {
    pub count: usize,
    #[serde(serialize_with = "dp1")]
    pub mean_ms: f64,
    #[serde(serialize_with = "dp1")]
    pub min_ms: f64,
    #[serde(serialize_with = "dp1")]
    pub max_ms: f64,
    #[serde(serialize_with = "dp1")]
    pub p50_ms: f64,
    #[serde(serialize_with = "dp1")]
    pub p90_ms: f64,
}

/// Nearest-rank percentile of an ascending, non-empty sample.
fn nearest_rank(sorted: &[f64], pct: f64) -> f64 {
    let rank = (pct / 100.0 * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

impl LatencyStats {
    pub fn from_samples(samples: &[f64]) -> Result<Self, EvalError> {
        if samples.is_empty() {
            return Err(EvalError::EmptySample);
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self {
            count: sorted.len(),
            mean_ms: sorted.iter().sum::<f64>() / sorted.len() as f64,
            min_ms: sorted[0],
            max_ms: sorted[sorted.len() - 1],
            p50_ms: nearest_rank(&sorted, 50.0),
            p90_ms: nearest_rank(&sorted, 90.0),
        })
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, EvalError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| EvalError::Pool(e.to_string()))
}

fn failure(id: usize, record: &DatasetRecord, message: impl ToString) -> RecordFailure {
    RecordFailure {
        record_id: id,
        ex_id: record.ex_id.clone(),
        message: message.to_string(),
    }
}

/// Runs `job` over every (record, trial) pair and returns successes and
/// failures, both sorted by record id.
fn run_all<T, F>(bank: &Bank, opts: RunOptions, job: F) -> Result<(Vec<T>, Vec<RecordFailure>), EvalError>
where
    T: Send,
    F: Fn(usize, &DatasetRecord) -> Result<T, RecordFailure> + Sync,
{
    let work: Vec<(usize, &DatasetRecord)> = (0..opts.trials.max(1))
        .flat_map(|_| bank.records().iter().enumerate())
        .collect();
    let mut results: Vec<(usize, Result<T, RecordFailure>)> =
        pool(opts.workers)?.install(|| work.par_iter().map(|&(id, r)| (id, job(id, r))).collect());
    results.sort_by_key(|(id, _)| *id);

    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for (_, r) in results {
        match r {
            Ok(v) => ok.push(v),
            Err(f) => failed.push(f),
        }
    }
    Ok((ok, failed))
}

/// Judges every record of `bank` under `profile`. Submissions stopped before
/// the judge (empty or invalid) count as `Error` verdicts.
pub fn evaluate_submissions(
    bank: &Bank,
    profile: &PromptProfile,
    gateway: &Gateway,
    workers: usize,
) -> Result<(Vec<EvalRecord>, Vec<RecordFailure>), EvalError> {
    let opts = RunOptions { workers, trials: 1 };
    run_all(bank, opts, |id, record| {
        let exercise = bank
            .exercise(&record.ex_id)
            .ok_or_else(|| failure(id, record, "unknown exercise"))?;
        let outcome =
            run_submission_flow(exercise, &record.sub_code, profile, gateway).map_err(|e| failure(id, record, e))?;
        let usage = outcome.usage();
        let verdict = match outcome {
            SubmissionOutcome::Judged { verdict, .. } => verdict,
            SubmissionOutcome::EmptySubmission => {
                CorrectnessVerdict::new(VerdictState::Error, "empty submission", None)
            }
            SubmissionOutcome::Invalid(report) => {
                let reason = report
                    .findings
                    .first()
                    .map(|f| format!("line {}: {}", f.line, f.message))
                    .unwrap_or_default();
                CorrectnessVerdict::new(VerdictState::Error, reason, None)
            }
        };
        Ok(EvalRecord {
            record_id: id,
            record: record.clone(),
            verdict,
            usage,
            profile_name: profile.name.clone(),
        })
    })
}

/// Aggregated review-pipeline usage for every record under one profile.
pub fn review_usage(
    bank: &Bank,
    profile: &PromptProfile,
    gateway: &Gateway,
    opts: RunOptions,
) -> Result<(Vec<LlmUsage>, Vec<RecordFailure>), EvalError> {
    run_all(bank, opts, |id, record| {
        let exercise = bank
            .exercise(&record.ex_id)
            .ok_or_else(|| failure(id, record, "unknown exercise"))?;
        run_review_pipeline(exercise, &record.sub_code, profile, gateway)
            .map(|outcome| outcome.usage())
            .map_err(|e| failure(id, record, e))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileLatency {
    pub profile: String,
    pub stats: LatencyStats,
    /// Mean-latency reduction against the first profile, in percent.
    #[serde(serialize_with = "dp2_opt")]
    pub delta_pct: Option<f64>,
    pub failures: Vec<RecordFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyReport {
    pub profiles: Vec<ProfileLatency>,
}

/// Review latency per record (summed over its gateway calls) for each
/// profile. The first profile is the baseline for deltas.
pub fn latency_bench(
    bank: &Bank,
    profiles: &[PromptProfile],
    gateway: &Gateway,
    opts: RunOptions,
) -> Result<LatencyReport, EvalError> {
    let mut out = Vec::with_capacity(profiles.len());
    for profile in profiles {
        let (usages, failures) = review_usage(bank, profile, gateway, opts)?;
        let samples: Vec<f64> = usages.iter().map(|u| u.latency_ms).collect();
        let stats = LatencyStats::from_samples(&samples)?;
        out.push(ProfileLatency {
            profile: profile.name.clone(),
            stats,
            delta_pct: None,
            failures,
        });
    }
    if let Some(baseline) = out.first().map(|p| p.stats.mean_ms) {
        for p in &mut out {
            p.delta_pct = delta_pct(baseline, p.stats.mean_ms);
        }
    }
    Ok(LatencyReport { profiles: out })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanCost {
    #[serde(serialize_with = "dp5")]
    pub usd: f64,
    #[serde(serialize_with = "dp5")]
    pub input_usd: f64,
    #[serde(serialize_with = "dp5")]
    pub output_usd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCost {
    pub profile: String,
    pub records: usize,
    #[serde(serialize_with = "dp2")]
    pub mean_input_tokens: f64,
    #[serde(serialize_with = "dp2")]
    pub mean_output_tokens: f64,
    pub mean_cost: MeanCost,
    /// Mean-cost reduction against the first profile, in percent.
    #[serde(serialize_with = "dp2_opt")]
    pub delta_pct: Option<f64>,
    pub failures: Vec<RecordFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub model_id: String,
    pub profiles: Vec<ProfileCost>,
}

/// Mean per-record review cost for each profile, priced for the gateway's
/// model. The first profile is the baseline for deltas.
pub fn cost_bench(
    bank: &Bank,
    profiles: &[PromptProfile],
    gateway: &Gateway,
    pricing: &PricingTable,
    opts: RunOptions,
) -> Result<CostReport, EvalError> {
    let mut out = Vec::with_capacity(profiles.len());
    for profile in profiles {
        let (usages, failures) = review_usage(bank, profile, gateway, opts)?;
        if usages.is_empty() {
            return Err(EvalError::EmptySample);
        }
        let n = usages.len() as f64;
        let total: LlmUsage = usages.iter().copied().sum();
        let mean_input_tokens = total.input_tokens as f64 / n;
        let mean_output_tokens = total.output_tokens as f64 / n;
        let est = pricing.estimate_mean(gateway.model_id(), mean_input_tokens, mean_output_tokens)?;
        out.push(ProfileCost {
            profile: profile.name.clone(),
            records: usages.len(),
            mean_input_tokens,
            mean_output_tokens,
            mean_cost: MeanCost {
                usd: est.usd,
                input_usd: est.input_usd,
                output_usd: est.output_usd,
            },
            delta_pct: None,
            failures,
        });
    }
    if let Some(baseline) = out.first().map(|p| p.mean_cost.usd) {
        for p in &mut out {
            p.delta_pct = delta_pct(baseline, p.mean_cost.usd);
        }
    }
    Ok(CostReport {
        model_id: gateway.model_id().to_string(),
        profiles: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_samples() {
        let s = LatencyStats::from_samples(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!((s.count, s.mean_ms, s.min_ms, s.max_ms), (3, 2.0, 1.0, 3.0));
        assert_eq!((s.p50_ms, s.p90_ms), (2.0, 3.0));
    }

    #[test]
    fn empty_sample() {
        assert!(matches!(LatencyStats::from_samples(&[]), Err(EvalError::EmptySample)));
    }

    #[test]
    fn nearest_rank_of_ten() {
        let xs: Vec<f64> = (1..=10).map(f64::from).collect();
        let s = LatencyStats::from_samples(&xs).unwrap();
        assert_eq!((s.p50_ms, s.p90_ms), (5.0, 9.0));
        assert!(s.min_ms <= s.p50_ms && s.p50_ms <= s.p90_ms && s.p90_ms <= s.max_ms);
    }
}
