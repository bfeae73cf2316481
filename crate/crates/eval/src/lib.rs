//! Evaluation harness: per-error-type failure rates of the correctness
//! judge, review latency statistics and per-call cost comparison between
//! prompt profiles.

mod bench;
mod fixed;
mod rates;
mod report;

use codetutor_core::gateway::CostError;

pub use bench::{
    cost_bench, evaluate_submissions, latency_bench, review_usage, CostReport, LatencyReport, LatencyStats, MeanCost,
    ProfileCost, ProfileLatency, RecordFailure, RunOptions,
};
pub use rates::{delta_pct, failure_rate, rate, EvalRecord, FailureRateReport, TypeRate};
pub use report::{emit_report, render_report, Format, Report};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("record {0} has no error_type label")]
    MissingLabel(usize),
    #[error("no successful samples to summarise")]
    EmptySample,
    #[error("cannot write report {path}: {reason}")]
    FileUnwritable { path: String, reason: String },
    #[error("cannot render report: {0}")]
    Render(String),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}
