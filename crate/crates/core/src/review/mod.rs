//! Code review module: role-setting, review-necessity (RNP) and
//! review-comment (RCG) prompts, response parsing and leak redaction.

mod parse;
mod profile;
mod redact;
mod render;

use serde::{Deserialize, Serialize};

use crate::bank::Exercise;
use crate::gateway::{Gateway, GatewayError, LlmUsage};
use crate::template::TemplateError;
use crate::validate::{strip_comments, ValidationReport, Validator};

pub use parse::{parse_review_response, parse_rnp_response, FixLine, ParsedReview, RnpVerdict, UnparseableVerdict};
pub use profile::{check_improvement, Locale, ProfileError, PromptProfile, RcgSection, SectionName};
pub use redact::{fenced_blocks, leak_similarity, redact_solution_leak, FencedBlock, RedactionReport, WITHHELD};
pub use render::{render_io_examples, render_rcg_prompt, render_rnp_prompt, RenderedPrompt, ReviewRequest};

/// Body returned when the necessity check says no review is needed.
pub const LOOKS_GOOD: &str = "Looks good! Nothing in your code needs fixing right now. Keep it up!";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewComment {
    pub body_markdown: String,
    pub fix_lines: Vec<FixLine>,
    /// Annotations the model placed on lines that do not exist.
    pub dropped_annotations: Vec<FixLine>,
    pub redaction: RedactionReport,
    pub usage: LlmUsage,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReviewOutcome {
    EmptySubmission,
    Invalid(ValidationReport),
    LooksGood(ReviewComment),
    Reviewed(ReviewComment),
}

impl ReviewOutcome {
    pub fn comment(&self) -> Option<&ReviewComment> {
        match self {
            ReviewOutcome::LooksGood(c) | ReviewOutcome::Reviewed(c) => Some(c),
            _ => None,
        }
    }

    pub fn usage(&self) -> LlmUsage {
        self.comment().map(|c| c.usage).unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    Rnp,
    Rcg,
    Judge,
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{stage:?} call failed: {source}")]
    Gateway {
        stage: Stage,
        #[source]
        source: GatewayError,
    },
    #[error(transparent)]
    Template(#[from] TemplateError),
}

/// What remains of a submission after the pre-LLM gate.
pub(crate) enum Gate {
    Proceed,
    Empty,
    Invalid(ValidationReport),
}

/// Empty check plus local validation. Ungated profiles always proceed.
pub(crate) fn gate(raw: &str, stripped: &str, profile: &PromptProfile, validator: &Validator) -> Gate {
    if !profile.gate_submissions {
        return Gate::Proceed;
    }
    if raw.trim().is_empty() || stripped.trim().is_empty() {
        return Gate::Empty;
    }
    let report = validator.validate(stripped);
    if report.is_valid() {
        Gate::Proceed
    } else {
        Gate::Invalid(report)
    }
}

pub fn run_review_pipeline(
    exercise: &Exercise,
    submitted_code_raw: &str,
    profile: &PromptProfile,
    gateway: &Gateway,
) -> Result<ReviewOutcome, PipelineError> {
    run_review_pipeline_with(exercise, submitted_code_raw, profile, gateway, &Validator::default())
}

/// Review flow: gate, RNP call, then (only if a review is needed) the RCG
/// call, parsing and redaction. Under a gated profile empty or invalid code
/// never reaches the gateway.
pub fn run_review_pipeline_with(
    exercise: &Exercise,
    submitted_code_raw: &str,
    profile: &PromptProfile,
    gateway: &Gateway,
    validator: &Validator,
) -> Result<ReviewOutcome, PipelineError> {
    let code = strip_comments(submitted_code_raw);
    match gate(submitted_code_raw, &code, profile, validator) {
        Gate::Empty => return Ok(ReviewOutcome::EmptySubmission),
        Gate::Invalid(report) => return Ok(ReviewOutcome::Invalid(report)),
        Gate::Proceed => {}
    }

    let req = ReviewRequest {
        exercise,
        submitted_code: &code,
        profile,
    };
    let mut usage = LlmUsage::default();

    let rnp = render_rnp_prompt(&req)?;
    let rnp_request = gateway.request(
        rnp.system,
        rnp.user,
        profile.rnp_max_output_tokens,
        profile.temperature,
        profile.top_p,
    );
    let mut verdict = None;
    for _ in 0..2 {
        let reply = gateway.send(&rnp_request).map_err(|source| PipelineError::Gateway {
            stage: Stage::Rnp,
            source,
        })?;
        usage += reply.usage;
        match parse_rnp_response(&reply.text) {
            Ok(v) => {
                verdict = Some(v);
                break;
            }
            Err(err) => log::warn!("{err}"),
        }
    }
    // fail open: an unreadable necessity answer still gets a review
    if verdict.unwrap_or(RnpVerdict::NeedsReview) == RnpVerdict::NoReviewNeeded {
        return Ok(ReviewOutcome::LooksGood(ReviewComment {
            body_markdown: LOOKS_GOOD.to_string(),
            fix_lines: Vec::new(),
            dropped_annotations: Vec::new(),
            redaction: RedactionReport::default(),
            usage,
        }));
    }

    let rcg = render_rcg_prompt(&req)?;
    let rcg_request = gateway.request(
        rcg.system,
        rcg.user,
        profile.max_output_tokens,
        profile.temperature,
        profile.top_p,
    );
    let reply = gateway.send(&rcg_request).map_err(|source| PipelineError::Gateway {
        stage: Stage::Rcg,
        source,
    })?;
    usage += reply.usage;

    let parsed = parse_review_response(&reply.text, &code);
    let (body_markdown, redaction) =
        redact_solution_leak(&parsed.body_markdown, &exercise.solution, profile.leak_threshold);
    Ok(ReviewOutcome::Reviewed(ReviewComment {
        body_markdown,
        fix_lines: parsed.fix_lines,
        dropped_annotations: parsed.dropped,
        redaction,
        usage,
    }))
}
