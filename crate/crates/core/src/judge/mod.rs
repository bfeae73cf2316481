//! Code correctness check: the LLM acts as the compiler and grader, and
//! answers with one of three states.
//!
//! Reply grammar expected from the model:
//!
//! ```text
//! VERDICT: CORRECT | WRONG | ERROR
//! TYPE: UnnecessaryCode | RequirementNotMet | HardCoding | ComputationError   (optional)
//! <one-sentence reason>
//! ```

mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bank::Exercise;
use crate::gateway::{Gateway, LlmUsage};
use crate::review::{
    gate, redact_solution_leak, render_io_examples, Gate, PipelineError, PromptProfile, Stage, UnparseableVerdict,
};
use crate::template::{fence, render, TemplateError};
use crate::validate::{strip_comments, ValidationReport, Validator};

pub use oracle::{OracleCheck, OracleError, TestCaseOracle};

pub const UNPARSEABLE_REASON: &str = "judge response unparseable";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorType {
    UnnecessaryCode,
    RequirementNotMet,
    HardCoding,
    ComputationError,
}

impl ErrorType {
    pub const ALL: [ErrorType; 4] = [
        ErrorType::UnnecessaryCode,
        ErrorType::RequirementNotMet,
        ErrorType::HardCoding,
        ErrorType::ComputationError,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorType::UnnecessaryCode => "UnnecessaryCode",
            ErrorType::RequirementNotMet => "RequirementNotMet",
            ErrorType::HardCoding => "HardCoding",
            ErrorType::ComputationError => "ComputationError",
        }
    }
}

impl fmt::Display for ErrorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ErrorType {
    type Err = String;

    /// Accepts the canonical names plus spaced, snake or kebab spellings.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let squashed: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .collect::<String>()
            .to_lowercase();
        ErrorType::ALL
            .into_iter()
            .find(|t| t.as_str().to_lowercase() == squashed)
            .ok_or_else(|| format!("unknown error type `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictState {
    /// Runs and satisfies the exercise.
    Correct,
    /// Runs but gives a wrong answer or breaks the strictness rules.
    Wrong,
    /// Does not run.
    Error,
}

impl VerdictState {
    pub const ALL: [VerdictState; 3] = [VerdictState::Correct, VerdictState::Wrong, VerdictState::Error];

    fn wire_name(self) -> &'static str {
        match self {
            VerdictState::Correct => "CORRECT",
            VerdictState::Wrong => "WRONG",
            VerdictState::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectnessVerdict {
    pub state: VerdictState,
    pub reason: String,
    /// Absent whenever `state` is `Correct`.
    pub error_type: Option<ErrorType>,
}

impl CorrectnessVerdict {
    pub fn new(state: VerdictState, reason: impl Into<String>, error_type: Option<ErrorType>) -> Self {
        Self {
            state,
            reason: reason.into(),
            error_type: error_type.filter(|_| state != VerdictState::Correct),
        }
    }

    /// The wire form the judge prompt asks the model to produce.
    pub fn to_wire(&self) -> String {
        let mut out = format!("VERDICT: {}", self.state.wire_name());
        if let Some(t) = self.error_type {
            out.push_str(&format!("\nTYPE: {t}"));
        }
        if !self.reason.is_empty() {
            out.push('\n');
            out.push_str(&self.reason);
        }
        out
    }
}

const JUDGE_TEMPLATE: &str = "\
## Role
Python interpreter and strict grader for an introductory programming course.

## Exercise
{{exercise_description}}

## Input/Output Examples
{{io_examples}}

## Reference Solution
{{solution}}

## Submitted Code
{{submitted_code}}

## Grading Rules
- Run the submitted code mentally on every input example and compare with the expected output.
- Single-quoted and double-quoted strings are equivalent; accept either.
- Be strict even when the outputs match. Flag these error types:
  - UnnecessaryCode: code not needed to solve the exercise was added.
  - RequirementNotMet: a stated requirement is ignored or solved differently.
  - HardCoding: outputs are written literally from the examples instead of computed.
  - ComputationError: the logic computes a wrong value.

## Answer Format
First line exactly one of `VERDICT: CORRECT`, `VERDICT: WRONG`, `VERDICT: ERROR`.
- CORRECT: runs and meets every requirement.
- WRONG: runs, but the answer is wrong or a grading rule is broken.
- ERROR: does not run.
For WRONG or ERROR, optional second line `TYPE: <error type name from the grading rules>`.
Last line: one-sentence reason. No corrected code.";

/// Prompt that makes the model act as compiler and strict grader.
pub fn render_judge_prompt(exercise: &Exercise, submitted_code: &str) -> Result<String, TemplateError> {
    let description = exercise.description.trim().to_string();
    let io_examples = render_io_examples(exercise);
    let solution = fence(&exercise.solution, "python");
    let code = fence(submitted_code, "python");
    render(JUDGE_TEMPLATE, |name| match name {
        "exercise_description" => Some(description.as_str()),
        "io_examples" => Some(io_examples.as_str()),
        "solution" => Some(solution.as_str()),
        "submitted_code" => Some(code.as_str()),
        _ => None,
    })
}

const JUDGE_SYSTEM: &str = "Strict Python grader. Reply only in the requested format.";

fn strip_decoration(line: &str) -> &str {
    line.trim()
        .trim_matches(|c: char| c == '*' || c == '`' || c == '_')
        .trim()
}

fn field<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let line = strip_decoration(line);
    let (head, rest) = line.split_once(':')?;
    head.trim().eq_ignore_ascii_case(key).then(|| strip_decoration(rest))
}

pub fn parse_judge_response(raw: &str) -> Result<CorrectnessVerdict, UnparseableVerdict> {
    let unparseable = || UnparseableVerdict(raw.to_string());
    let mut lines = raw.lines().filter(|l| !l.trim().is_empty());
    let first = lines.next().ok_or_else(unparseable)?;
    let value = field(first, "verdict").ok_or_else(unparseable)?;
    let word: String = value.chars().take_while(|c| c.is_alphabetic()).collect();
    let state = VerdictState::ALL
        .into_iter()
        .find(|s| s.wire_name().eq_ignore_ascii_case(&word))
        .ok_or_else(unparseable)?;

    let mut error_type = None;
    let mut reason = Vec::new();
    for line in lines {
        match field(line, "type") {
            Some(t) if error_type.is_none() && reason.is_empty() => error_type = t.parse().ok(),
            _ => reason.push(line.trim_end()),
        }
    }
    Ok(CorrectnessVerdict::new(state, reason.join("\n"), error_type))
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubmissionOutcome {
    EmptySubmission,
    Invalid(ValidationReport),
    Judged {
        verdict: CorrectnessVerdict,
        usage: LlmUsage,
    },
}

impl SubmissionOutcome {
    pub fn usage(&self) -> LlmUsage {
        match self {
            SubmissionOutcome::Judged { usage, .. } => *usage,
            _ => LlmUsage::default(),
        }
    }
}

pub fn run_submission_flow(
    exercise: &Exercise,
    submitted_code_raw: &str,
    profile: &PromptProfile,
    gateway: &Gateway,
) -> Result<SubmissionOutcome, PipelineError> {
    run_submission_flow_with(exercise, submitted_code_raw, profile, gateway, &Validator::default())
}

/// Gated profiles strip comments and validate first, and skip the judge on
/// empty or invalid code. Ungated profiles send the raw submission straight
/// to the judge.
pub fn run_submission_flow_with(
    exercise: &Exercise,
    submitted_code_raw: &str,
    profile: &PromptProfile,
    gateway: &Gateway,
    validator: &Validator,
) -> Result<SubmissionOutcome, PipelineError> {
    let stripped = strip_comments(submitted_code_raw);
    let code = match gate(submitted_code_raw, &stripped, profile, validator) {
        Gate::Empty => return Ok(SubmissionOutcome::EmptySubmission),
        Gate::Invalid(report) => return Ok(SubmissionOutcome::Invalid(report)),
        Gate::Proceed if profile.gate_submissions => stripped.as_str(),
        Gate::Proceed => submitted_code_raw,
    };

    let prompt = render_judge_prompt(exercise, code)?;
    let request = gateway.request(
        JUDGE_SYSTEM,
        prompt,
        profile.max_output_tokens,
        profile.temperature,
        profile.top_p,
    );
    let mut usage = LlmUsage::default();
    for _ in 0..2 {
        let reply = gateway.send(&request).map_err(|source| PipelineError::Gateway {
            stage: Stage::Judge,
            source,
        })?;
        usage += reply.usage;
        match parse_judge_response(&reply.text) {
            Ok(mut verdict) => {
                let (reason, _) = redact_solution_leak(&verdict.reason, &exercise.solution, profile.leak_threshold);
                verdict.reason = reason;
                return Ok(SubmissionOutcome::Judged { verdict, usage });
            }
            Err(err) => log::warn!("{err}"),
        }
    }
    Ok(SubmissionOutcome::Judged {
        verdict: CorrectnessVerdict::new(VerdictState::Error, UNPARSEABLE_REASON, None),
        usage,
    })
}
