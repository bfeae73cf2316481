use std::io::Write;
use std::process::{Command, Stdio};

use crate::bank::Exercise;

use super::{CorrectnessVerdict, VerdictState};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("could not stage submission: {0}")]
    Io(#[from] std::io::Error),
    #[error("interpreter command `{cmd}` could not be started: {source}")]
    Spawn { cmd: String, source: std::io::Error },
}

/// Outcome of running a submission against the exercise's example pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCheck {
    pub state: VerdictState,
    /// Index of the first failing pair, if any.
    pub failed_case: Option<usize>,
}

impl OracleCheck {
    /// Whether the oracle and the judge agree on pass/fail. A judge `Wrong`
    /// may rest on strictness rules, so only `Correct` versus not is compared.
    pub fn agrees_with(&self, verdict: &CorrectnessVerdict) -> bool {
        (self.state == VerdictState::Correct) == (verdict.state == VerdictState::Correct)
    }
}

/// Executes submissions with a real interpreter and compares their output to
/// the expected examples, e.g. `python3 {source}`.
///
/// `{source}` in the command is replaced by the path of a temporary file
/// holding the code; each example input is fed on stdin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCaseOracle {
    pub command: String,
}

fn normalize(output: &str) -> String {
    output
        .lines()
        .map(str::trim_end)
        .collect::<Vec<_>>()
        .join("\n")
        .trim_end()
        .to_string()
}

impl TestCaseOracle {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
        }
    }

    pub fn check(&self, exercise: &Exercise, code: &str) -> Result<OracleCheck, OracleError> {
        let mut file = tempfile::Builder::new().suffix(".py").tempfile()?;
        file.write_all(code.as_bytes())?;
        file.flush()?;
        let cmd = self.command.replace("{source}", &file.path().display().to_string());

        for (i, (input, expected)) in exercise.io_pairs().enumerate() {
            let mut child = Command::new("sh")
                .arg("-c")
                .arg(&cmd)
                .stdin(Stdio::piped())
                .stdout(Stdio::piped())
                .stderr(Stdio::piped())
                .spawn()
                .map_err(|source| OracleError::Spawn {
                    cmd: cmd.clone(),
                    source,
                })?;
            if let Some(mut stdin) = child.stdin.take() {
                let _ = stdin.write_all(input.as_bytes());
                let _ = stdin.write_all(b"\n");
            }
            let output = child.wait_with_output()?;
            if !output.status.success() {
                return Ok(OracleCheck {
                    state: VerdictState::Error,
                    failed_case: Some(i),
                });
            }
            if normalize(&String::from_utf8_lossy(&output.stdout)) != normalize(expected) {
                return Ok(OracleCheck {
                    state: VerdictState::Wrong,
                    failed_case: Some(i),
                });
            }
        }
        Ok(OracleCheck {
            state: VerdictState::Correct,
            failed_case: None,
        })
    }

    /// Runs the oracle and logs a warning when it disagrees with `verdict`.
    pub fn cross_check(&self, exercise: &Exercise, code: &str, verdict: &CorrectnessVerdict) -> Option<OracleCheck> {
        match self.check(exercise, code) {
            Ok(check) => {
                if !check.agrees_with(verdict) {
                    log::warn!(
                        "oracle disagrees on {}: judge {:?}, oracle {:?}",
                        exercise.id,
                        verdict.state,
                        check.state
                    );
                }
                Some(check)
            }
            Err(err) => {
                log::warn!("oracle unavailable: {err}");
                None
            }
        }
    }
}
