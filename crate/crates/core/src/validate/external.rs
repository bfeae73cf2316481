use std::io::Write;
use std::process::{Command, Stdio};

use super::{finding, ValidationErrorKind, ValidationReport};

#[derive(Debug, thiserror::Error)]
pub enum ExternalValidatorError {
    #[error("failed to spawn validator command `{cmd}`: {source}")]
    Spawn { cmd: String, source: std::io::Error },
    #[error("validator command I/O failed: {0}")]
    Io(#[from] std::io::Error),
}

/// Replaces the structural check with a real compile check, e.g.
/// `python3 -c "import ast,sys; ast.parse(sys.stdin.read())"`.
///
/// The command runs through `sh -c` and receives the source on stdin. Exit
/// status 0 means valid; anything else yields a single finding whose kind is
/// guessed from the first line of output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalValidator {
    pub command: String,
}

impl ExternalValidator {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
        }
    }

    pub fn validate(&self, source: &str) -> Result<ValidationReport, ExternalValidatorError> {
        if source.trim().is_empty() {
            return Ok(ValidationReport::from_findings(vec![finding(
                ValidationErrorKind::EmptySource,
                1,
                "the code is empty",
            )]));
        }
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|source| ExternalValidatorError::Spawn {
                cmd: self.command.clone(),
                source,
            })?;
        if let Some(mut stdin) = child.stdin.take() {
            // the command may exit without reading; a broken pipe is not our error
            let _ = stdin.write_all(source.as_bytes());
        }
        let output = child.wait_with_output()?;
        if output.status.success() {
            return Ok(ValidationReport::from_findings(Vec::new()));
        }

        let stdout = String::from_utf8_lossy(&output.stdout);
        let stderr = String::from_utf8_lossy(&output.stderr);
        let text = if stdout.trim().is_empty() { stderr } else { stdout };
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty())
            .unwrap_or("validator rejected the code")
            .to_string();
        let line = line_number(&text).unwrap_or(1);
        Ok(ValidationReport::from_findings(vec![finding(
            kind_from_message(&first),
            line,
            first,
        )]))
    }
}

/// Maps an interpreter error message onto the closed finding enumeration.
/// Unrecognised messages become `UnbalancedDelimiter`, the most generic
/// structural kind.
fn kind_from_message(msg: &str) -> ValidationErrorKind {
    let lower = msg.to_ascii_lowercase();
    if lower.contains("indent") {
        ValidationErrorKind::BadIndentation
    } else if lower.contains("string literal")
        || lower.contains("eol while scanning")
        || lower.contains("eof while scanning")
        || lower.contains("unterminated")
    {
        ValidationErrorKind::UnterminatedString
    } else if lower.contains("expected ':'") {
        ValidationErrorKind::MissingColon
    } else if lower.contains("empty") {
        ValidationErrorKind::EmptySource
    } else {
        ValidationErrorKind::UnbalancedDelimiter
    }
}

fn line_number(text: &str) -> Option<usize> {
    let idx = text.find("line ")?;
    let digits: String = text[idx + 5..].chars().take_while(char::is_ascii_digit).collect();
    digits.parse().ok().filter(|&n| n > 0)
}
