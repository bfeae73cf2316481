//! Local structural check of learner source, run before any LLM call.
//!
//! The checker is an approximation of Python's grammar, not a parser. It
//! rejects code that is obviously broken (unbalanced brackets, unterminated
//! strings, block headers without a colon, inconsistent indentation) and
//! lets everything else through; the LLM judge catches the rest.

mod comments;
mod external;
pub mod lexer;

use serde::{Deserialize, Serialize};

pub use comments::{normalize_for_dedup, strip_comments};
pub use external::{ExternalValidator, ExternalValidatorError};

use lexer::{tokenize, Token, TokenKind};

/// Keywords that open a block and must end their logical line with `:`.
const BLOCK_KEYWORDS: &[&str] = &[
    "if", "elif", "else", "for", "while", "def", "class", "try", "except", "finally", "with",
];

const TAB_WIDTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValidationErrorKind {
    EmptySource,
    UnbalancedDelimiter,
    UnterminatedString,
    MissingColon,
    BadIndentation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Valid,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub kind: ValidationErrorKind,
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub verdict: Verdict,
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    /// Builds a report whose verdict follows from the findings, sorted by line.
    pub fn from_findings(mut findings: Vec<Finding>) -> Self {
        findings.sort_by_key(|f| f.line);
        let verdict = if findings.is_empty() {
            Verdict::Valid
        } else {
            Verdict::Invalid
        };
        Self { verdict, findings }
    }

    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }

    pub fn kinds(&self) -> Vec<(ValidationErrorKind, usize)> {
        self.findings.iter().map(|f| (f.kind, f.line)).collect()
    }
}

fn finding(kind: ValidationErrorKind, line: usize, message: impl Into<String>) -> Finding {
    Finding {
        kind,
        line,
        message: message.into(),
    }
}

/// Which check gates submissions: the built-in structural rules or an
/// external compile command.
#[derive(Debug, Clone, Default)]
pub enum Validator {
    #[default]
    Structural,
    External(ExternalValidator),
}

impl Validator {
    pub fn validate(&self, source: &str) -> ValidationReport {
        match self {
            Validator::Structural => validate_source(source),
            Validator::External(cmd) => cmd.validate(source).unwrap_or_else(|err| {
                log::warn!("external validator failed, falling back to structural check: {err}");
                validate_source(source)
            }),
        }
    }
}

/// Runs the structural rule set over `source`.
pub fn validate_source(source: &str) -> ValidationReport {
    let tokens = tokenize(source);
    if tokens.iter().all(Token::is_trivia) {
        return ValidationReport::from_findings(vec![finding(
            ValidationErrorKind::EmptySource,
            1,
            "the code is empty",
        )]);
    }

    let line_starts = line_start_offsets(source);
    let mut findings = Vec::new();
    let mut brackets: Vec<(char, usize)> = Vec::new();
    let mut indents: Vec<usize> = vec![0];
    let mut logical = LogicalLine::default();
    let mut at_line_start = true;
    let mut opens_block = false;
    let mut saw_unterminated = false;

    for tok in &tokens {
        match tok.kind {
            TokenKind::Comment | TokenKind::Continuation => continue,
            TokenKind::Newline => {
                if brackets.is_empty() {
                    if logical.started {
                        opens_block = logical.ends_with_colon || (logical.header_line.is_some() && !logical.has_colon);
                    }
                    logical.finish(&mut findings);
                    at_line_start = true;
                }
                continue;
            }
            _ => {}
        }

        if at_line_start {
            at_line_start = false;
            let width = indent_width(source, line_starts[tok.line - 1]);
            check_indent(&mut indents, width, opens_block, tok.line, &mut findings);
            logical = LogicalLine::start(tok);
        }
        logical.ends_with_colon = false;

        match tok.kind {
            TokenKind::String { terminated: false } => {
                saw_unterminated = true;
                logical.unterminated = true;
                findings.push(finding(
                    ValidationErrorKind::UnterminatedString,
                    tok.line,
                    "string literal is never closed",
                ));
            }
            TokenKind::Op => match tok.text {
                "(" | "[" | "{" => brackets.push((tok.text.chars().next().unwrap_or('('), tok.line)),
                ")" | "]" | "}" => {
                    let close = tok.text.chars().next().unwrap_or(')');
                    match brackets.pop() {
                        Some((open, _)) if matching(open) == close => {}
                        Some((open, open_line)) => findings.push(finding(
                            ValidationErrorKind::UnbalancedDelimiter,
                            tok.line,
                            format!("'{close}' does not match '{open}' opened on line {open_line}"),
                        )),
                        None => findings.push(finding(
                            ValidationErrorKind::UnbalancedDelimiter,
                            tok.line,
                            format!("'{close}' has no matching opening bracket"),
                        )),
                    }
                }
                ":" if brackets.is_empty() => {
                    logical.has_colon = true;
                    logical.ends_with_colon = true;
                }
                _ => {}
            },
            _ => {}
        }
    }

    if brackets.is_empty() {
        logical.finish(&mut findings);
    } else if !saw_unterminated {
        for (open, line) in brackets {
            findings.push(finding(
                ValidationErrorKind::UnbalancedDelimiter,
                line,
                format!("'{open}' is never closed"),
            ));
        }
    }

    ValidationReport::from_findings(findings)
}

/// State for the logical line currently being scanned.
#[derive(Debug, Default)]
struct LogicalLine {
    started: bool,
    header_line: Option<usize>,
    has_colon: bool,
    ends_with_colon: bool,
    unterminated: bool,
}

impl LogicalLine {
    fn start(first: &Token<'_>) -> Self {
        let is_header = first.kind == TokenKind::Name && BLOCK_KEYWORDS.contains(&first.text);
        Self {
            started: true,
            header_line: is_header.then_some(first.line),
            ..Self::default()
        }
    }

    fn finish(&mut self, findings: &mut Vec<Finding>) {
        if let Some(line) = self.header_line {
            if !self.has_colon && !self.unterminated {
                findings.push(finding(
                    ValidationErrorKind::MissingColon,
                    line,
                    "block statement must end with ':'",
                ));
            }
        }
        *self = Self::default();
    }
}

/// Indentation must follow an indent stack, grow only after a line ending in
/// `:` and grow whenever such a line precedes it.
fn check_indent(stack: &mut Vec<usize>, width: usize, opens_block: bool, line: usize, findings: &mut Vec<Finding>) {
    let top = *stack.last().unwrap_or(&0);
    if width > top {
        if !opens_block {
            findings.push(finding(
                ValidationErrorKind::BadIndentation,
                line,
                "unexpected indent: the previous line does not open a block",
            ));
        }
        stack.push(width);
        return;
    }
    if opens_block {
        findings.push(finding(
            ValidationErrorKind::BadIndentation,
            line,
            "expected an indented block after ':'",
        ));
    }
    while stack.last().is_some_and(|&level| level > width) {
        stack.pop();
    }
    if stack.last() != Some(&width) {
        findings.push(finding(
            ValidationErrorKind::BadIndentation,
            line,
            format!("indentation of {width} does not match any outer block"),
        ));
        stack.push(width);
    }
}

fn matching(open: char) -> char {
    match open {
        '(' => ')',
        '[' => ']',
        _ => '}',
    }
}

fn line_start_offsets(source: &str) -> Vec<usize> {
    std::iter::once(0)
        .chain(source.match_indices('\n').map(|(i, _)| i + 1))
        .collect()
}

fn indent_width(source: &str, line_start: usize) -> usize {
    let mut width = 0;
    for b in source[line_start..].bytes() {
        match b {
            b' ' => width += 1,
            b'\t' => width += TAB_WIDTH,
            b'\x0c' => width = 0,
            _ => break,
        }
    }
    width
}
