use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::validate::{lexer, strip_comments};

use super::parse::FenceTracker;

pub const WITHHELD: &str = "[code withheld — try it yourself]";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RedactionReport {
    pub leaked: bool,
    pub removed_blocks: usize,
    pub max_similarity: f64,
}

impl Default for RedactionReport {
    fn default() -> Self {
        Self {
            leaked: false,
            removed_blocks: 0,
            max_similarity: 0.0,
        }
    }
}

/// A fenced code block: its content and the line span it occupies
/// (fences included, end exclusive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FencedBlock {
    pub content: String,
    pub lines: std::ops::Range<usize>,
}

/// Finds fenced blocks in markdown. An unclosed fence runs to the end.
pub fn fenced_blocks(markdown: &str) -> Vec<FencedBlock> {
    let lines: Vec<&str> = markdown.lines().collect();
    let mut blocks = Vec::new();
    let mut tracker = FenceTracker::default();
    let mut start = None;
    for (i, line) in lines.iter().enumerate() {
        let was_open = tracker.is_open();
        tracker.feed(line);
        match (was_open, tracker.is_open()) {
            (false, true) => start = Some(i),
            (true, false) => {
                if let Some(s) = start.take() {
                    blocks.push(FencedBlock {
                        content: lines[s + 1..i].join("\n"),
                        lines: s..i + 1,
                    });
                }
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        blocks.push(FencedBlock {
            content: lines[s + 1..].join("\n"),
            lines: s..lines.len(),
        });
    }
    blocks
}

fn code_tokens(source: &str) -> Vec<String> {
    lexer::significant(&strip_comments(source))
        .map(|t| t.text.to_string())
        .collect()
}

/// Token 3-grams. Sequences shorter than three tokens form a single gram.
fn trigrams(tokens: &[String]) -> HashSet<Vec<String>> {
    match tokens.len() {
        0 => HashSet::new(),
        1 | 2 => HashSet::from([tokens.to_vec()]),
        _ => tokens.windows(3).map(<[String]>::to_vec).collect(),
    }
}

/// Jaccard similarity of the token 3-gram sets of two code fragments,
/// after comment stripping. Whitespace never affects tokens.
pub fn leak_similarity(block: &str, solution: &str) -> f64 {
    let a = trigrams(&code_tokens(block));
    let b = trigrams(&code_tokens(solution));
    let union = a.union(&b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

/// Replaces every fenced block whose similarity to `solution` reaches
/// `threshold` with [`WITHHELD`].
pub fn redact_solution_leak(body: &str, solution: &str, threshold: f64) -> (String, RedactionReport) {
    let blocks = fenced_blocks(body);
    let mut report = RedactionReport::default();
    let mut withheld = Vec::new();
    for block in &blocks {
        let sim = leak_similarity(&block.content, solution);
        report.max_similarity = report.max_similarity.max(sim);
        if sim >= threshold {
            withheld.push(block.lines.clone());
        }
    }
    report.removed_blocks = withheld.len();
    report.leaked = report.removed_blocks > 0;
    if withheld.is_empty() {
        return (body.to_string(), report);
    }

    let mut out: Vec<&str> = Vec::new();
    let mut spans = withheld.iter().peekable();
    for (i, line) in body.lines().enumerate() {
        match spans.peek() {
            Some(span) if span.contains(&i) => {
                if i == span.start {
                    out.push(WITHHELD);
                }
                if i + 1 == span.end {
                    spans.next();
                }
            }
            _ => out.push(line),
        }
    }
    (out.join("\n"), report)
}
