use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("model reply is not a recognised verdict: {0:?}")]
pub struct UnparseableVerdict(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RnpVerdict {
    NeedsReview,
    NoReviewNeeded,
}

/// Reads the leading `yes`/`no` token of the first non-empty line, ignoring
/// case, surrounding markdown emphasis and trailing punctuation.
pub fn parse_rnp_response(raw: &str) -> Result<RnpVerdict, UnparseableVerdict> {
    let first = raw.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    let token: String = first
        .trim_start_matches(|c: char| !c.is_alphanumeric())
        .chars()
        .take_while(|c| c.is_alphanumeric())
        .collect::<String>()
        .to_lowercase();
    match token.as_str() {
        "yes" => Ok(RnpVerdict::NeedsReview),
        "no" => Ok(RnpVerdict::NoReviewNeeded),
        _ => Err(UnparseableVerdict(raw.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixLine {
    /// 1-based line in the submitted code.
    pub line: usize,
    pub hint: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ParsedReview {
    pub body_markdown: String,
    pub fix_lines: Vec<FixLine>,
    /// Annotations whose line number falls outside the submission.
    pub dropped: Vec<FixLine>,
}

/// ATX heading level and text, if `line` is a heading.
fn heading(line: &str) -> Option<(usize, &str)> {
    let trimmed = line.trim_start();
    if line.len() - trimmed.len() > 3 {
        return None;
    }
    let level = trimmed.chars().take_while(|&c| c == '#').count();
    if !(1..=6).contains(&level) {
        return None;
    }
    let rest = &trimmed[level..];
    if !rest.is_empty() && !rest.starts_with([' ', '\t']) {
        return None;
    }
    Some((level, rest.trim().trim_end_matches('#').trim()))
}

/// Fence marker (char, run length) opening or closing a code block.
fn fence_marker(line: &str) -> Option<(char, usize)> {
    let trimmed = line.trim_start();
    if line.len() - trimmed.len() > 3 {
        return None;
    }
    let c = trimmed.chars().next().filter(|&c| c == '`' || c == '~')?;
    let run = trimmed.chars().take_while(|&x| x == c).count();
    (run >= 3).then_some((c, run))
}

/// Tracks whether a line sits inside a fenced code block.
#[derive(Default)]
pub(crate) struct FenceTracker {
    open: Option<(char, usize)>,
}

impl FenceTracker {
    /// Feeds one line; returns true when the line is part of a fenced block
    /// (fence lines included).
    pub(crate) fn feed(&mut self, line: &str) -> bool {
        match (self.open, fence_marker(line)) {
            (None, Some(marker)) => {
                self.open = Some(marker);
                true
            }
            (Some((c, n)), Some((c2, n2))) if c == c2 && n2 >= n && is_bare_fence(line) => {
                self.open = None;
                true
            }
            (Some(_), _) => true,
            (None, None) => false,
        }
    }

    pub(crate) fn is_open(&self) -> bool {
        self.open.is_some()
    }
}

fn is_bare_fence(line: &str) -> bool {
    let t = line.trim();
    let c = t.chars().next().unwrap_or(' ');
    t.chars().all(|x| x == c)
}

/// `- line <n>: <hint>` (also `*`/`+` bullets, any case for "line").
fn fix_bullet(line: &str) -> Option<(usize, String)> {
    let rest = line.trim().strip_prefix(['-', '*', '+'])?.trim_start();
    let word = rest.get(..4)?;
    if !word.eq_ignore_ascii_case("line") {
        return None;
    }
    let rest = rest[4..].trim_start();
    let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
    let n: usize = digits.parse().ok()?;
    let rest = rest[digits.len()..].trim_start().strip_prefix(':')?;
    Some((n, rest.trim().to_string()))
}

/// Splits a review into prose and `Code to fix` annotations.
///
/// Every section whose heading contains "code to fix" (any case) is removed
/// from the body; its `- line <n>: <hint>` bullets become fix lines when
/// `n` lies within `submitted_code`, and are reported as dropped otherwise.
pub fn parse_review_response(raw: &str, submitted_code: &str) -> ParsedReview {
    let line_count = submitted_code.lines().count();
    let mut parsed = ParsedReview::default();
    let mut body: Vec<&str> = Vec::new();
    let mut fences = FenceTracker::default();
    let mut section_level: Option<usize> = None;

    for line in raw.lines() {
        let in_fence = fences.feed(line);
        if !in_fence {
            if let Some((level, text)) = heading(line) {
                if section_level.is_some_and(|open| level <= open) {
                    section_level = None;
                }
                if text.to_lowercase().contains("code to fix") {
                    section_level = Some(level);
                    continue;
                }
            }
        }
        if section_level.is_some() {
            if let Some((n, hint)) = (!in_fence).then(|| fix_bullet(line)).flatten() {
                let entry = FixLine { line: n, hint };
                if (1..=line_count).contains(&n) {
                    parsed.fix_lines.push(entry);
                } else {
                    parsed.dropped.push(entry);
                }
            }
            continue;
        }
        body.push(line);
    }

    parsed.body_markdown = body.join("\n").trim().to_string();
    parsed
}
