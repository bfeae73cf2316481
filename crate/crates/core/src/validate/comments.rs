use super::lexer::{tokenize, TokenKind};

/// Removes Python comments from `source`.
///
/// Everything from a `#` outside a string literal to the end of its line is
/// dropped along with the whitespace before it. Lines left blank by the
/// removal disappear entirely; lines without comments are kept byte for byte.
pub fn strip_comments(source: &str) -> String {
    let comment_starts: Vec<usize> = tokenize(source)
        .into_iter()
        .filter(|t| t.kind == TokenKind::Comment)
        .map(|t| t.start)
        .collect();
    if comment_starts.is_empty() {
        return source.to_string();
    }

    let mut out = String::with_capacity(source.len());
    let mut next_comment = comment_starts.iter().peekable();
    let mut line_start = 0;
    for raw_line in source.split_inclusive('\n') {
        let line_end = line_start + raw_line.len();
        let comment_at = next_comment
            .next_if(|&&start| start < line_end)
            .map(|&start| start - line_start);

        match comment_at {
            None => out.push_str(raw_line),
            Some(offset) => {
                let code = raw_line[..offset].trim_end();
                if !code.trim_start().is_empty() {
                    out.push_str(code);
                    out.push_str(line_ending(raw_line));
                }
            }
        }
        line_start = line_end;
    }
    out
}

fn line_ending(line: &str) -> &'static str {
    if line.ends_with("\r\n") {
        "\r\n"
    } else if line.ends_with('\n') {
        "\n"
    } else {
        ""
    }
}

/// Comparison key for duplicate detection: comments stripped, trailing
/// whitespace trimmed on every line, runs of blank lines collapsed and
/// leading/trailing blank lines dropped.
pub fn normalize_for_dedup(source: &str) -> String {
    let stripped = strip_comments(source);
    let mut lines: Vec<&str> = Vec::new();
    for line in stripped.lines().map(str::trim_end) {
        if line.is_empty() && lines.last().is_none_or(|l| l.is_empty()) {
            continue;
        }
        lines.push(line);
    }
    while lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    lines.join("\n")
}
