//! `{{name}}` placeholder substitution and code fencing.

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemplateError {
    #[error("template placeholder `{0}` has no value")]
    PlaceholderUnresolved(String),
}

/// Substitutes every `{{name}}` in `template` with `lookup(name)`.
///
/// Substitution is single-pass: braces inside substituted values are never
/// re-expanded. A `{{` without a closing `}}` is kept literally.
pub fn render<'v>(template: &str, lookup: impl Fn(&str) -> Option<&'v str>) -> Result<String, TemplateError> {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find("{{") {
        out.push_str(&rest[..open]);
        let after = &rest[open + 2..];
        let Some(close) = after.find("}}") else {
            out.push_str(&rest[open..]);
            return Ok(out);
        };
        let name = after[..close].trim();
        let value = lookup(name).ok_or_else(|| TemplateError::PlaceholderUnresolved(name.to_string()))?;
        out.push_str(value);
        rest = &after[close + 2..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Wraps `body` in a fenced block whose backtick run is longer than any run
/// inside `body`, so embedded fences cannot terminate it early.
pub fn fence(body: &str, lang: &str) -> String {
    let longest = body.split(|c| c != '`').map(str::len).max().unwrap_or(0);
    let ticks = "`".repeat(longest.max(2) + 1);
    let body = body.trim_end_matches(['\n', '\r']);
    format!("{ticks}{lang}\n{body}\n{ticks}")
}
