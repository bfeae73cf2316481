//! A small Python tokenizer.
//!
//! It knows enough about Python's lexical grammar to find string literals
//! (including prefixed and triple-quoted ones), comments, brackets and
//! explicit line continuations. It never fails: malformed input is reported
//! through token flags (`String { terminated: false }`) so callers can turn
//! it into findings.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Name,
    Number,
    String {
        terminated: bool,
    },
    Op,
    Comment,
    /// Physical end of line (`\n`). Not emitted for newlines inside strings.
    Newline,
    /// Backslash immediately followed by a newline.
    Continuation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    /// 1-based line where the token starts.
    pub line: usize,
    /// Byte offset of the token start.
    pub start: usize,
}

impl Token<'_> {
    pub fn is_trivia(&self) -> bool {
        matches!(
            self.kind,
            TokenKind::Comment | TokenKind::Newline | TokenKind::Continuation
        )
    }
}

const STRING_PREFIXES: &[&str] = &["r", "u", "b", "f", "br", "rb", "fr", "rf", "t", "tr", "rt"];

const THREE_CHAR_OPS: &[&str] = &["**=", "//=", ">>=", "<<=", "..."];
const TWO_CHAR_OPS: &[&str] = &[
    "->", ":=", "==", "!=", "<=", ">=", "**", "//", "<<", ">>", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=",
];

pub fn tokenize(src: &str) -> Vec<Token<'_>> {
    Lexer::new(src).run()
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    out: Vec<Token<'a>>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            line: 1,
            out: Vec::new(),
        }
    }

    fn peek(&self, offset: usize) -> Option<u8> {
        self.bytes.get(self.pos + offset).copied()
    }

    fn push(&mut self, kind: TokenKind, start: usize, line: usize) {
        self.out.push(Token {
            kind,
            text: &self.src[start..self.pos],
            line,
            start,
        });
    }

    fn run(mut self) -> Vec<Token<'a>> {
        while let Some(b) = self.peek(0) {
            let start = self.pos;
            match b {
                b'\n' => {
                    self.pos += 1;
                    self.push(TokenKind::Newline, start, self.line);
                    self.line += 1;
                }
                b' ' | b'\t' | b'\r' | b'\x0c' => self.pos += 1,
                b'#' => {
                    while let Some(c) = self.peek(0) {
                        if c == b'\n' {
                            break;
                        }
                        self.pos += 1;
                    }
                    // a trailing \r belongs to the line ending, not the comment
                    let mut end = self.pos;
                    if end > start && self.bytes[end - 1] == b'\r' {
                        end -= 1;
                    }
                    self.out.push(Token {
                        kind: TokenKind::Comment,
                        text: &self.src[start..end],
                        line: self.line,
                        start,
                    });
                }
                b'\\' if self.continuation_len().is_some() => {
                    let len = self.continuation_len().unwrap_or(1);
                    self.pos += len;
                    self.push(TokenKind::Continuation, start, self.line);
                    self.line += 1;
                }
                b'\'' | b'"' => self.string(start),
                b'0'..=b'9' => self.number(start),
                b'.' if matches!(self.peek(1), Some(b'0'..=b'9')) => self.number(start),
                _ if is_ident_start(self.current_char()) => self.name_or_prefixed_string(start),
                _ => self.op(start),
            }
        }
        self.out
    }

    fn current_char(&self) -> char {
        self.src[self.pos..].chars().next().unwrap_or('\0')
    }

    /// Length of `\` + line ending at the cursor, if the cursor sits on one.
    fn continuation_len(&self) -> Option<usize> {
        match (self.peek(1), self.peek(2)) {
            (Some(b'\n'), _) => Some(2),
            (Some(b'\r'), Some(b'\n')) => Some(3),
            _ => None,
        }
    }

    fn name_or_prefixed_string(&mut self, start: usize) {
        while self.pos < self.src.len() && is_ident_continue(self.current_char()) {
            self.pos += self.current_char().len_utf8();
        }
        let ident = &self.src[start..self.pos];
        if matches!(self.peek(0), Some(b'\'' | b'"')) && STRING_PREFIXES.contains(&ident.to_ascii_lowercase().as_str())
        {
            self.string(start);
        } else {
            self.push(TokenKind::Name, start, self.line);
        }
    }

    fn number(&mut self, start: usize) {
        while let Some(c) = self.peek(0) {
            let exponent_sign = matches!(c, b'+' | b'-')
                && matches!(self.bytes[self.pos - 1], b'e' | b'E')
                && !self.src[start..self.pos].starts_with("0x")
                && !self.src[start..self.pos].starts_with("0X");
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' || exponent_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.push(TokenKind::Number, start, self.line);
    }

    /// Scans a string literal whose opening quote is at the cursor. `start`
    /// may point earlier when the literal carries a prefix.
    fn string(&mut self, start: usize) {
        let quote = self.bytes[self.pos];
        let open_line = self.line;
        let triple = self.peek(1) == Some(quote) && self.peek(2) == Some(quote);
        self.pos += if triple { 3 } else { 1 };

        let mut terminated = false;
        while let Some(c) = self.peek(0) {
            match c {
                b'\\' => match (self.peek(1), self.peek(2)) {
                    (Some(b'\n'), _) => {
                        self.line += 1;
                        self.pos += 2;
                    }
                    (Some(b'\r'), Some(b'\n')) => {
                        self.line += 1;
                        self.pos += 3;
                    }
                    (Some(_), _) => {
                        let next = self.src[self.pos + 1..].chars().next().map_or(1, char::len_utf8);
                        self.pos += 1 + next;
                    }
                    (None, _) => self.pos += 1,
                },
                b'\n' if !triple => break,
                b'\n' => {
                    self.line += 1;
                    self.pos += 1;
                }
                _ if c == quote => {
                    if !triple {
                        self.pos += 1;
                        terminated = true;
                        break;
                    }
                    if self.peek(1) == Some(quote) && self.peek(2) == Some(quote) {
                        self.pos += 3;
                        terminated = true;
                        break;
                    }
                    self.pos += 1;
                }
                _ => self.pos += 1,
            }
        }
        // an unterminated single-line string stops before its line ending
        if !terminated && !triple && self.pos > start && self.bytes[self.pos - 1] == b'\r' {
            self.pos -= 1;
        }
        self.push(TokenKind::String { terminated }, start, open_line);
    }

    fn op(&mut self, start: usize) {
        let rest = &self.src[self.pos..];
        let len = THREE_CHAR_OPS
            .iter()
            .chain(TWO_CHAR_OPS)
            .find(|op| rest.starts_with(**op))
            .map(|op| op.len())
            .unwrap_or_else(|| self.current_char().len_utf8());
        self.pos += len;
        self.push(TokenKind::Op, start, self.line);
    }
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c.is_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

/// Tokens that carry program content: no comments, newlines or continuations.
pub fn significant(src: &str) -> impl Iterator<Item = Token<'_>> {
    tokenize(src).into_iter().filter(|t| !t.is_trivia())
}
