//! Tokenizer and cursor shared by every textual format in the crate: `.isa`
//! specifications, structure files, history literals and environment scripts.

use std::fmt;

use thiserror::Error;

/// Position of a node or token in its source text.
///
/// Spans never participate in node equality: two syntax trees that differ
/// only in where their nodes came from compare equal.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct SourceSpan {
    /// 1-based line of `start`.
    pub line: u32,
    /// 1-based column (in bytes) of `start`.
    pub column: u32,
    pub start: usize,
    pub end: usize,
}

impl PartialEq for SourceSpan {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl std::hash::Hash for SourceSpan {
    fn hash<H: std::hash::Hasher>(&self, _state: &mut H) {}
}

impl SourceSpan {
    /// Smallest span covering both `self` and `other`.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        if other.end >= self.end {
            SourceSpan { end: other.end, ..self }
        } else {
            self
        }
    }

    /// Field-wise comparison (the `PartialEq` impl ignores positions).
    pub fn same_position(&self, other: &SourceSpan) -> bool {
        (self.line, self.column, self.start, self.end)
            == (other.line, other.column, other.start, other.end)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// A name as written in source, with its position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ident {
    pub name: String,
    pub span: SourceSpan,
}

impl Ident {
    pub fn new(name: &str) -> Self {
        Ident {
            name: name.to_string(),
            span: SourceSpan::default(),
        }
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Unexpected token; carries the set of tokens that would have been accepted.
    Syntax { expected: Vec<String> },
    /// Reference to an undeclared or duplicated name.
    Name,
    /// Symbol applied to the wrong number of arguments.
    Arity,
}

/// Error from any of the textual formats, positioned in the source.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    pub fn syntax(span: SourceSpan, found: &str, expected: &[&str]) -> Self {
        let expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        let message = if expected.is_empty() {
            format!("unexpected {found}")
        } else {
            format!("expected {}, found {found}", expected.join(" or "))
        };
        ParseError {
            kind: ParseErrorKind::Syntax { expected },
            span,
            message,
        }
    }

    pub fn name(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            kind: ParseErrorKind::Name,
            span,
            message: message.into(),
        }
    }

    pub fn arity(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            kind: ParseErrorKind::Arity,
            span,
            message: message.into(),
        }
    }

    pub fn is_syntax(&self) -> bool {
        matches!(self.kind, ParseErrorKind::Syntax { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    /// `#` immediately followed by an identifier character (element sigil).
    Hash,
    Question,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Assign,
    Eq,
    Arrow,
    At,
    Slash,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Hash => "`#`".into(),
            Tok::Question => "`?`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::At => "`@`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

/// How `#` is treated by the tokenizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexMode {
    /// `#` always starts a comment (specifications, structure files).
    Spec,
    /// `#ident` is an element sigil; any other `#` starts a comment
    /// (history literals, scripts).
    Literal,
}

fn is_ident_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

pub fn tokenize(src: &str, mode: LexMode) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    let mut line_start = 0usize;
    let span_at = |start: usize, end: usize, line: u32, line_start: usize| SourceSpan {
        line,
        column: (start - line_start) as u32 + 1,
        start,
        end,
    };
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'\n' {
            i += 1;
            line += 1;
            line_start = i;
            continue;
        }
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if b == b'#' {
            let sigil = mode == LexMode::Literal
                && bytes.get(i + 1).copied().is_some_and(is_ident_byte);
            if sigil {
                out.push((Tok::Hash, span_at(i, i + 1, line, line_start)));
                i += 1;
                continue;
            }
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        if is_ident_byte(b) {
            while i < bytes.len() && is_ident_byte(bytes[i]) {
                i += 1;
            }
            let word = &src[start..i];
            let tok = if word.bytes().all(|c| c.is_ascii_digit()) {
                match word.parse::<u64>() {
                    Ok(n) => Tok::Int(n),
                    Err(_) => Tok::Ident(word.to_string()),
                }
            } else {
                Tok::Ident(word.to_string())
            };
            out.push((tok, span_at(start, i, line, line_start)));
            continue;
        }
        let two = bytes.get(i + 1).copied();
        let (tok, width) = match (b, two) {
            (b':', Some(b'=')) => (Tok::Assign, 2),
            (b'-', Some(b'>')) => (Tok::Arrow, 2),
            (b'(', _) => (Tok::LParen, 1),
            (b')', _) => (Tok::RParen, 1),
            (b'{', _) => (Tok::LBrace, 1),
            (b'}', _) => (Tok::RBrace, 1),
            (b',', _) => (Tok::Comma, 1),
            (b';', _) => (Tok::Semi, 1),
            (b':', _) => (Tok::Colon, 1),
            (b'=', _) => (Tok::Eq, 1),
            (b'@', _) => (Tok::At, 1),
            (b'/', _) => (Tok::Slash, 1),
            (b'?', _) => (Tok::Question, 1),
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                let end = i + ch.len_utf8();
                return Err(ParseError::syntax(
                    span_at(i, end, line, line_start),
                    &format!("character `{ch}`"),
                    &[],
                ));
            }
        };
        i += width;
        out.push((tok, span_at(start, i, line, line_start)));
    }
    out.push((Tok::Eof, span_at(bytes.len(), bytes.len(), line, line_start)));
    Ok(out)
}

/// Token cursor with the small set of lookahead/expect helpers the
/// hand-written parsers need.
#[derive(Debug, Clone)]
pub struct Cursor {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Cursor {
    pub fn new(src: &str, mode: LexMode) -> Result<Self, ParseError> {
        Ok(Cursor {
            toks: tokenize(src, mode)?,
            pos: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub fn peek_at(&self, ahead: usize) -> &Tok {
        let idx = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[idx].0
    }

    pub fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    /// Span of the most recently consumed token.
    pub fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].1
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn reset(&mut self, pos: usize) {
        self.pos = pos;
    }

    pub fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::syntax(self.span(), &self.peek().describe(), expected)
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<SourceSpan, ParseError> {
        if self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<SourceSpan, ParseError> {
        if self.at_keyword(kw) {
            Ok(self.bump().1)
        } else {
            Err(self.error(&[&format!("`{kw}`")]))
        }
    }

    /// Identifier or all-digit word (element names may be numeric).
    pub fn expect_name(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let sp = self.bump().1;
                Ok((s, sp))
            }
            Tok::Int(n) => {
                let sp = self.bump().1;
                Ok((n.to_string(), sp))
            }
            _ => Err(self.error(&[what])),
        }
    }

    pub fn expect_ident(&mut self, what: &str) -> Result<Ident, ParseError> {
        let (name, span) = self.expect_name(what)?;
        Ok(Ident { name, span })
    }

    pub fn expect_int(&mut self, what: &str) -> Result<(u64, SourceSpan), ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let sp = self.bump().1;
                Ok((n, sp))
            }
            _ => Err(self.error(&[what])),
        }
    }

    pub fn expect_eof(&mut self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }
}
