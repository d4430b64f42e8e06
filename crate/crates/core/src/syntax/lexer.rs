//! Go lexer with automatic semicolon insertion. Comments are collected
//! on the side; the token stream only carries significant tokens.

use super::ast::Rng;
use super::{ParseError, SourcePosition, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TokKind {
    Ident,
    Kw,
    Int,
    Float,
    Imag,
    Rune,
    Str,
    Punct,
    Semi,
    Eof,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Token {
    pub kind: TokKind,
    pub rng: Rng,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct RawComment {
    pub rng: Rng,
}

pub(crate) struct Lexed {
    pub tokens: Vec<Token>,
    pub comments: Vec<RawComment>,
}

const KEYWORDS: &[&str] = &[
    "break",
    "case",
    "chan",
    "const",
    "continue",
    "default",
    "defer",
    "else",
    "fallthrough",
    "for",
    "func",
    "go",
    "goto",
    "if",
    "import",
    "interface",
    "map",
    "package",
    "range",
    "return",
    "select",
    "struct",
    "switch",
    "type",
    "var",
];

// Longest-match first.
const PUNCTS: &[&str] = &[
    "<<=", ">>=", "&^=", "...", "&&", "||", "<-", "++", "--", "==", "!=", "<=", ">=", ":=", "+=",
    "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "&^", "+", "-", "*", "/", "%", "&", "|",
    "^", "<", ">", "=", "!", "(", ")", "[", "]", "{", "}", ",", ";", ".", ":", "~",
];

/// True when a newline after a token of this shape inserts a semicolon.
fn ends_statement(src: &str, tok: &Token) -> bool {
    match tok.kind {
        TokKind::Ident | TokKind::Int | TokKind::Float | TokKind::Imag | TokKind::Rune
        | TokKind::Str => true,
        TokKind::Kw => matches!(
            &src[tok.rng.start..tok.rng.end],
            "break" | "continue" | "fallthrough" | "return"
        ),
        TokKind::Punct => matches!(&src[tok.rng.start..tok.rng.end], "++" | "--" | ")" | "]" | "}"),
        _ => false,
    }
}

pub(crate) fn lex(src: &str, path: &str) -> Result<Lexed, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens: Vec<Token> = Vec::new();
    let mut comments = Vec::new();
    let mut i = 0usize;

    let err = |msg: &str, at: usize| -> ParseError {
        let pos = position_for(path, src, at);
        ParseError {
            message: msg.to_string(),
            file: path.to_string(),
            line: pos.line,
            column: pos.column,
            byte_offset: at,
        }
    };

    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' => i += 1,
            b'\n' => {
                if let Some(last) = tokens.last() {
                    if ends_statement(src, last) {
                        tokens.push(Token {
                            kind: TokKind::Semi,
                            rng: Rng { start: i, end: i },
                        });
                    }
                }
                i += 1;
            }
            b'/' if i + 1 < bytes.len() && bytes[i + 1] == b'/' => {
                let start = i;
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                comments.push(RawComment {
                    rng: Rng { start, end: i },
                });
            }
            b'/' if i + 1 < bytes.len() && bytes[i + 1] == b'*' => {
                let start = i;
                i += 2;
                let mut closed = false;
                let mut saw_newline = false;
                while i + 1 < bytes.len() {
                    if bytes[i] == b'\n' {
                        saw_newline = true;
                    }
                    if bytes[i] == b'*' && bytes[i + 1] == b'/' {
                        i += 2;
                        closed = true;
                        break;
                    }
                    i += 1;
                }
                if !closed {
                    return Err(err("unterminated general comment", start));
                }
                comments.push(RawComment {
                    rng: Rng { start, end: i },
                });
                // A comment spanning lines acts like a newline for ASI.
                if saw_newline {
                    if let Some(last) = tokens.last() {
                        if ends_statement(src, last) {
                            tokens.push(Token {
                                kind: TokKind::Semi,
                                rng: Rng { start: i, end: i },
                            });
                        }
                    }
                }
            }
            b'"' => {
                let start = i;
                i += 1;
                loop {
                    if i >= bytes.len() || bytes[i] == b'\n' {
                        return Err(err("unterminated string literal", start));
                    }
                    match bytes[i] {
                        b'\\' => i += 2,
                        b'"' => {
                            i += 1;
                            break;
                        }
                        _ => i += 1,
                    }
                }
                tokens.push(Token {
                    kind: TokKind::Str,
                    rng: Rng { start, end: i },
                });
            }
            b'`' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i] != b'`' {
                    i += 1;
                }
                if i >= bytes.len() {
                    return Err(err("unterminated raw string literal", start));
                }
                i += 1;
                tokens.push(Token {
                    kind: TokKind::Str,
                    rng: Rng { start, end: i },
                });
            }
            b'\'' => {
                let start = i;
                i += 1;
                loop {
                    if i >= bytes.len() || bytes[i] == b'\n' {
                        return Err(err("unterminated rune literal", start));
                    }
                    match bytes[i] {
                        b'\\' => i += 2,
                        b'\'' => {
                            i += 1;
                            break;
                        }
                        _ => i += 1,
                    }
                }
                tokens.push(Token {
                    kind: TokKind::Rune,
                    rng: Rng { start, end: i },
                });
            }
            b'0'..=b'9' => {
                let (tok, next) = scan_number(bytes, i);
                tokens.push(tok);
                i = next;
            }
            b'.' if i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() => {
                let (tok, next) = scan_number(bytes, i);
                tokens.push(tok);
                i = next;
            }
            _ if c == b'_' || c.is_ascii_alphabetic() || c >= 0x80 => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i] == b'_' || bytes[i].is_ascii_alphanumeric() || bytes[i] >= 0x80)
                {
                    i += 1;
                }
                let text = &src[start..i];
                let kind = if KEYWORDS.contains(&text) {
                    TokKind::Kw
                } else {
                    TokKind::Ident
                };
                tokens.push(Token {
                    kind,
                    rng: Rng { start, end: i },
                });
            }
            _ => {
                let rest = &src[i..];
                let mut matched = false;
                for p in PUNCTS {
                    if rest.starts_with(p) {
                        let kind = if *p == ";" { TokKind::Semi } else { TokKind::Punct };
                        tokens.push(Token {
                            kind,
                            rng: Rng {
                                start: i,
                                end: i + p.len(),
                            },
                        });
                        i += p.len();
                        matched = true;
                        break;
                    }
                }
                if !matched {
                    return Err(err(&format!("unexpected character {:?}", c as char), i));
                }
            }
        }
    }
    if let Some(last) = tokens.last() {
        if ends_statement(src, last) {
            tokens.push(Token {
                kind: TokKind::Semi,
                rng: Rng { start: i, end: i },
            });
        }
    }
    tokens.push(Token {
        kind: TokKind::Eof,
        rng: Rng { start: i, end: i },
    });
    Ok(Lexed { tokens, comments })
}

fn scan_number(bytes: &[u8], start: usize) -> (Token, usize) {
    let mut i = start;
    let mut kind = TokKind::Int;
    if bytes[i] == b'0' && i + 1 < bytes.len() && (bytes[i + 1] | 0x20) == b'x' {
        i += 2;
        while i < bytes.len() && (bytes[i].is_ascii_hexdigit() || bytes[i] == b'_') {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'.' {
            kind = TokKind::Float;
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_hexdigit() || bytes[i] == b'_') {
                i += 1;
            }
        }
        if i < bytes.len() && (bytes[i] | 0x20) == b'p' {
            kind = TokKind::Float;
            i += 1;
            if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                i += 1;
            }
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
        }
    } else {
        while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'.' && !(i + 1 < bytes.len() && bytes[i + 1] == b'.') {
            kind = TokKind::Float;
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                i += 1;
            }
        }
        if i < bytes.len() && (bytes[i] | 0x20) == b'e' {
            kind = TokKind::Float;
            i += 1;
            if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                i += 1;
            }
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
        }
    }
    if i < bytes.len() && bytes[i] == b'i' {
        kind = TokKind::Imag;
        i += 1;
    }
    (
        Token {
            kind,
            rng: Rng { start, end: i },
        },
        i,
    )
}

/// Resolve a byte offset to a 1-based line/column position.
pub(crate) fn position_for(path: &str, src: &str, offset: usize) -> SourcePosition {
    let offset = offset.min(src.len());
    let before = &src.as_bytes()[..offset];
    let line = before.iter().filter(|&&b| b == b'\n').count() as u32 + 1;
    let line_start = before
        .iter()
        .rposition(|&b| b == b'\n')
        .map(|p| p + 1)
        .unwrap_or(0);
    SourcePosition {
        file: path.to_string(),
        line,
        column: (offset - line_start) as u32 + 1,
        byte_offset: offset,
    }
}

pub(crate) fn span_for(path: &str, src: &str, rng: Rng) -> Span {
    Span {
        start: position_for(path, src, rng.start),
        end: position_for(path, src, rng.end),
    }
}
