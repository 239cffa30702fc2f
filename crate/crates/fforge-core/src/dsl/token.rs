//! Tokenizer with source positions.

use super::{diag, DslError};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Num(f64),
    Ident(String),
    Let,
    In,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Equals,
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

/// Tokenizes `src`. `line` and `col` locate the first byte of `src` in the
/// enclosing file, so diagnostics point into the original text even when the
/// expression is a trailing fragment of a line.
pub fn tokenize(src: &str, line: u32, col: u32) -> Result<Vec<Token>, DslError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = line;
    let mut col = col;
    while i < bytes.len() {
        let c = bytes[i];
        let (tline, tcol) = (line, col);
        match c {
            b' ' | b'\t' | b'\r' => {
                i += 1;
                col += 1;
            }
            b'\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                    col += 1;
                }
            }
            b'+' => push_sym(&mut out, Tok::Plus, tline, tcol, &mut i, &mut col),
            b'-' => push_sym(&mut out, Tok::Minus, tline, tcol, &mut i, &mut col),
            b'*' => push_sym(&mut out, Tok::Star, tline, tcol, &mut i, &mut col),
            b'/' => push_sym(&mut out, Tok::Slash, tline, tcol, &mut i, &mut col),
            b'^' => push_sym(&mut out, Tok::Caret, tline, tcol, &mut i, &mut col),
            b'(' => push_sym(&mut out, Tok::LParen, tline, tcol, &mut i, &mut col),
            b')' => push_sym(&mut out, Tok::RParen, tline, tcol, &mut i, &mut col),
            b',' => push_sym(&mut out, Tok::Comma, tline, tcol, &mut i, &mut col),
            b'=' => push_sym(&mut out, Tok::Equals, tline, tcol, &mut i, &mut col),
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(diag(tline, tcol, "digits must follow a decimal point"));
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text
                    .parse()
                    .map_err(|_| diag(tline, tcol, format!("invalid number `{text}`")))?;
                col += (i - start) as u32;
                out.push(Token { tok: Tok::Num(value), line: tline, col: tcol });
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let text = &src[start..i];
                col += (i - start) as u32;
                let tok = match text {
                    "let" => Tok::Let,
                    "in" => Tok::In,
                    _ => Tok::Ident(text.to_string()),
                };
                out.push(Token { tok, line: tline, col: tcol });
            }
            _ => {
                let ch = src[i..].chars().next().unwrap();
                return Err(diag(tline, tcol, format!("unexpected character `{ch}`")));
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

fn push_sym(out: &mut Vec<Token>, tok: Tok, line: u32, col: u32, i: &mut usize, c: &mut u32) {
    out.push(Token { tok, line, col });
    *i += 1;
    *c += 1;
}
