//! Tokenizer shared by the surface parser and the indexed-ANF text reader.

use std::fmt;

use thiserror::Error;

use crate::diag::Span;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Nat(u64),
    Float(f64),
    // keywords
    Let,
    Fun,
    For,
    Sum,
    If,
    Then,
    Else,
    Size,
    FltKw,
    FinKw,
    // punctuation
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    ColonEq,
    Dot,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    FatArrow,
    Arrow,
    Times,
    Eq,
    NotEq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(x) => return write!(f, "identifier `{x}`"),
            Tok::Nat(n) => return write!(f, "number `{n}`"),
            Tok::Float(x) => return write!(f, "number `{x}`"),
            Tok::Let => "`let`",
            Tok::Fun => "`fun`",
            Tok::For => "`for`",
            Tok::Sum => "`sum`",
            Tok::If => "`if`",
            Tok::Then => "`then`",
            Tok::Else => "`else`",
            Tok::Size => "`size`",
            Tok::FltKw => "`flt`",
            Tok::FinKw => "`fin`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Comma => "`,`",
            Tok::Colon => "`:`",
            Tok::ColonEq => "`:=`",
            Tok::Dot => "`.`",
            Tok::Semi => "`;`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Star => "`*`",
            Tok::Slash => "`/`",
            Tok::FatArrow => "`=>`",
            Tok::Arrow => "`->`",
            Tok::Times => "`×`",
            Tok::Eq => "`=`",
            Tok::NotEq => "`!=`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
    /// A line break separates this token from the previous one.
    pub nl_before: bool,
    /// Any whitespace (or a comment) separates this token from the previous one.
    pub ws_before: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct LexError {
    pub span: Span,
    pub message: String,
}

fn keyword(s: &str) -> Option<Tok> {
    Some(match s {
        "let" => Tok::Let,
        "fun" => Tok::Fun,
        "for" => Tok::For,
        "sum" => Tok::Sum,
        "if" => Tok::If,
        "then" => Tok::Then,
        "else" => Tok::Else,
        "size" => Tok::Size,
        "flt" => Tok::FltKw,
        "fin" => Tok::FinKw,
        _ => return None,
    })
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut pos, mut line, mut col) = (0usize, 1u32, 1u32);
    let mut nl_before = true;
    let mut ws_before = true;

    while pos < chars.len() {
        let c = chars[pos];
        if c == '\n' {
            pos += 1;
            line += 1;
            col = 1;
            nl_before = true;
            ws_before = true;
            continue;
        }
        if c.is_whitespace() {
            pos += 1;
            col += 1;
            ws_before = true;
            continue;
        }
        if c == '-' && chars.get(pos + 1) == Some(&'-') {
            while pos < chars.len() && chars[pos] != '\n' {
                pos += 1;
            }
            ws_before = true;
            continue;
        }

        let span = Span::new(line, col);
        let start = pos;
        let after_tight_dot = !ws_before && matches!(out.last(), Some(Token { tok: Tok::Dot, .. }));
        let tok = if c.is_ascii_alphabetic() {
            while pos < chars.len() && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_' || chars[pos] == '\'') {
                pos += 1;
            }
            let word: String = chars[start..pos].iter().collect();
            keyword(&word).unwrap_or(Tok::Ident(word))
        } else if c.is_ascii_digit() {
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            let mut is_float = false;
            // `p.1.2` projects twice; digits right after a tight dot are never a fraction.
            if !after_tight_dot {
                if pos + 1 < chars.len() && chars[pos] == '.' && chars[pos + 1].is_ascii_digit() {
                    is_float = true;
                    pos += 1;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                }
                if pos < chars.len() && (chars[pos] == 'e' || chars[pos] == 'E') {
                    let mut p = pos + 1;
                    if p < chars.len() && (chars[p] == '+' || chars[p] == '-') {
                        p += 1;
                    }
                    if p < chars.len() && chars[p].is_ascii_digit() {
                        is_float = true;
                        pos = p;
                        while pos < chars.len() && chars[pos].is_ascii_digit() {
                            pos += 1;
                        }
                    }
                }
            }
            let text: String = chars[start..pos].iter().collect();
            if is_float {
                Tok::Float(text.parse().map_err(|_| LexError { span, message: format!("malformed number `{text}`") })?)
            } else {
                Tok::Nat(text.parse().map_err(|_| LexError { span, message: format!("number `{text}` is too large") })?)
            }
        } else {
            let next = chars.get(pos + 1).copied();
            let (tok, len) = match (c, next) {
                (':', Some('=')) => (Tok::ColonEq, 2),
                ('=', Some('>')) => (Tok::FatArrow, 2),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('!', Some('=')) => (Tok::NotEq, 2),
                ('≠', _) => (Tok::NotEq, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (',', _) => (Tok::Comma, 1),
                (':', _) => (Tok::Colon, 1),
                ('.', _) => (Tok::Dot, 1),
                (';', _) => (Tok::Semi, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) | ('·', _) => (Tok::Star, 1),
                ('/', _) => (Tok::Slash, 1),
                ('×', _) => (Tok::Times, 1),
                ('=', _) => (Tok::Eq, 1),
                _ => return Err(LexError { span, message: format!("unexpected character `{c}`") }),
            };
            pos += len;
            tok
        };
        col += (pos - start) as u32;
        out.push(Token { tok, span, nl_before, ws_before });
        nl_before = false;
        ws_before = false;
    }
    out.push(Token { tok: Tok::Eof, span: Span::new(line, col), nl_before: true, ws_before: true });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn binder_dot_versus_float() {
        assert_eq!(
            toks("for i:3. 10"),
            vec![Tok::For, Tok::Ident("i".into()), Tok::Colon, Tok::Nat(3), Tok::Dot, Tok::Nat(10), Tok::Eof]
        );
        assert_eq!(toks("1.5e3"), vec![Tok::Float(1500.0), Tok::Eof]);
        assert_eq!(toks("2e-1"), vec![Tok::Float(0.2), Tok::Eof]);
    }

    #[test]
    fn chained_projection_is_not_a_float() {
        assert_eq!(toks("p.1.2"), vec![Tok::Ident("p".into()), Tok::Dot, Tok::Nat(1), Tok::Dot, Tok::Nat(2), Tok::Eof]);
    }

    #[test]
    fn comments_and_positions() {
        let ts = tokenize("-- header\n  x := 1 -- trailing\ny").unwrap();
        assert_eq!(ts[0].tok, Tok::Ident("x".into()));
        assert_eq!(ts[0].span, Span::new(2, 3));
        assert!(ts[0].nl_before);
        assert_eq!(ts[3].tok, Tok::Ident("y".into()));
        assert_eq!(ts[3].span, Span::new(3, 1));
        assert!(ts[3].nl_before);
    }

    #[test]
    fn unicode_operators() {
        assert_eq!(toks("flt × flt"), vec![Tok::FltKw, Tok::Times, Tok::FltKw, Tok::Eof]);
        assert_eq!(toks("x ≠ 0"), vec![Tok::Ident("x".into()), Tok::NotEq, Tok::Nat(0), Tok::Eof]);
    }

    #[test]
    fn bad_character_is_located() {
        let err = tokenize("x\n  $").unwrap_err();
        assert_eq!(err.span, Span::new(2, 3));
    }
}
