use std::fmt;

use super::PenmanError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    LParen,
    RParen,
    Slash,
    Role(String),
    Symbol(String),
    Str(String),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::LParen => f.write_str("("),
            TokenKind::RParen => f.write_str(")"),
            TokenKind::Slash => f.write_str("/"),
            TokenKind::Role(r) => write!(f, ":{r}"),
            TokenKind::Symbol(s) => f.write_str(s),
            TokenKind::Str(s) => write!(f, "\"{s}\""),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

fn is_symbol_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | '"' | '/' | ':')
}

/// Splits PENMAN text into tokens. Lines whose first non-blank character is
/// `#` are comments. `first_line` numbers the first line of `text`.
pub(crate) fn lex(text: &str, first_line: usize) -> Result<Vec<Token>, PenmanError> {
    let mut tokens = Vec::new();
    for (offset, line) in text.lines().enumerate() {
        let line_no = first_line + offset;
        if line.trim_start().starts_with('#') {
            continue;
        }
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let push = |tokens: &mut Vec<Token>, kind| {
                tokens.push(Token {
                    kind,
                    line: line_no,
                    column,
                })
            };
            match c {
                c if c.is_whitespace() => i += 1,
                '(' => {
                    push(&mut tokens, TokenKind::LParen);
                    i += 1;
                }
                ')' => {
                    push(&mut tokens, TokenKind::RParen);
                    i += 1;
                }
                '/' => {
                    push(&mut tokens, TokenKind::Slash);
                    i += 1;
                }
                '"' => {
                    let start = i + 1;
                    let mut j = start;
                    let mut closed = false;
                    while j < chars.len() {
                        match chars[j] {
                            '\\' => j += 2,
                            '"' => {
                                closed = true;
                                break;
                            }
                            _ => j += 1,
                        }
                    }
                    if !closed {
                        return Err(PenmanError::Syntax {
                            line: line_no,
                            column,
                            expected: "closing '\"'".into(),
                            found: "end of line".into(),
                        });
                    }
                    push(&mut tokens, TokenKind::Str(chars[start..j].iter().collect()));
                    i = j + 1;
                }
                ':' => {
                    let start = i + 1;
                    let mut j = start;
                    while j < chars.len() && is_symbol_char(chars[j]) {
                        j += 1;
                    }
                    if j == start {
                        return Err(PenmanError::Syntax {
                            line: line_no,
                            column,
                            expected: "role name after ':'".into(),
                            found: chars.get(j).map_or("end of line".into(), |c| format!("'{c}'")),
                        });
                    }
                    push(&mut tokens, TokenKind::Role(chars[start..j].iter().collect()));
                    i = j;
                }
                _ => {
                    let start = i;
                    let mut j = i;
                    while j < chars.len() && is_symbol_char(chars[j]) {
                        j += 1;
                    }
                    push(&mut tokens, TokenKind::Symbol(chars[start..j].iter().collect()));
                    i = j;
                }
            }
        }
    }
    Ok(tokens)
}

/// The token stream of a PENMAN string, each token rendered as text. Two
/// serializations are considered identical when their token streams are.
pub fn token_stream(text: &str) -> Result<Vec<String>, PenmanError> {
    Ok(lex(text, 1)?.into_iter().map(|t| t.kind.to_string()).collect())
}
