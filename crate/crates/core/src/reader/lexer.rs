use super::{ReadError, ReadErrorKind, SourceSpan};
use crate::number::Number;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    LParen,
    RParen,
    Quote,
    Dot,
    Number,
    String,
    Boolean,
    Symbol,
}

/// A lexeme with its classification. `text` is exactly the source slice.
#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn mark(&self) -> (usize, u32, u32) {
        (self.pos, self.line, self.col)
    }

    fn span_from(&self, (start, start_line, start_col): (usize, u32, u32)) -> SourceSpan {
        SourceSpan {
            start,
            end: self.pos,
            start_line,
            start_col,
            end_line: self.line,
            end_col: self.col,
        }
    }
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';' | '\'')
}

/// Split `source` into tokens, skipping whitespace and `;` comments.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ReadError> {
    let mut cur = Cursor {
        src: source,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == ';' {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }

        let start = cur.mark();
        let kind = match c {
            '(' => {
                cur.bump();
                TokenKind::LParen
            }
            ')' => {
                cur.bump();
                TokenKind::RParen
            }
            '\'' => {
                cur.bump();
                TokenKind::Quote
            }
            '"' => {
                lex_string(&mut cur, start)?;
                TokenKind::String
            }
            _ => {
                while let Some(c) = cur.peek() {
                    if is_delimiter(c) {
                        break;
                    }
                    cur.bump();
                }
                let span = cur.span_from(start);
                classify_atom(&source[span.start..span.end], span)?
            }
        };
        let span = cur.span_from(start);
        tokens.push(Token {
            kind,
            text: source[span.start..span.end].to_string(),
            span,
        });
    }
    Ok(tokens)
}

fn lex_string(cur: &mut Cursor<'_>, start: (usize, u32, u32)) -> Result<(), ReadError> {
    cur.bump(); // opening quote
    loop {
        match cur.bump() {
            None => {
                return Err(ReadError::new(
                    ReadErrorKind::UnterminatedString,
                    cur.span_from(start),
                ))
            }
            Some('"') => return Ok(()),
            Some('\\') => {
                let esc_start = cur.mark();
                match cur.bump() {
                    None => {
                        return Err(ReadError::new(
                            ReadErrorKind::UnterminatedString,
                            cur.span_from(start),
                        ))
                    }
                    Some('"' | '\\' | 'n' | 't' | 'r') => {}
                    Some(other) => {
                        return Err(ReadError::new(
                            ReadErrorKind::BadEscape(other),
                            cur.span_from(esc_start),
                        ))
                    }
                }
            }
            Some(_) => {}
        }
    }
}

/// Decode the body of a string token (quotes included) into its value.
pub(crate) fn unescape_string(lexeme: &str) -> String {
    let inner = &lexeme[1..lexeme.len() - 1];
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('r') => out.push('\r'),
            Some(other) => out.push(other),
            None => {}
        }
    }
    out
}

fn looks_numeric(text: &str) -> bool {
    let rest = text.strip_prefix(['+', '-']).unwrap_or(text);
    let rest = rest.strip_prefix('.').unwrap_or(rest);
    rest.starts_with(|c: char| c.is_ascii_digit())
}

fn classify_atom(text: &str, span: SourceSpan) -> Result<TokenKind, ReadError> {
    if text == "." {
        return Ok(TokenKind::Dot);
    }
    if let Some(rest) = text.strip_prefix('#') {
        return match rest {
            "t" | "f" | "true" | "false" => Ok(TokenKind::Boolean),
            _ => Err(ReadError::new(
                ReadErrorKind::InvalidToken(text.to_string()),
                span,
            )),
        };
    }
    if looks_numeric(text) {
        return if Number::parse(text).is_some() {
            Ok(TokenKind::Number)
        } else {
            Err(ReadError::new(
                ReadErrorKind::MalformedNumber(text.to_string()),
                span,
            ))
        };
    }
    if text.contains('|') {
        return Err(ReadError::new(
            ReadErrorKind::InvalidToken(text.to_string()),
            span,
        ));
    }
    Ok(TokenKind::Symbol)
}
