use super::lexer::{unescape_string, Token, TokenKind};
use super::{ReadError, ReadErrorKind, SourceSpan};
use crate::number::Number;

/// An s-expression as written, before syntax analysis.
#[derive(Clone, Debug, PartialEq)]
pub enum Datum {
    Number(Number, SourceSpan),
    Str(String, SourceSpan),
    Bool(bool, SourceSpan),
    Symbol(String, SourceSpan),
    /// A proper list when `tail` is `None`, otherwise a dotted list.
    List {
        items: Vec<Datum>,
        tail: Option<Box<Datum>>,
        span: SourceSpan,
    },
    /// `'d`, kept distinct from `(quote d)` only for its span.
    Quote(Box<Datum>, SourceSpan),
}

impl Datum {
    pub fn span(&self) -> SourceSpan {
        match self {
            Datum::Number(_, s)
            | Datum::Str(_, s)
            | Datum::Bool(_, s)
            | Datum::Symbol(_, s)
            | Datum::Quote(_, s) => *s,
            Datum::List { span, .. } => *span,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Datum::Symbol(s, _) => Some(s),
            _ => None,
        }
    }
}

pub(crate) fn read_all(tokens: &[Token]) -> Result<Vec<Datum>, ReadError> {
    let mut reader = DatumReader { tokens, pos: 0 };
    let mut out = Vec::new();
    while reader.pos < tokens.len() {
        out.push(reader.read()?);
    }
    Ok(out)
}

struct DatumReader<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl DatumReader<'_> {
    fn eof_span(&self) -> SourceSpan {
        self.tokens
            .last()
            .map(|t| SourceSpan {
                start: t.span.end,
                start_line: t.span.end_line,
                start_col: t.span.end_col,
                ..t.span
            })
            .unwrap_or_default()
    }

    fn read(&mut self) -> Result<Datum, ReadError> {
        let Some(tok) = self.tokens.get(self.pos) else {
            return Err(ReadError::new(
                ReadErrorKind::UnexpectedEof,
                self.eof_span(),
            ));
        };
        self.pos += 1;
        let span = tok.span;
        Ok(match tok.kind {
            TokenKind::Number => Datum::Number(
                Number::parse(&tok.text).expect("lexer validated number"),
                span,
            ),
            TokenKind::String => Datum::Str(unescape_string(&tok.text), span),
            TokenKind::Boolean => Datum::Bool(matches!(tok.text.as_str(), "#t" | "#true"), span),
            TokenKind::Symbol => Datum::Symbol(tok.text.clone(), span),
            TokenKind::Quote => {
                let inner = self.read()?;
                let whole = span.to(inner.span());
                Datum::Quote(Box::new(inner), whole)
            }
            TokenKind::RParen => {
                return Err(ReadError::new(ReadErrorKind::UnexpectedCloseParen, span))
            }
            TokenKind::Dot => return Err(ReadError::new(ReadErrorKind::MisplacedDot, span)),
            TokenKind::LParen => self.read_list(span)?,
        })
    }

    fn read_list(&mut self, open: SourceSpan) -> Result<Datum, ReadError> {
        let mut items = Vec::new();
        let mut tail = None;
        let mut dotted = false;
        loop {
            let Some(tok) = self.tokens.get(self.pos) else {
                return Err(ReadError::new(ReadErrorKind::UnclosedParen, open));
            };
            match tok.kind {
                TokenKind::RParen => {
                    self.pos += 1;
                    return Ok(Datum::List {
                        items,
                        tail,
                        span: open.to(tok.span),
                    });
                }
                TokenKind::Dot => {
                    if items.is_empty() || dotted {
                        return Err(ReadError::new(ReadErrorKind::MisplacedDot, tok.span));
                    }
                    self.pos += 1;
                    match self.read()? {
                        // `(a . (b c))` is `(a b c)`
                        Datum::List {
                            items: more,
                            tail: more_tail,
                            ..
                        } => {
                            items.extend(more);
                            tail = more_tail;
                        }
                        Datum::Quote(inner, span) => {
                            let quote_span = SourceSpan {
                                end: span.start + 1,
                                end_line: span.start_line,
                                end_col: span.start_col + 1,
                                ..span
                            };
                            items.push(Datum::Symbol("quote".into(), quote_span));
                            items.push(*inner);
                        }
                        other => tail = Some(Box::new(other)),
                    }
                    dotted = true;
                    match self.tokens.get(self.pos) {
                        Some(t) if t.kind == TokenKind::RParen => {}
                        Some(t) => return Err(ReadError::new(ReadErrorKind::MisplacedDot, t.span)),
                        None => return Err(ReadError::new(ReadErrorKind::UnclosedParen, open)),
                    }
                }
                _ => items.push(self.read()?),
            }
        }
    }
}
