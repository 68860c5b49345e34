//! Source text to core expressions.
//!
//! Reading happens in three stages: [`tokenize`] splits the text into
//! spanned tokens, the datum reader builds s-expressions, and the syntax
//! pass turns those into [`Expr`] trees. Procedure-style `define` and
//! `quote` are desugared on the way, so the machine only ever sees core
//! forms.

mod datum;
mod expr;
mod lexer;
mod syntax;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use datum::Datum;
pub(crate) use expr::write_string_literal;
pub use expr::{sequence_text, Body, Expr, ExprKind, LambdaExpr, Sugar};
pub use lexer::{tokenize, Token, TokenKind};
pub use syntax::{desugar_quote, parse_program};

/// A region of the source text.
///
/// Offsets are byte indices (`end` exclusive); lines and columns are
/// 1-based and count characters. The end position is the one just past
/// the last character of the region.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    /// Smallest span covering both `self` and `other`.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        let (first, last) = if self.start <= other.start {
            (self, other)
        } else {
            (other, self)
        };
        let end = if last.end >= first.end { last } else { first };
        SourceSpan {
            start: first.start,
            start_line: first.start_line,
            start_col: first.start_col,
            end: end.end,
            end_line: end.end_line,
            end_col: end.end_col,
        }
    }

    pub fn contains(&self, other: &SourceSpan) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// The slice of `source` this span covers, if it is in bounds.
    pub fn slice<'a>(&self, source: &'a str) -> Option<&'a str> {
        source.get(self.start..self.end)
    }
}

impl std::fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}-{}:{}",
            self.start_line, self.start_col, self.end_line, self.end_col
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReadErrorKind {
    #[error("unterminated string")]
    UnterminatedString,
    #[error("unknown string escape `\\{0}`")]
    BadEscape(char),
    #[error("malformed number `{0}`")]
    MalformedNumber(String),
    #[error("invalid syntax `{0}`")]
    InvalidToken(String),
    #[error("unexpected `)`")]
    UnexpectedCloseParen,
    #[error("missing `)`")]
    UnclosedParen,
    #[error("unexpected end of input")]
    UnexpectedEof,
    #[error("misplaced `.`")]
    MisplacedDot,
    #[error("{0}")]
    BadSyntax(String),
}

/// A reader failure and where it happened.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at {span}")]
pub struct ReadError {
    pub kind: ReadErrorKind,
    pub span: SourceSpan,
}

impl ReadError {
    pub(crate) fn new(kind: ReadErrorKind, span: SourceSpan) -> Self {
        ReadError { kind, span }
    }

    pub(crate) fn syntax(msg: impl Into<String>, span: SourceSpan) -> Self {
        ReadError::new(ReadErrorKind::BadSyntax(msg.into()), span)
    }
}
