use std::fmt::{self, Write as _};
use std::sync::Arc;

use super::SourceSpan;
use crate::number::Number;

/// A non-empty expression sequence (procedure bodies, `begin`, programs).
pub type Body = Arc<[Arc<Expr>]>;

/// Which surface syntax produced a node, used only to print it back the way
/// it was written. Ignored by equality.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Sugar {
    #[default]
    None,
    /// `'datum` / `(quote datum)`.
    Quote,
    /// `(define (f x ...) body ...)`.
    ProcedureDefine,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaExpr {
    /// The name this lambda was defined under, for printing closures.
    pub name: Option<String>,
    pub params: Vec<String>,
    pub body: Body,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Number(Number),
    Str(Arc<str>),
    Bool(bool),
    /// A quoted symbol.
    Symbol(Arc<str>),
    Var(String),
    Lambda(Arc<LambdaExpr>),
    Define {
        name: String,
        value: Arc<Expr>,
    },
    Set {
        name: String,
        value: Arc<Expr>,
    },
    If {
        test: Arc<Expr>,
        consequent: Arc<Expr>,
        alternative: Option<Arc<Expr>>,
    },
    Begin(Body),
    App {
        operator: Arc<Expr>,
        operands: Vec<Arc<Expr>>,
    },
    /// Evaluates to the unspecified value. Stands in for the missing arm of
    /// a one-armed `if`; the reader never produces it directly.
    Unspecified,
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: SourceSpan,
    pub sugar: Sugar,
}

/// Equality is structural: spans and surface-syntax markers are ignored.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: SourceSpan) -> Expr {
        Expr {
            kind,
            span,
            sugar: Sugar::None,
        }
    }

    pub(crate) fn with_sugar(mut self, sugar: Sugar) -> Expr {
        self.sugar = sugar;
        self
    }

    /// Direct children, in evaluation order.
    pub fn children(&self) -> Vec<&Arc<Expr>> {
        match &self.kind {
            ExprKind::Lambda(l) => l.body.iter().collect(),
            ExprKind::Define { value, .. } | ExprKind::Set { value, .. } => vec![value],
            ExprKind::If {
                test,
                consequent,
                alternative,
            } => {
                let mut v = vec![test, consequent];
                v.extend(alternative);
                v
            }
            ExprKind::Begin(body) => body.iter().collect(),
            ExprKind::App { operator, operands } => {
                std::iter::once(operator).chain(operands.iter()).collect()
            }
            _ => Vec::new(),
        }
    }
}

pub(crate) fn write_string_literal(out: &mut impl fmt::Write, s: &str) -> fmt::Result {
    out.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => out.write_str("\\\"")?,
            '\\' => out.write_str("\\\\")?,
            '\n' => out.write_str("\\n")?,
            '\t' => out.write_str("\\t")?,
            '\r' => out.write_str("\\r")?,
            c => out.write_char(c)?,
        }
    }
    out.write_char('"')
}

fn write_seq(f: &mut fmt::Formatter<'_>, body: &[Arc<Expr>]) -> fmt::Result {
    for (i, e) in body.iter().enumerate() {
        if i > 0 {
            f.write_char(' ')?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

/// Prints the body of a quote-desugared node as the datum it came from.
fn write_datum(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match &e.kind {
        ExprKind::Symbol(s) => f.write_str(s),
        ExprKind::App { operator, operands } => match &operator.kind {
            ExprKind::Var(v) if v == "cons" && operands.len() == 2 => {
                f.write_char('(')?;
                write_datum(f, &operands[0])?;
                let mut rest = &operands[1];
                loop {
                    match &rest.kind {
                        ExprKind::App { operator, operands }
                            if matches!(&operator.kind, ExprKind::Var(v) if v == "cons")
                                && operands.len() == 2 =>
                        {
                            f.write_char(' ')?;
                            write_datum(f, &operands[0])?;
                            rest = &operands[1];
                        }
                        ExprKind::App { operator, operands } if matches!(&operator.kind, ExprKind::Var(v) if v == "list") =>
                        {
                            for o in operands {
                                f.write_char(' ')?;
                                write_datum(f, o)?;
                            }
                            return f.write_char(')');
                        }
                        _ => {
                            f.write_str(" . ")?;
                            write_datum(f, rest)?;
                            return f.write_char(')');
                        }
                    }
                }
            }
            _ => {
                f.write_char('(')?;
                for (i, o) in operands.iter().enumerate() {
                    if i > 0 {
                        f.write_char(' ')?;
                    }
                    write_datum(f, o)?;
                }
                f.write_char(')')
            }
        },
        _ => write!(f, "{e}"),
    }
}

/// Prints the expression in canonical surface syntax. Re-reading the output
/// yields a structurally equal tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sugar == Sugar::Quote {
            f.write_char('\'')?;
            return write_datum(f, self);
        }
        match &self.kind {
            ExprKind::Number(n) => write!(f, "{n}"),
            ExprKind::Str(s) => write_string_literal(f, s),
            ExprKind::Bool(b) => f.write_str(if *b { "#t" } else { "#f" }),
            ExprKind::Symbol(s) => write!(f, "'{s}"),
            ExprKind::Var(v) => f.write_str(v),
            ExprKind::Lambda(l) => {
                write!(f, "(lambda ({}) ", l.params.join(" "))?;
                write_seq(f, &l.body)?;
                f.write_char(')')
            }
            ExprKind::Define { name, value } => match (&value.kind, self.sugar) {
                (ExprKind::Lambda(l), Sugar::ProcedureDefine) => {
                    write!(f, "(define ({name}")?;
                    for p in &l.params {
                        write!(f, " {p}")?;
                    }
                    f.write_str(") ")?;
                    write_seq(f, &l.body)?;
                    f.write_char(')')
                }
                _ => write!(f, "(define {name} {value})"),
            },
            ExprKind::Set { name, value } => write!(f, "(set! {name} {value})"),
            ExprKind::If {
                test,
                consequent,
                alternative: Some(alt),
            } => write!(f, "(if {test} {consequent} {alt})"),
            ExprKind::If {
                test, consequent, ..
            } => write!(f, "(if {test} {consequent})"),
            ExprKind::Begin(body) => {
                f.write_str("(begin ")?;
                write_seq(f, body)?;
                f.write_char(')')
            }
            ExprKind::App { operator, operands } => {
                write!(f, "({operator}")?;
                for o in operands {
                    write!(f, " {o}")?;
                }
                f.write_char(')')
            }
            ExprKind::Unspecified => f.write_str("#<unspecified>"),
        }
    }
}

/// Canonical text of an expression sequence, items separated by spaces.
pub fn sequence_text(body: &[Arc<Expr>]) -> String {
    let mut s = String::new();
    for (i, e) in body.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{e}");
    }
    s
}
