use std::collections::HashSet;
use std::sync::Arc;

use super::datum::{read_all, Datum};
use super::expr::{Body, Expr, ExprKind, LambdaExpr, Sugar};
use super::{tokenize, ReadError, SourceSpan};

const KEYWORDS: &[&str] = &["define", "set!", "lambda", "if", "begin", "quote"];

/// Read a whole program into desugared core expressions.
pub fn parse_program(source: &str) -> Result<Vec<Arc<Expr>>, ReadError> {
    let tokens = tokenize(source)?;
    read_all(&tokens)?
        .iter()
        .map(|d| analyze(d).map(Arc::new))
        .collect()
}

/// Turn a quoted datum into the expression that builds it: lists become
/// `list` calls, dotted pairs `cons` calls, symbols symbol literals and
/// self-evaluating atoms stay as they are.
pub fn desugar_quote(datum: &Datum) -> Expr {
    let span = datum.span();
    match datum {
        Datum::Number(n, _) => Expr::new(ExprKind::Number(n.clone()), span),
        Datum::Str(s, _) => Expr::new(ExprKind::Str(s.as_str().into()), span),
        Datum::Bool(b, _) => Expr::new(ExprKind::Bool(*b), span),
        Datum::Symbol(s, _) => Expr::new(ExprKind::Symbol(s.as_str().into()), span),
        Datum::Quote(inner, _) => {
            let quote = Expr::new(ExprKind::Symbol("quote".into()), head_span(span));
            quoted_call("list", vec![quote, desugar_quote(inner)], span)
        }
        Datum::List { items, tail, .. } => {
            let elems: Vec<Expr> = items.iter().map(desugar_quote).collect();
            match tail {
                None => quoted_call("list", elems, span),
                Some(tail) => {
                    let mut acc = desugar_quote(tail);
                    for (i, e) in elems.into_iter().enumerate().rev() {
                        let sub_span = items[i].span().to(acc.span);
                        acc = quoted_call("cons", vec![e, acc], sub_span);
                    }
                    acc.span = span;
                    acc
                }
            }
        }
    }
}

fn head_span(span: SourceSpan) -> SourceSpan {
    SourceSpan {
        end: span.start + 1,
        end_line: span.start_line,
        end_col: span.start_col + 1,
        ..span
    }
}

fn quoted_call(constructor: &str, args: Vec<Expr>, span: SourceSpan) -> Expr {
    let operator = Expr::new(ExprKind::Var(constructor.into()), head_span(span));
    Expr::new(
        ExprKind::App {
            operator: Arc::new(operator),
            operands: args.into_iter().map(Arc::new).collect(),
        },
        span,
    )
    .with_sugar(Sugar::Quote)
}

fn analyze(d: &Datum) -> Result<Expr, ReadError> {
    let span = d.span();
    match d {
        Datum::Number(n, _) => Ok(Expr::new(ExprKind::Number(n.clone()), span)),
        Datum::Str(s, _) => Ok(Expr::new(ExprKind::Str(s.as_str().into()), span)),
        Datum::Bool(b, _) => Ok(Expr::new(ExprKind::Bool(*b), span)),
        Datum::Symbol(s, _) => {
            if KEYWORDS.contains(&s.as_str()) {
                return Err(ReadError::syntax(format!("bad use of keyword `{s}`"), span));
            }
            Ok(Expr::new(ExprKind::Var(s.clone()), span))
        }
        Datum::Quote(inner, _) => Ok(quote_expr(inner, span)),
        Datum::List { tail: Some(_), .. } => Err(ReadError::syntax(
            "dotted list in expression position",
            span,
        )),
        Datum::List { items, .. } => {
            let Some(head) = items.first() else {
                return Err(ReadError::syntax("empty combination `()`", span));
            };
            match head.as_symbol() {
                Some("quote") => {
                    expect_len(items, 2, "(quote datum)", span)?;
                    Ok(quote_expr(&items[1], span))
                }
                Some("lambda") => analyze_lambda(items, span),
                Some("define") => analyze_define(items, span),
                Some("set!") => {
                    expect_len(items, 3, "(set! name expr)", span)?;
                    let name = identifier(&items[1])?;
                    let value = Arc::new(analyze(&items[2])?);
                    Ok(Expr::new(ExprKind::Set { name, value }, span))
                }
                Some("if") => {
                    if !(3..=4).contains(&items.len()) {
                        return Err(ReadError::syntax(
                            "`if` expects (if test consequent [alternative])",
                            span,
                        ));
                    }
                    let test = Arc::new(analyze(&items[1])?);
                    let consequent = Arc::new(analyze(&items[2])?);
                    let alternative = items.get(3).map(analyze).transpose()?.map(Arc::new);
                    Ok(Expr::new(
                        ExprKind::If {
                            test,
                            consequent,
                            alternative,
                        },
                        span,
                    ))
                }
                Some("begin") => {
                    if items.len() < 2 {
                        return Err(ReadError::syntax("empty `(begin)`", span));
                    }
                    Ok(Expr::new(ExprKind::Begin(body(&items[1..])?), span))
                }
                _ => {
                    let operator = Arc::new(analyze(head)?);
                    let operands = items[1..]
                        .iter()
                        .map(|d| analyze(d).map(Arc::new))
                        .collect::<Result<_, _>>()?;
                    Ok(Expr::new(ExprKind::App { operator, operands }, span))
                }
            }
        }
    }
}

fn quote_expr(datum: &Datum, span: SourceSpan) -> Expr {
    let mut e = desugar_quote(datum);
    e.span = span;
    e
}

fn expect_len(items: &[Datum], n: usize, shape: &str, span: SourceSpan) -> Result<(), ReadError> {
    if items.len() != n {
        return Err(ReadError::syntax(format!("expected {shape}"), span));
    }
    Ok(())
}

fn identifier(d: &Datum) -> Result<String, ReadError> {
    match d.as_symbol() {
        Some(s) if !KEYWORDS.contains(&s) => Ok(s.to_string()),
        Some(s) => Err(ReadError::syntax(
            format!("cannot bind keyword `{s}`"),
            d.span(),
        )),
        None => Err(ReadError::syntax("expected an identifier", d.span())),
    }
}

fn body(items: &[Datum]) -> Result<Body, ReadError> {
    items
        .iter()
        .map(|d| analyze(d).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()
        .map(Body::from)
}

fn params(d: &Datum) -> Result<Vec<String>, ReadError> {
    let Datum::List { items, tail, span } = d else {
        return Err(ReadError::syntax(
            "rest parameters are not supported; expected a parameter list",
            d.span(),
        ));
    };
    if tail.is_some() {
        return Err(ReadError::syntax(
            "rest parameters are not supported",
            *span,
        ));
    }
    let mut seen = HashSet::new();
    items
        .iter()
        .map(|p| {
            let name = identifier(p)?;
            if !seen.insert(name.clone()) {
                return Err(ReadError::syntax(
                    format!("duplicate parameter `{name}`"),
                    p.span(),
                ));
            }
            Ok(name)
        })
        .collect()
}

fn analyze_lambda(items: &[Datum], span: SourceSpan) -> Result<Expr, ReadError> {
    if items.len() < 3 {
        return Err(ReadError::syntax(
            "`lambda` expects (lambda (params ...) body ...)",
            span,
        ));
    }
    let lambda = LambdaExpr {
        name: None,
        params: params(&items[1])?,
        body: body(&items[2..])?,
    };
    Ok(Expr::new(ExprKind::Lambda(Arc::new(lambda)), span))
}

fn analyze_define(items: &[Datum], span: SourceSpan) -> Result<Expr, ReadError> {
    match items.get(1) {
        // (define (name params ...) body ...)
        Some(Datum::List {
            items: header,
            tail,
            span: header_span,
        }) => {
            if tail.is_some() {
                return Err(ReadError::syntax(
                    "rest parameters are not supported",
                    *header_span,
                ));
            }
            let Some(name_datum) = header.first() else {
                return Err(ReadError::syntax("missing procedure name", *header_span));
            };
            if items.len() < 3 {
                return Err(ReadError::syntax("procedure definition needs a body", span));
            }
            let name = identifier(name_datum)?;
            let param_list = Datum::List {
                items: header[1..].to_vec(),
                tail: None,
                span: *header_span,
            };
            let lambda = LambdaExpr {
                name: Some(name.clone()),
                params: params(&param_list)?,
                body: body(&items[2..])?,
            };
            let value = Arc::new(Expr::new(ExprKind::Lambda(Arc::new(lambda)), span));
            Ok(
                Expr::new(ExprKind::Define { name, value }, span)
                    .with_sugar(Sugar::ProcedureDefine),
            )
        }
        Some(_) => {
            expect_len(items, 3, "(define name expr)", span)?;
            let name = identifier(&items[1])?;
            let mut value = analyze(&items[2])?;
            if let ExprKind::Lambda(l) = &mut value.kind {
                if l.name.is_none() {
                    Arc::make_mut(l).name = Some(name.clone());
                }
            }
            Ok(Expr::new(
                ExprKind::Define {
                    name,
                    value: Arc::new(value),
                },
                span,
            ))
        }
        None => Err(ReadError::syntax("expected (define name expr)", span)),
    }
}
