use std::collections::HashSet;
use std::fmt::Write as _;

use super::state::State;
use super::store::{ClosureStore, PairHeap, PairId};
use super::value::Value;
use crate::reader::write_string_literal;

/// Writes external representations. Needs the heap for pairs and the
/// closure store for procedure names.
pub struct Printer<'a> {
    pub heap: &'a PairHeap,
    pub closures: &'a ClosureStore,
}

impl Printer<'_> {
    /// `write`-style: strings quoted and escaped.
    pub fn write(&self, v: &Value) -> String {
        let mut out = String::new();
        self.emit(&mut out, v, true, &mut HashSet::new());
        out
    }

    /// `display`-style: strings and symbols printed raw.
    pub fn display(&self, v: &Value) -> String {
        let mut out = String::new();
        self.emit(&mut out, v, false, &mut HashSet::new());
        out
    }

    fn emit(&self, out: &mut String, v: &Value, quote_strings: bool, open: &mut HashSet<PairId>) {
        match v {
            Value::Number(n) => {
                let _ = write!(out, "{n}");
            }
            Value::Bool(b) => out.push_str(if *b { "#t" } else { "#f" }),
            Value::Str(s) if quote_strings => {
                let _ = write_string_literal(out, s);
            }
            Value::Str(s) => out.push_str(s),
            Value::Sym(s) => out.push_str(s),
            Value::Nil => out.push_str("()"),
            Value::Pair(id) => self.emit_list(out, *id, quote_strings, open),
            Value::Primitive(p) => {
                let _ = write!(out, "#<primitive {}>", p.spec().name);
            }
            Value::Closure(id) => match &self.closures.get(*id).lambda.name {
                Some(name) => {
                    let _ = write!(out, "#<procedure {name}>");
                }
                None => out.push_str("#<procedure anonymous>"),
            },
            Value::Continuation(_) => out.push_str("#<continuation>"),
            Value::Unspecified => out.push_str("#<unspecified>"),
        }
    }

    fn emit_list(
        &self,
        out: &mut String,
        id: PairId,
        quote_strings: bool,
        open: &mut HashSet<PairId>,
    ) {
        // pairs already being printed further up mark a cycle
        let mut entered = Vec::new();
        out.push('(');
        let mut cur = id;
        loop {
            if !open.insert(cur) {
                out.push_str("...");
                break;
            }
            entered.push(cur);
            let (car, cdr) = self.heap.get(cur);
            self.emit(out, car, quote_strings, open);
            match cdr {
                Value::Nil => break,
                Value::Pair(next) => {
                    out.push(' ');
                    cur = *next;
                }
                other => {
                    out.push_str(" . ");
                    self.emit(out, other, quote_strings, open);
                    break;
                }
            }
        }
        out.push(')');
        for p in entered {
            open.remove(&p);
        }
    }
}

impl State {
    pub fn printer(&self) -> Printer<'_> {
        Printer {
            heap: &self.heap,
            closures: &self.closures,
        }
    }

    /// External representation of `v` in this state.
    pub fn repr(&self, v: &Value) -> String {
        self.printer().write(v)
    }
}
