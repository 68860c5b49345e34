use std::sync::Arc;

use super::state::ControlItem;
use super::store::{ClosureId, EnvId, PairId};
use crate::number::Number;
use crate::prelude::Primitive;

/// A run-time datum on the stash, in a binding or in a pair cell.
#[derive(Clone, Debug)]
pub enum Value {
    Number(Number),
    Bool(bool),
    Str(Arc<str>),
    Sym(Arc<str>),
    Nil,
    Pair(PairId),
    Primitive(Primitive),
    Closure(ClosureId),
    Continuation(Arc<Continuation>),
    Unspecified,
}

/// `CONT C S E`: a reified machine state.
#[derive(Clone, Debug)]
pub struct Continuation {
    /// Top of the captured control is the last element.
    pub control: Vec<ControlItem>,
    /// Top of the captured stash is the last element.
    pub stash: Vec<Value>,
    pub env: EnvId,
}

impl Value {
    pub fn is_truthy(&self) -> bool {
        !matches!(self, Value::Bool(false))
    }

    pub fn is_callable(&self) -> bool {
        matches!(
            self,
            Value::Primitive(_) | Value::Closure(_) | Value::Continuation(_)
        )
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Number(_) => "number",
            Value::Bool(_) => "boolean",
            Value::Str(_) => "string",
            Value::Sym(_) => "symbol",
            Value::Nil => "nil",
            Value::Pair(_) => "pair",
            Value::Primitive(_) => "primitive",
            Value::Closure(_) => "closure",
            Value::Continuation(_) => "continuation",
            Value::Unspecified => "unspecified",
        }
    }

    /// `eq?`: identity for pairs, closures and continuations, value for
    /// atoms.
    pub fn is_eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Number(a), Value::Number(b)) => a.eqv(b),
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Str(a), Value::Str(b)) => a == b,
            (Value::Sym(a), Value::Sym(b)) => a == b,
            (Value::Nil, Value::Nil) => true,
            (Value::Pair(a), Value::Pair(b)) => a == b,
            (Value::Primitive(a), Value::Primitive(b)) => a == b,
            (Value::Closure(a), Value::Closure(b)) => a == b,
            (Value::Continuation(a), Value::Continuation(b)) => Arc::ptr_eq(a, b),
            (Value::Unspecified, Value::Unspecified) => true,
            _ => false,
        }
    }
}

impl From<Number> for Value {
    fn from(n: Number) -> Self {
        Value::Number(n)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}
