//! The global environment `E₀` and the primitive operations bound in it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::machine::{
    Arity, ClosureStore, EnvId, EnvStore, Frame, PairHeap, PrimitiveError, Printer, Value,
};
use crate::number::Number;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Effect {
    Pure,
    Allocating,
    Mutating,
    Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimitiveSpec {
    pub name: &'static str,
    pub arity: Arity,
    pub effect: Effect,
}

macro_rules! primitives {
    ($($variant:ident => $name:literal, $arity:expr, $effect:ident;)*) => {
        /// A built-in procedure. `CallCc` is the continuation-capturing
        /// marker; the machine handles it with its own rule.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum Primitive {
            $($variant,)*
        }

        impl Primitive {
            pub const ALL: &'static [Primitive] = &[$(Primitive::$variant,)*];

            pub fn spec(self) -> &'static PrimitiveSpec {
                match self {
                    $(Primitive::$variant => &PrimitiveSpec {
                        name: $name,
                        arity: $arity,
                        effect: Effect::$effect,
                    },)*
                }
            }
        }
    };
}

use Arity::{AtLeast, Exactly};

primitives! {
    Add => "+", AtLeast(0), Pure;
    Sub => "-", AtLeast(1), Pure;
    Mul => "*", AtLeast(0), Pure;
    Div => "/", AtLeast(1), Pure;
    NumEq => "=", AtLeast(2), Pure;
    Lt => "<", AtLeast(2), Pure;
    Gt => ">", AtLeast(2), Pure;
    Le => "<=", AtLeast(2), Pure;
    Ge => ">=", AtLeast(2), Pure;
    Quotient => "quotient", Exactly(2), Pure;
    Remainder => "remainder", Exactly(2), Pure;
    Abs => "abs", Exactly(1), Pure;
    Cons => "cons", Exactly(2), Allocating;
    Car => "car", Exactly(1), Pure;
    Cdr => "cdr", Exactly(1), Pure;
    List => "list", AtLeast(0), Allocating;
    IsPair => "pair?", Exactly(1), Pure;
    IsNull => "null?", Exactly(1), Pure;
    SetCar => "set-car!", Exactly(2), Mutating;
    SetCdr => "set-cdr!", Exactly(2), Mutating;
    IsEq => "eq?", Exactly(2), Pure;
    IsEqual => "equal?", Exactly(2), Pure;
    Not => "not", Exactly(1), Pure;
    IsNumber => "number?", Exactly(1), Pure;
    IsSymbol => "symbol?", Exactly(1), Pure;
    IsString => "string?", Exactly(1), Pure;
    IsBoolean => "boolean?", Exactly(1), Pure;
    IsProcedure => "procedure?", Exactly(1), Pure;
    StringToSymbol => "string->symbol", Exactly(1), Pure;
    Display => "display", Exactly(1), Output;
    Newline => "newline", Exactly(0), Output;
    Error => "error", AtLeast(1), Pure;
    CallCc => "call/cc", Exactly(1), Pure;
}

/// Names bound in `E₀`, in binding order. `call-with-current-continuation`
/// is an alias for the same `call/cc` marker.
pub fn bindings() -> Vec<(&'static str, Primitive)> {
    let mut out: Vec<_> = Primitive::ALL.iter().map(|p| (p.spec().name, *p)).collect();
    out.push(("call-with-current-continuation", Primitive::CallCc));
    out
}

/// A store holding only the global frame, and that frame's id.
pub fn make_initial_environment() -> (EnvStore, EnvId) {
    let mut store = EnvStore::new();
    let frame = Frame {
        bindings: bindings()
            .into_iter()
            .map(|(name, p)| (name.to_string(), Value::Primitive(p)))
            .collect(),
        parent: None,
    };
    let id = store.alloc(frame);
    debug_assert_eq!(id, EnvId::GLOBAL);
    (store, id)
}

fn type_error(expected: &'static str, got: &Value, cx: Cx<'_>) -> PrimitiveError {
    PrimitiveError::TypeError {
        expected,
        got: cx.printer().write(got),
    }
}

/// Read-only view of the stores, for type checks and printing.
#[derive(Clone, Copy)]
struct Cx<'a> {
    heap: &'a PairHeap,
    closures: &'a ClosureStore,
}

impl<'a> Cx<'a> {
    fn printer(self) -> Printer<'a> {
        Printer {
            heap: self.heap,
            closures: self.closures,
        }
    }
}

fn number<'v>(v: &'v Value, cx: Cx<'_>) -> Result<&'v Number, PrimitiveError> {
    match v {
        Value::Number(n) => Ok(n),
        other => Err(type_error("number", other, cx)),
    }
}

fn numbers<'v>(args: &'v [Value], cx: Cx<'_>) -> Result<Vec<&'v Number>, PrimitiveError> {
    args.iter().map(|v| number(v, cx)).collect()
}

fn pair(v: &Value, cx: Cx<'_>) -> Result<crate::machine::PairId, PrimitiveError> {
    match v {
        Value::Pair(id) => Ok(*id),
        other => Err(type_error("pair", other, cx)),
    }
}

fn chain(
    args: &[Value],
    cx: Cx<'_>,
    holds: impl Fn(std::cmp::Ordering) -> bool,
) -> Result<Value, PrimitiveError> {
    let nums = numbers(args, cx)?;
    Ok(Value::Bool(
        nums.windows(2)
            .all(|w| w[0].compare(w[1]).is_some_and(&holds)),
    ))
}

/// Structural equality, following pairs.
pub fn is_equal(a: &Value, b: &Value, heap: &PairHeap) -> bool {
    match (a, b) {
        (Value::Pair(x), Value::Pair(y)) => {
            x == y || {
                let (xa, xd) = heap.get(*x);
                let (ya, yd) = heap.get(*y);
                is_equal(xa, ya, heap) && is_equal(xd, yd, heap)
            }
        }
        _ => a.is_eq(b),
    }
}

/// `f(v₁, …, vₙ)` for a primitive `f`. Arity has already been checked.
/// Fails before touching `heap` or `out`.
pub fn apply_primitive(
    prim: Primitive,
    args: &[Value],
    heap: &mut PairHeap,
    closures: &ClosureStore,
    out: &mut String,
) -> Result<Value, PrimitiveError> {
    use std::cmp::Ordering::*;
    use Primitive::*;

    let cx = Cx {
        heap: &*heap,
        closures,
    };

    let v = match prim {
        Add => Value::Number(
            numbers(args, cx)?
                .into_iter()
                .fold(Number::int(0), |acc, n| acc.add(n)),
        ),
        Mul => Value::Number(
            numbers(args, cx)?
                .into_iter()
                .fold(Number::int(1), |acc, n| acc.mul(n)),
        ),
        Sub => {
            let nums = numbers(args, cx)?;
            match nums.as_slice() {
                [only] => Value::Number(only.neg()),
                [first, rest @ ..] => {
                    Value::Number(rest.iter().fold((*first).clone(), |acc, n| acc.sub(n)))
                }
                [] => unreachable!("arity checked"),
            }
        }
        Div => {
            let nums = numbers(args, cx)?;
            let (first, rest) = match nums.as_slice() {
                [only] => (Number::int(1), std::slice::from_ref(only)),
                [first, rest @ ..] => ((*first).clone(), rest),
                [] => unreachable!("arity checked"),
            };
            let mut acc = first;
            for n in rest {
                acc = acc.div(n).ok_or(PrimitiveError::DivisionByZero)?;
            }
            Value::Number(acc)
        }
        NumEq => chain(args, cx, |o| o == Equal)?,
        Lt => chain(args, cx, |o| o == Less)?,
        Gt => chain(args, cx, |o| o == Greater)?,
        Le => chain(args, cx, |o| o != Greater)?,
        Ge => chain(args, cx, |o| o != Less)?,
        Quotient | Remainder => {
            let a = number(&args[0], cx)?;
            let b = number(&args[1], cx)?;
            if !a.is_exact() {
                return Err(type_error("integer", &args[0], cx));
            }
            if !b.is_exact() {
                return Err(type_error("integer", &args[1], cx));
            }
            let r = if prim == Quotient {
                a.quotient(b)
            } else {
                a.remainder(b)
            };
            Value::Number(r.ok_or(PrimitiveError::DivisionByZero)?)
        }
        Abs => Value::Number(number(&args[0], cx)?.abs()),
        Cons => Value::Pair(heap.cons(args[0].clone(), args[1].clone())),
        Car => heap.car(pair(&args[0], cx)?).clone(),
        Cdr => heap.cdr(pair(&args[0], cx)?).clone(),
        List => heap.list(args.iter().cloned()),
        IsPair => Value::Bool(matches!(args[0], Value::Pair(_))),
        IsNull => Value::Bool(matches!(args[0], Value::Nil)),
        SetCar => {
            let id = pair(&args[0], cx)?;
            heap.set_car(id, args[1].clone());
            Value::Unspecified
        }
        SetCdr => {
            let id = pair(&args[0], cx)?;
            heap.set_cdr(id, args[1].clone());
            Value::Unspecified
        }
        IsEq => Value::Bool(args[0].is_eq(&args[1])),
        IsEqual => Value::Bool(is_equal(&args[0], &args[1], heap)),
        Not => Value::Bool(matches!(args[0], Value::Bool(false))),
        IsNumber => Value::Bool(matches!(args[0], Value::Number(_))),
        IsSymbol => Value::Bool(matches!(args[0], Value::Sym(_))),
        IsString => Value::Bool(matches!(args[0], Value::Str(_))),
        IsBoolean => Value::Bool(matches!(args[0], Value::Bool(_))),
        IsProcedure => Value::Bool(args[0].is_callable()),
        StringToSymbol => match &args[0] {
            Value::Str(s) => Value::Sym(Arc::clone(s)),
            other => return Err(type_error("string", other, cx)),
        },
        Display => {
            let text = cx.printer().display(&args[0]);
            out.push_str(&text);
            Value::Unspecified
        }
        Newline => {
            out.push('\n');
            Value::Unspecified
        }
        Error => {
            let printer = cx.printer();
            let mut msg = printer.display(&args[0]);
            for irritant in &args[1..] {
                msg.push(' ');
                msg.push_str(&printer.write(irritant));
            }
            return Err(PrimitiveError::User(msg));
        }
        CallCc => unreachable!("call/cc has its own machine rule"),
    };
    Ok(v)
}
