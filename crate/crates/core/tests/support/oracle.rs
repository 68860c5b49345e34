//! A direct big-step evaluator used as a reference for the machine.
//!
//! It shares only the parser with the crate under test. Values, environments,
//! numbers and primitives are all implemented here from scratch. `call/cc`
//! supports escaping continuations only, which is enough for the programs
//! it is compared on.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use cse_core::reader::{Expr, ExprKind, LambdaExpr};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub enum Num {
    I(BigInt),
    R(f64),
}

impl Num {
    fn f(&self) -> f64 {
        match self {
            Num::I(i) => i.to_f64().unwrap(),
            Num::R(r) => *r,
        }
    }
}

type Env = Rc<Scope>;

pub struct Scope {
    vars: RefCell<HashMap<String, V>>,
    parent: Option<Env>,
}

#[derive(Clone)]
pub enum V {
    Num(Num),
    Bool(bool),
    Str(String),
    Sym(String),
    Nil,
    Pair(Rc<RefCell<(V, V)>>),
    Prim(&'static str),
    Clo(Arc<LambdaExpr>, Env),
    Cont(u64),
    Unspec,
}

pub enum Abort {
    Error(String),
    Throw(u64, V),
}

type R = Result<V, Abort>;

fn err<T>(msg: impl Into<String>) -> Result<T, Abort> {
    Err(Abort::Error(msg.into()))
}

const PRIMS: &[&str] = &[
    "+",
    "-",
    "*",
    "/",
    "=",
    "<",
    ">",
    "<=",
    ">=",
    "quotient",
    "remainder",
    "abs",
    "cons",
    "car",
    "cdr",
    "list",
    "pair?",
    "null?",
    "set-car!",
    "set-cdr!",
    "eq?",
    "equal?",
    "not",
    "number?",
    "symbol?",
    "string?",
    "boolean?",
    "procedure?",
    "display",
    "newline",
    "error",
    "call/cc",
];

pub struct Oracle {
    global: Env,
    pub output: String,
    next_cont: Cell<u64>,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::new()
    }
}

impl Oracle {
    pub fn new() -> Oracle {
        let mut vars = HashMap::new();
        for p in PRIMS {
            vars.insert(p.to_string(), V::Prim(p));
        }
        vars.insert("call-with-current-continuation".into(), V::Prim("call/cc"));
        Oracle {
            global: Rc::new(Scope {
                vars: RefCell::new(vars),
                parent: None,
            }),
            output: String::new(),
            next_cont: Cell::new(0),
        }
    }

    /// Evaluate a whole program; `Ok` holds the printed value of the last
    /// expression.
    pub fn run(&mut self, program: &[Arc<Expr>]) -> Result<String, String> {
        let mut last = V::Unspec;
        for e in program {
            last = match self.eval(e, &self.global.clone()) {
                Ok(v) => v,
                Err(Abort::Error(m)) => return Err(m),
                Err(Abort::Throw(..)) => return Err("continuation re-entered".into()),
            };
        }
        Ok(write(&last))
    }

    fn eval(&mut self, e: &Expr, env: &Env) -> R {
        match &e.kind {
            ExprKind::Number(n) => Ok(V::Num(match n {
                cse_core::Number::Int(i) => Num::I(i.clone()),
                cse_core::Number::Real(r) => Num::R(*r),
            })),
            ExprKind::Str(s) => Ok(V::Str(s.to_string())),
            ExprKind::Bool(b) => Ok(V::Bool(*b)),
            ExprKind::Symbol(s) => Ok(V::Sym(s.to_string())),
            ExprKind::Unspecified => Ok(V::Unspec),
            ExprKind::Var(x) => lookup(env, x).ok_or_else(|| Abort::Error(format!("unbound {x}"))),
            ExprKind::Lambda(l) => Ok(V::Clo(l.clone(), env.clone())),
            ExprKind::Define { name, value } | ExprKind::Set { name, value } => {
                let v = self.eval(value, env)?;
                assign(env, name, v.clone());
                Ok(v)
            }
            ExprKind::If {
                test,
                consequent,
                alternative,
            } => {
                let t = self.eval(test, env)?;
                if !matches!(t, V::Bool(false)) {
                    self.eval(consequent, env)
                } else if let Some(a) = alternative {
                    self.eval(a, env)
                } else {
                    Ok(V::Unspec)
                }
            }
            ExprKind::Begin(body) => self.body(body, env),
            ExprKind::App { operator, operands } => {
                let f = self.eval(operator, env)?;
                let mut args = Vec::new();
                for a in operands {
                    args.push(self.eval(a, env)?);
                }
                self.apply(f, args)
            }
        }
    }

    fn body(&mut self, body: &[Arc<Expr>], env: &Env) -> R {
        let mut last = V::Unspec;
        for e in body {
            last = self.eval(e, env)?;
        }
        Ok(last)
    }

    fn apply(&mut self, f: V, args: Vec<V>) -> R {
        match f {
            V::Clo(l, env) => {
                if l.params.len() != args.len() {
                    return err("arity");
                }
                let scope = Rc::new(Scope {
                    vars: RefCell::new(l.params.iter().cloned().zip(args).collect()),
                    parent: Some(env),
                });
                self.body(&l.body, &scope)
            }
            V::Cont(id) => {
                if args.len() != 1 {
                    return err("arity");
                }
                Err(Abort::Throw(id, args.into_iter().next().unwrap()))
            }
            V::Prim("call/cc") => {
                if args.len() != 1 {
                    return err("arity");
                }
                let id = self.next_cont.get();
                self.next_cont.set(id + 1);
                let receiver = args.into_iter().next().unwrap();
                if !matches!(receiver, V::Clo(..) | V::Prim(_) | V::Cont(_)) {
                    return err("not callable");
                }
                match self.apply(receiver, vec![V::Cont(id)]) {
                    Err(Abort::Throw(t, v)) if t == id => Ok(v),
                    other => other,
                }
            }
            V::Prim(p) => self.prim(p, args),
            _ => err("not callable"),
        }
    }

    fn prim(&mut self, p: &str, a: Vec<V>) -> R {
        let n = a.len();
        let want = |k: usize| if n == k { Ok(()) } else { err("arity") };
        match p {
            "+" | "*" => {
                let mut acc = Num::I(BigInt::from(if p == "+" { 0 } else { 1 }));
                for x in &a {
                    acc = arith(p, &acc, num(x)?);
                }
                Ok(V::Num(acc))
            }
            "-" => {
                if n == 0 {
                    return err("arity");
                }
                if n == 1 {
                    return Ok(V::Num(arith("-", &Num::I(BigInt::zero()), num(&a[0])?)));
                }
                let mut acc = num(&a[0])?.clone();
                for x in &a[1..] {
                    acc = arith("-", &acc, num(x)?);
                }
                Ok(V::Num(acc))
            }
            "/" => {
                if n == 0 {
                    return err("arity");
                }
                let (mut acc, rest) = if n == 1 {
                    (Num::I(BigInt::from(1)), &a[..])
                } else {
                    (num(&a[0])?.clone(), &a[1..])
                };
                for x in rest {
                    let d = num(x)?;
                    acc = match (&acc, d) {
                        (_, Num::I(z)) if z.is_zero() => return err("division by zero"),
                        (Num::I(x), Num::I(y)) if (x % y).is_zero() => Num::I(x / y),
                        _ => Num::R(acc.f() / d.f()),
                    };
                }
                Ok(V::Num(acc))
            }
            "=" | "<" | ">" | "<=" | ">=" => {
                if n < 2 {
                    return err("arity");
                }
                let mut ok = true;
                for w in a.windows(2) {
                    let (x, y) = (num(&w[0])?, num(&w[1])?);
                    let c = match (x, y) {
                        (Num::I(x), Num::I(y)) => x.partial_cmp(y),
                        _ => x.f().partial_cmp(&y.f()),
                    };
                    let hold = match (p, c) {
                        (_, None) => false,
                        ("=", Some(c)) => c.is_eq(),
                        ("<", Some(c)) => c.is_lt(),
                        (">", Some(c)) => c.is_gt(),
                        ("<=", Some(c)) => c.is_le(),
                        (_, Some(c)) => c.is_ge(),
                    };
                    ok &= hold;
                }
                Ok(V::Bool(ok))
            }
            "quotient" | "remainder" => {
                want(2)?;
                match (num(&a[0])?, num(&a[1])?) {
                    (Num::I(_), Num::I(y)) if y.is_zero() => err("division by zero"),
                    (Num::I(x), Num::I(y)) => {
                        Ok(V::Num(Num::I(if p == "quotient" { x / y } else { x % y })))
                    }
                    _ => err("integer expected"),
                }
            }
            "abs" => {
                want(1)?;
                Ok(V::Num(match num(&a[0])? {
                    Num::I(i) => Num::I(if i < &BigInt::zero() { -i } else { i.clone() }),
                    Num::R(r) => Num::R(r.abs()),
                }))
            }
            "cons" => {
                want(2)?;
                Ok(V::Pair(Rc::new(RefCell::new((a[0].clone(), a[1].clone())))))
            }
            "car" | "cdr" => {
                want(1)?;
                match &a[0] {
                    V::Pair(c) => {
                        let c = c.borrow();
                        Ok(if p == "car" { c.0.clone() } else { c.1.clone() })
                    }
                    _ => err("pair expected"),
                }
            }
            "set-car!" | "set-cdr!" => {
                want(2)?;
                match &a[0] {
                    V::Pair(c) => {
                        let mut c = c.borrow_mut();
                        if p == "set-car!" {
                            c.0 = a[1].clone();
                        } else {
                            c.1 = a[1].clone();
                        }
                        Ok(V::Unspec)
                    }
                    _ => err("pair expected"),
                }
            }
            "list" => Ok(a
                .into_iter()
                .rev()
                .fold(V::Nil, |tail, x| V::Pair(Rc::new(RefCell::new((x, tail)))))),
            "pair?" => want(1).map(|_| V::Bool(matches!(a[0], V::Pair(_)))),
            "null?" => want(1).map(|_| V::Bool(matches!(a[0], V::Nil))),
            "not" => want(1).map(|_| V::Bool(matches!(a[0], V::Bool(false)))),
            "number?" => want(1).map(|_| V::Bool(matches!(a[0], V::Num(_)))),
            "symbol?" => want(1).map(|_| V::Bool(matches!(a[0], V::Sym(_)))),
            "string?" => want(1).map(|_| V::Bool(matches!(a[0], V::Str(_)))),
            "boolean?" => want(1).map(|_| V::Bool(matches!(a[0], V::Bool(_)))),
            "procedure?" => {
                want(1).map(|_| V::Bool(matches!(a[0], V::Prim(_) | V::Clo(..) | V::Cont(_))))
            }
            "eq?" => want(2).map(|_| V::Bool(eq(&a[0], &a[1]))),
            "equal?" => want(2).map(|_| V::Bool(equal(&a[0], &a[1]))),
            "display" => {
                want(1)?;
                self.output.push_str(&display(&a[0]));
                Ok(V::Unspec)
            }
            "newline" => {
                want(0)?;
                self.output.push('\n');
                Ok(V::Unspec)
            }
            "error" => err(a.first().map(display).unwrap_or_default()),
            _ => err(format!("unknown primitive {p}")),
        }
    }
}

fn num(v: &V) -> Result<&Num, Abort> {
    match v {
        V::Num(n) => Ok(n),
        _ => err("number expected"),
    }
}

fn arith(op: &str, x: &Num, y: &Num) -> Num {
    match (x, y) {
        (Num::I(a), Num::I(b)) => Num::I(match op {
            "+" => a + b,
            "-" => a - b,
            _ => a * b,
        }),
        _ => Num::R(match op {
            "+" => x.f() + y.f(),
            "-" => x.f() - y.f(),
            _ => x.f() * y.f(),
        }),
    }
}

fn lookup(env: &Env, x: &str) -> Option<V> {
    let mut cur = Some(env);
    while let Some(s) = cur {
        if let Some(v) = s.vars.borrow().get(x) {
            return Some(v.clone());
        }
        cur = s.parent.as_ref();
    }
    None
}

fn assign(env: &Env, x: &str, v: V) {
    let mut cur = Some(env);
    while let Some(s) = cur {
        if let Some(slot) = s.vars.borrow_mut().get_mut(x) {
            *slot = v;
            return;
        }
        cur = s.parent.as_ref();
    }
    env.vars.borrow_mut().insert(x.to_string(), v);
}

fn eq(a: &V, b: &V) -> bool {
    match (a, b) {
        (V::Pair(x), V::Pair(y)) => Rc::ptr_eq(x, y),
        (V::Clo(x, ex), V::Clo(y, ey)) => Arc::ptr_eq(x, y) && Rc::ptr_eq(ex, ey),
        (V::Num(Num::I(x)), V::Num(Num::I(y))) => x == y,
        (V::Num(Num::R(x)), V::Num(Num::R(y))) => x == y,
        (V::Bool(x), V::Bool(y)) => x == y,
        (V::Sym(x), V::Sym(y)) => x == y,
        (V::Str(x), V::Str(y)) => x == y,
        (V::Nil, V::Nil) | (V::Unspec, V::Unspec) => true,
        (V::Prim(x), V::Prim(y)) => x == y,
        (V::Cont(x), V::Cont(y)) => x == y,
        _ => false,
    }
}

fn equal(a: &V, b: &V) -> bool {
    match (a, b) {
        (V::Pair(x), V::Pair(y)) => {
            let (x, y) = (x.borrow(), y.borrow());
            equal(&x.0, &y.0) && equal(&x.1, &y.1)
        }
        _ => eq(a, b),
    }
}

fn real(r: f64) -> String {
    if r.is_nan() {
        "+nan.0".into()
    } else if r.is_infinite() {
        if r > 0.0 { "+inf.0" } else { "-inf.0" }.into()
    } else {
        format!("{r:?}")
    }
}

fn show(v: &V, quote: bool) -> String {
    match v {
        V::Num(Num::I(i)) => i.to_string(),
        V::Num(Num::R(r)) => real(*r),
        V::Bool(true) => "#t".into(),
        V::Bool(false) => "#f".into(),
        V::Str(s) if quote => {
            let mut out = String::from("\"");
            for c in s.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\t' => out.push_str("\\t"),
                    '\r' => out.push_str("\\r"),
                    c => out.push(c),
                }
            }
            out.push('"');
            out
        }
        V::Str(s) | V::Sym(s) => s.clone(),
        V::Nil => "()".into(),
        V::Pair(_) => {
            let mut parts = Vec::new();
            let mut cur = v.clone();
            let tail = loop {
                match cur {
                    V::Pair(c) => {
                        let (car, cdr) = c.borrow().clone();
                        parts.push(show(&car, quote));
                        cur = cdr;
                    }
                    V::Nil => break None,
                    other => break Some(show(&other, quote)),
                }
            };
            match tail {
                None => format!("({})", parts.join(" ")),
                Some(t) => format!("({} . {t})", parts.join(" ")),
            }
        }
        V::Prim(p) => format!("#<primitive {p}>"),
        V::Clo(l, _) => match &l.name {
            Some(n) => format!("#<procedure {n}>"),
            None => "#<procedure anonymous>".into(),
        },
        V::Cont(_) => "#<continuation>".into(),
        V::Unspec => "#<unspecified>".into(),
    }
}

pub fn write(v: &V) -> String {
    show(v, true)
}

pub fn display(v: &V) -> String {
    show(v, false)
}
