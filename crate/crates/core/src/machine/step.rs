use std::sync::Arc;

use super::rules::{rule_for, Rule};
use super::state::{ControlItem, Instruction, State};
use super::store::{Closure, Frame};
use super::value::{Continuation, Value};
use super::{Arity, ErrorKind, MachineError};
use crate::prelude;
use crate::reader::{Expr, ExprKind, SourceSpan};

#[derive(Clone, Debug)]
pub enum StepResult {
    /// One rule fired; the state now holds the successor.
    Next(Rule),
    /// The state was already final; nothing changed.
    Final(Value),
}

impl State {
    /// Apply the one rule selected by the head of the control.
    ///
    /// On error the state is left exactly as it was before the call.
    pub fn step(&mut self) -> Result<StepResult, MachineError> {
        if let Some(v) = self.final_value() {
            return Ok(StepResult::Final(v));
        }
        let rule = rule_for(self)?;
        self.apply(rule)?;
        self.step_number += 1;
        self.last_rule = Some(rule);
        Ok(StepResult::Next(rule))
    }

    fn error(&self, kind: ErrorKind, span: Option<SourceSpan>) -> MachineError {
        MachineError {
            kind,
            step: self.step_number,
            span,
        }
    }

    fn apply(&mut self, rule: Rule) -> Result<(), MachineError> {
        let head = self.control.last().expect("rule_for checked control");
        match rule {
            Rule::EvaluatePrimitive => {
                let ControlItem::Expr(e) = self.control.pop().unwrap() else {
                    unreachable!()
                };
                self.stash.push(literal_value(&e));
            }
            Rule::LookupVariable => {
                let ControlItem::Expr(e) = head else {
                    unreachable!()
                };
                let ExprKind::Var(name) = &e.kind else {
                    unreachable!()
                };
                let Some(v) = self.envs.lookup(self.env, name).cloned() else {
                    return Err(self.error(ErrorKind::UnboundVariable(name.clone()), Some(e.span)));
                };
                self.control.pop();
                self.stash.push(v);
            }
            Rule::ConstructClosure => {
                let ControlItem::Expr(e) = self.control.pop().unwrap() else {
                    unreachable!()
                };
                let ExprKind::Lambda(lambda) = &e.kind else {
                    unreachable!()
                };
                let id = self.closures.alloc(Closure {
                    lambda: lambda.clone(),
                    env: self.env,
                });
                self.stash.push(Value::Closure(id));
            }
            Rule::DecomposeCall => {
                let ControlItem::Expr(e) = self.control.pop().unwrap() else {
                    unreachable!()
                };
                let ExprKind::App { operator, operands } = &e.kind else {
                    unreachable!()
                };
                self.control.push(ControlItem::Instr(Instruction::Call {
                    arity: operands.len(),
                    span: e.span,
                }));
                for operand in operands.iter().rev() {
                    self.control.push(ControlItem::Expr(operand.clone()));
                }
                self.control.push(ControlItem::Expr(operator.clone()));
            }
            Rule::DecomposeDefine | Rule::DecomposeSet => {
                let ControlItem::Expr(e) = self.control.pop().unwrap() else {
                    unreachable!()
                };
                let (ExprKind::Define { name, value } | ExprKind::Set { name, value }) = &e.kind
                else {
                    unreachable!()
                };
                self.control
                    .push(ControlItem::Instr(Instruction::Asgn(name.clone())));
                self.control.push(ControlItem::Expr(value.clone()));
            }
            Rule::DecomposeIf => {
                let ControlItem::Expr(e) = self.control.pop().unwrap() else {
                    unreachable!()
                };
                let ExprKind::If {
                    test,
                    consequent,
                    alternative,
                } = &e.kind
                else {
                    unreachable!()
                };
                let alternative = alternative.clone().unwrap_or_else(|| {
                    let end = SourceSpan {
                        start: e.span.end,
                        start_line: e.span.end_line,
                        start_col: e.span.end_col,
                        ..e.span
                    };
                    Arc::new(Expr::new(ExprKind::Unspecified, end))
                });
                self.control.push(ControlItem::Instr(Instruction::Branch {
                    consequent: consequent.clone(),
                    alternative,
                }));
                self.control.push(ControlItem::Expr(test.clone()));
            }
            Rule::DecomposeSequence | Rule::DecomposeBegin => {
                let body = match self.control.pop().unwrap() {
                    ControlItem::Seq(body) => body,
                    ControlItem::Expr(e) => match &e.kind {
                        ExprKind::Begin(body) => body.clone(),
                        _ => unreachable!(),
                    },
                    ControlItem::Instr(_) => unreachable!(),
                };
                // V₁:POP:V₂:POP:…:Vₙ
                for (i, e) in body.iter().enumerate().rev() {
                    if i + 1 < body.len() {
                        self.control.push(ControlItem::Instr(Instruction::Pop));
                    }
                    self.control.push(ControlItem::Expr(e.clone()));
                }
            }
            Rule::AssignVariable => {
                let ControlItem::Instr(Instruction::Asgn(name)) = self.control.pop().unwrap()
                else {
                    unreachable!()
                };
                let v = self.stash.last().unwrap().clone();
                self.envs.assign(self.env, &name, v);
            }
            Rule::RestoreEnvironment => {
                let ControlItem::Instr(Instruction::Env(env)) = self.control.pop().unwrap() else {
                    unreachable!()
                };
                self.env = env;
            }
            Rule::BranchConsequent | Rule::BranchAlternative => {
                let ControlItem::Instr(Instruction::Branch {
                    consequent,
                    alternative,
                }) = self.control.pop().unwrap()
                else {
                    unreachable!()
                };
                self.stash.pop();
                let chosen = if rule == Rule::BranchConsequent {
                    consequent
                } else {
                    alternative
                };
                self.control.push(ControlItem::Expr(chosen));
            }
            Rule::RemoveUnusedValue => {
                self.control.pop();
                self.stash.pop();
            }
            Rule::ApplyPrimitive => self.apply_primitive()?,
            Rule::ApplyClosure => self.apply_closure()?,
            Rule::ApplyCallcc => self.apply_callcc()?,
            Rule::ApplyContinuation => {
                let (arity, _) = self.call_head();
                let args = self.stash.split_off(self.stash.len() - arity);
                let Some(Value::Continuation(cont)) = self.stash.pop() else {
                    unreachable!()
                };
                self.apply_continuation(&cont, args);
            }
        }
        Ok(())
    }

    fn call_head(&self) -> (usize, SourceSpan) {
        match self.control.last() {
            Some(ControlItem::Instr(Instruction::Call { arity, span })) => (*arity, *span),
            _ => unreachable!("CALL rule without CALL on control"),
        }
    }

    fn apply_primitive(&mut self) -> Result<(), MachineError> {
        let (arity, span) = self.call_head();
        let callee_at = self.stash.len() - arity - 1;
        let Value::Primitive(prim) = self.stash[callee_at] else {
            unreachable!()
        };
        let spec = prim.spec();
        if !spec.arity.accepts(arity) {
            return Err(self.error(
                ErrorKind::ArityMismatch {
                    procedure: spec.name.to_string(),
                    expected: spec.arity,
                    got: arity,
                },
                Some(span),
            ));
        }
        let result = prelude::apply_primitive(
            prim,
            &self.stash[callee_at + 1..],
            &mut self.heap,
            &self.closures,
            &mut self.output,
        )
        .map_err(|error| {
            self.error(
                ErrorKind::Primitive {
                    name: spec.name,
                    error,
                },
                Some(span),
            )
        })?;
        self.control.pop();
        self.stash.truncate(callee_at);
        self.stash.push(result);
        Ok(())
    }

    fn apply_closure(&mut self) -> Result<(), MachineError> {
        let (arity, span) = self.call_head();
        let callee_at = self.stash.len() - arity - 1;
        let Value::Closure(id) = self.stash[callee_at] else {
            unreachable!()
        };
        let closure = self.closures.get(id).clone();
        let params = &closure.lambda.params;
        if params.len() != arity {
            return Err(self.error(
                ErrorKind::ArityMismatch {
                    procedure: closure
                        .lambda
                        .name
                        .clone()
                        .unwrap_or_else(|| "anonymous procedure".into()),
                    expected: Arity::Exactly(params.len()),
                    got: arity,
                },
                Some(span),
            ));
        }

        let args = self.stash.split_off(callee_at + 1);
        self.stash.pop();
        let frame = Frame {
            bindings: params.iter().cloned().zip(args).collect(),
            parent: Some(closure.env),
        };
        let new_env = self.envs.alloc(frame);

        self.control.pop();
        let tail_position = matches!(
            self.control.last(),
            None | Some(ControlItem::Instr(Instruction::Env(_)))
        );
        if !(self.config.proper_tail_calls && tail_position) {
            self.control
                .push(ControlItem::Instr(Instruction::Env(self.env)));
        }
        self.control
            .push(ControlItem::for_body(&closure.lambda.body));
        self.env = new_env;
        Ok(())
    }

    fn apply_callcc(&mut self) -> Result<(), MachineError> {
        let (arity, span) = self.call_head();
        if arity != 1 {
            return Err(self.error(
                ErrorKind::ArityMismatch {
                    procedure: "call/cc".into(),
                    expected: Arity::Exactly(1),
                    got: arity,
                },
                Some(span),
            ));
        }
        let receiver = self.stash.last().unwrap();
        if !receiver.is_callable() {
            return Err(self.error(ErrorKind::NotCallable(self.repr(receiver)), Some(span)));
        }
        let receiver = self.stash.pop().unwrap();
        self.stash.pop(); // callcc itself
        let call = self.control.pop().unwrap();
        let cont = Continuation {
            control: self.control.clone(),
            stash: self.stash.clone(),
            env: self.env,
        };
        self.control.push(call);
        self.stash.push(receiver);
        self.stash.push(Value::Continuation(Arc::new(cont)));
        Ok(())
    }

    /// Replace control, stash and environment with the captured ones, with
    /// `args` pushed onto the captured stash. Stores are untouched.
    pub fn apply_continuation(&mut self, cont: &Continuation, args: Vec<Value>) {
        self.control = cont.control.clone();
        self.stash = cont.stash.clone();
        self.stash.extend(args);
        self.env = cont.env;
    }
}

fn literal_value(e: &Expr) -> Value {
    match &e.kind {
        ExprKind::Number(n) => Value::Number(n.clone()),
        ExprKind::Str(s) => Value::Str(s.clone()),
        ExprKind::Bool(b) => Value::Bool(*b),
        ExprKind::Symbol(s) => Value::Sym(s.clone()),
        ExprKind::Unspecified => Value::Unspecified,
        _ => unreachable!("not a literal"),
    }
}
