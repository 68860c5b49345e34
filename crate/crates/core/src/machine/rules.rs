use serde::{Deserialize, Serialize};

use super::state::{ControlItem, Instruction, State};
use super::value::Value;
use super::{ErrorKind, MachineError};
use crate::prelude::Primitive;
use crate::reader::ExprKind;

/// The transition rules of the machine, named as in the rule tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    // expression decomposition
    #[serde(rename = "Decompose n-ary procedure call")]
    DecomposeCall,
    #[serde(rename = "Construct closure")]
    ConstructClosure,
    #[serde(rename = "Decompose variable declaration")]
    DecomposeDefine,
    #[serde(rename = "Decompose variable assignment")]
    DecomposeSet,
    #[serde(rename = "Decompose conditional expression")]
    DecomposeIf,
    #[serde(rename = "Decompose expression sequence")]
    DecomposeSequence,
    #[serde(rename = "Decompose begin expression")]
    DecomposeBegin,
    // reduction
    #[serde(rename = "Evaluate primitive")]
    EvaluatePrimitive,
    #[serde(rename = "Lookup variable")]
    LookupVariable,
    #[serde(rename = "Apply operator or simple procedure")]
    ApplyPrimitive,
    #[serde(rename = "Apply closure")]
    ApplyClosure,
    #[serde(rename = "Apply callcc")]
    ApplyCallcc,
    #[serde(rename = "Apply continuation")]
    ApplyContinuation,
    #[serde(rename = "Restore environment")]
    RestoreEnvironment,
    #[serde(rename = "Assign variable to value")]
    AssignVariable,
    #[serde(rename = "Branch to consequent")]
    BranchConsequent,
    #[serde(rename = "Branch to alternative")]
    BranchAlternative,
    #[serde(rename = "Remove unused value")]
    RemoveUnusedValue,
}

impl Rule {
    pub const ALL: [Rule; 18] = [
        Rule::DecomposeCall,
        Rule::ConstructClosure,
        Rule::DecomposeDefine,
        Rule::DecomposeSet,
        Rule::DecomposeIf,
        Rule::DecomposeSequence,
        Rule::DecomposeBegin,
        Rule::EvaluatePrimitive,
        Rule::LookupVariable,
        Rule::ApplyPrimitive,
        Rule::ApplyClosure,
        Rule::ApplyCallcc,
        Rule::ApplyContinuation,
        Rule::RestoreEnvironment,
        Rule::AssignVariable,
        Rule::BranchConsequent,
        Rule::BranchAlternative,
        Rule::RemoveUnusedValue,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::DecomposeCall => "Decompose n-ary procedure call",
            Rule::ConstructClosure => "Construct closure",
            Rule::DecomposeDefine => "Decompose variable declaration",
            Rule::DecomposeSet => "Decompose variable assignment",
            Rule::DecomposeIf => "Decompose conditional expression",
            Rule::DecomposeSequence => "Decompose expression sequence",
            Rule::DecomposeBegin => "Decompose begin expression",
            Rule::EvaluatePrimitive => "Evaluate primitive",
            Rule::LookupVariable => "Lookup variable",
            Rule::ApplyPrimitive => "Apply operator or simple procedure",
            Rule::ApplyClosure => "Apply closure",
            Rule::ApplyCallcc => "Apply callcc",
            Rule::ApplyContinuation => "Apply continuation",
            Rule::RestoreEnvironment => "Restore environment",
            Rule::AssignVariable => "Assign variable to value",
            Rule::BranchConsequent => "Branch to consequent",
            Rule::BranchAlternative => "Branch to alternative",
            Rule::RemoveUnusedValue => "Remove unused value",
        }
    }

    pub fn is_decomposition(self) -> bool {
        matches!(
            self,
            Rule::DecomposeCall
                | Rule::ConstructClosure
                | Rule::DecomposeDefine
                | Rule::DecomposeSet
                | Rule::DecomposeIf
                | Rule::DecomposeSequence
                | Rule::DecomposeBegin
        )
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which rule applies to `state`. The head of the control decides, plus the
/// stash for `CALL` and `BRANCH`.
pub fn rule_for(state: &State) -> Result<Rule, MachineError> {
    let no_rule = |why: &str| MachineError {
        kind: ErrorKind::NoRuleApplies(why.to_string()),
        step: state.step_number,
        span: state.control.last().and_then(ControlItem::span),
    };
    let Some(head) = state.control.last() else {
        return Err(no_rule("control is empty"));
    };
    let stash_top = state.stash.last();
    let rule = match head {
        ControlItem::Expr(e) => match &e.kind {
            ExprKind::Number(_)
            | ExprKind::Str(_)
            | ExprKind::Bool(_)
            | ExprKind::Symbol(_)
            | ExprKind::Unspecified => Rule::EvaluatePrimitive,
            ExprKind::Var(_) => Rule::LookupVariable,
            ExprKind::Lambda(_) => Rule::ConstructClosure,
            ExprKind::Define { .. } => Rule::DecomposeDefine,
            ExprKind::Set { .. } => Rule::DecomposeSet,
            ExprKind::If { .. } => Rule::DecomposeIf,
            ExprKind::Begin(_) => Rule::DecomposeBegin,
            ExprKind::App { .. } => Rule::DecomposeCall,
        },
        ControlItem::Seq(_) => Rule::DecomposeSequence,
        ControlItem::Instr(instr) => match instr {
            Instruction::Asgn(_) if stash_top.is_some() => Rule::AssignVariable,
            Instruction::Env(_) => Rule::RestoreEnvironment,
            Instruction::Branch { .. } => match stash_top {
                Some(v) if v.is_truthy() => Rule::BranchConsequent,
                Some(_) => Rule::BranchAlternative,
                None => return Err(no_rule("BRANCH with an empty stash")),
            },
            Instruction::Pop if stash_top.is_some() => Rule::RemoveUnusedValue,
            Instruction::Call { arity, span } => {
                let Some(callee_at) = state.stash.len().checked_sub(arity + 1) else {
                    return Err(no_rule("CALL with too few stash values"));
                };
                match &state.stash[callee_at] {
                    Value::Closure(_) => Rule::ApplyClosure,
                    Value::Continuation(_) => Rule::ApplyContinuation,
                    Value::Primitive(Primitive::CallCc) => Rule::ApplyCallcc,
                    Value::Primitive(_) => Rule::ApplyPrimitive,
                    other => {
                        return Err(MachineError {
                            kind: ErrorKind::NotCallable(state.repr(other)),
                            step: state.step_number,
                            span: Some(*span),
                        })
                    }
                }
            }
            Instruction::Asgn(_) | Instruction::Pop => {
                return Err(no_rule("instruction needs a stash value"))
            }
        },
    };
    Ok(rule)
}
