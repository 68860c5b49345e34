use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::store::{ClosureStore, EnvId, EnvStore, PairHeap};
use super::value::Value;
use crate::prelude;
use crate::reader::{Body, Expr, SourceSpan};

/// Default bound on the number of states a run may generate.
pub const DEFAULT_STEP_LIMIT: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineConfig {
    /// Maximum number of states, counting the initial one.
    pub step_limit: u64,
    /// Skip pushing `ENV` when the caller's continuation already starts
    /// with one, or is empty.
    pub proper_tail_calls: bool,
}

impl Default for MachineConfig {
    fn default() -> Self {
        MachineConfig {
            step_limit: DEFAULT_STEP_LIMIT,
            proper_tail_calls: false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Instruction {
    /// `ASGN x`
    Asgn(String),
    /// `CALL n`; the span is the application that produced it.
    Call {
        arity: usize,
        span: SourceSpan,
    },
    /// `ENV E`
    Env(EnvId),
    /// `BRANCH A B`
    Branch {
        consequent: Arc<Expr>,
        alternative: Arc<Expr>,
    },
    Pop,
}

impl Instruction {
    pub fn opcode(&self) -> &'static str {
        match self {
            Instruction::Asgn(_) => "ASGN",
            Instruction::Call { .. } => "CALL",
            Instruction::Env(_) => "ENV",
            Instruction::Branch { .. } => "BRANCH",
            Instruction::Pop => "POP",
        }
    }
}

#[derive(Clone, Debug)]
pub enum ControlItem {
    Expr(Arc<Expr>),
    /// Two or more expressions awaiting the sequence rule.
    Seq(Body),
    Instr(Instruction),
}

impl ControlItem {
    pub fn span(&self) -> Option<SourceSpan> {
        match self {
            ControlItem::Expr(e) => Some(e.span),
            ControlItem::Seq(body) => {
                let first = body.first()?.span;
                Some(first.to(body.last()?.span))
            }
            ControlItem::Instr(Instruction::Call { span, .. }) => Some(*span),
            ControlItem::Instr(_) => None,
        }
    }

    pub(crate) fn for_body(body: &Body) -> ControlItem {
        if body.len() == 1 {
            ControlItem::Expr(body[0].clone())
        } else {
            ControlItem::Seq(body.clone())
        }
    }
}

/// A complete machine state: the `(C, S, E)` triple plus the stores its
/// references point into.
#[derive(Clone, Debug)]
pub struct State {
    /// Top of the control is the last element.
    pub control: Vec<ControlItem>,
    /// Top of the stash is the last element.
    pub stash: Vec<Value>,
    pub env: EnvId,
    pub envs: EnvStore,
    pub heap: PairHeap,
    pub closures: ClosureStore,
    pub step_number: u64,
    /// The rule whose firing produced this state; `None` for the initial one.
    pub last_rule: Option<super::Rule>,
    /// Text written by `display` and `newline` so far.
    pub output: String,
    pub config: MachineConfig,
}

/// Build the initial state `(p:ε, ε, E₀)`.
pub fn inject(program: &[Arc<Expr>], config: MachineConfig) -> State {
    let (envs, global) = prelude::make_initial_environment();
    let control = match program.len() {
        0 => Vec::new(),
        1 => vec![ControlItem::Expr(program[0].clone())],
        _ => vec![ControlItem::Seq(program.iter().cloned().collect())],
    };
    State {
        control,
        stash: Vec::new(),
        env: global,
        envs,
        heap: PairHeap::default(),
        closures: ClosureStore::default(),
        step_number: 0,
        last_rule: None,
        output: String::new(),
        config,
    }
}

impl State {
    pub fn is_final(&self) -> bool {
        self.control.is_empty()
    }

    /// The result of a final state: the single stash value, or the
    /// unspecified value for an empty program.
    pub fn final_value(&self) -> Option<Value> {
        if !self.is_final() {
            return None;
        }
        Some(self.stash.last().cloned().unwrap_or(Value::Unspecified))
    }

    pub fn states_generated(&self) -> u64 {
        self.step_number + 1
    }
}
