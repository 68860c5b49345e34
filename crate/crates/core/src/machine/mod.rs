//! The CSE machine: states, the transition rules and the run loop.
//!
//! A [`State`] is stepped in place. Each call to [`State::step`] fires
//! exactly one [`Rule`], chosen by the head of the control (and by the
//! stash for `CALL` and `BRANCH`). Environments live in an [`EnvStore`] and
//! are referred to by [`EnvId`], so an assignment is seen through every
//! closure, `ENV` instruction and continuation that holds the frame.

mod print;
mod rules;
mod state;
mod step;
mod store;
mod value;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use print::Printer;
pub use rules::{rule_for, Rule};
pub use state::{inject, ControlItem, Instruction, MachineConfig, State, DEFAULT_STEP_LIMIT};
pub use step::StepResult;
pub use store::{Closure, ClosureId, ClosureStore, EnvId, EnvStore, Frame, PairHeap, PairId};
pub use value::{Continuation, Value};

use crate::reader::{Expr, SourceSpan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arity {
    Exactly(usize),
    AtLeast(usize),
}

impl Arity {
    pub fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Exactly(k) => n == k,
            Arity::AtLeast(k) => n >= k,
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Exactly(k) => write!(f, "{k}"),
            Arity::AtLeast(k) => write!(f, "at least {k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum PrimitiveError {
    #[error("type error: expected {expected}, got {got}")]
    TypeError { expected: &'static str, got: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0}")]
    User(String),
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ErrorKind {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("not callable: {0}")]
    NotCallable(String),
    #[error("{procedure}: arity mismatch: expected {expected} argument(s), got {got}")]
    ArityMismatch {
        procedure: String,
        expected: Arity,
        got: usize,
    },
    #[error("{name}: {error}")]
    Primitive {
        name: &'static str,
        error: PrimitiveError,
    },
    #[error("no rule applies: {0}")]
    NoRuleApplies(String),
    #[error("step limit exceeded at {0}")]
    StepLimitExceeded(u64),
}

/// A run-time failure, raised from the state numbered `step`.
#[derive(Clone, Debug, PartialEq, Error)]
pub struct MachineError {
    pub kind: ErrorKind,
    pub step: u64,
    pub span: Option<SourceSpan>,
}

impl fmt::Display for MachineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let ErrorKind::StepLimitExceeded(_) = self.kind {
            return write!(f, "{}", self.kind);
        }
        write!(f, "{} at step {}", self.kind, self.step)?;
        if let Some(span) = self.span {
            write!(f, " ({span})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub value: Value,
    pub steps_taken: u64,
    pub final_state: State,
}

/// A failed run, with the state the failure was raised from.
#[derive(Clone, Debug, Error)]
#[error("{error}")]
pub struct RunError {
    pub error: MachineError,
    pub state: Box<State>,
}

impl State {
    /// True when another transition would exceed the configured limit on
    /// the number of states.
    pub fn at_step_limit(&self) -> bool {
        self.states_generated() >= self.config.step_limit
    }

    fn limit_error(&self) -> MachineError {
        MachineError {
            kind: ErrorKind::StepLimitExceeded(self.config.step_limit),
            step: self.step_number,
            span: None,
        }
    }

    /// Step until final, an error, or the state limit.
    pub fn run_to_end(mut self) -> Result<RunOutcome, RunError> {
        loop {
            if let Some(value) = self.final_value() {
                return Ok(RunOutcome {
                    value,
                    steps_taken: self.step_number,
                    final_state: self,
                });
            }
            if self.at_step_limit() {
                let error = self.limit_error();
                return Err(RunError {
                    error,
                    state: Box::new(self),
                });
            }
            if let Err(error) = self.step() {
                return Err(RunError {
                    error,
                    state: Box::new(self),
                });
            }
        }
    }

    /// Like [`State::step`], but refuses to go past the state limit.
    pub fn step_within_limit(&mut self) -> Result<StepResult, MachineError> {
        if !self.is_final() && self.at_step_limit() {
            return Err(self.limit_error());
        }
        self.step()
    }
}

/// Evaluate `program` from the initial state.
pub fn run(program: &[Arc<Expr>], config: MachineConfig) -> Result<RunOutcome, RunError> {
    inject(program, config).run_to_end()
}
