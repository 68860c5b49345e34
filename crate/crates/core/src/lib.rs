//! The CSE machine for SICP Scheme.
//!
//! A program is read into core expressions ([`reader`]), injected into an
//! initial state whose environment is the primitive frame from
//! [`prelude`], and run one transition at a time ([`machine`]). The
//! [`trace`] module records every state as a serializable snapshot and
//! replays runs up to a given state number.

pub mod machine;
pub mod number;
pub mod prelude;
pub mod reader;
pub mod trace;

pub use machine::{
    inject, rule_for, run, ControlItem, EnvId, ErrorKind, Instruction, MachineConfig, MachineError,
    Rule, RunError, RunOutcome, State, StepResult, Value,
};
pub use number::Number;
pub use reader::{parse_program, Expr, ExprKind, ReadError, SourceSpan};
pub use trace::{derivation, record, replay_to, snapshot, StateSnapshot, TraceDocument};
