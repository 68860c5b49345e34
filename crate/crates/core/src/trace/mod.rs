//! Numbered state snapshots, the JSON trace document, and replay.
//!
//! A trace holds a full [`StateSnapshot`] for every state of a run, so a
//! viewer can jump to any state without re-running anything. [`replay_to`]
//! gets back to a given state the other way, by recomputing from the
//! initial state.

mod derive;
mod snapshot;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use derive::derivation;
pub use snapshot::{
    snapshot, ControlDescriptor, FrameDescriptor, PairDescriptor, StateSnapshot, ValueDescriptor,
};

use crate::machine::{inject, ErrorKind, MachineConfig, State};
use crate::reader::{parse_program, Expr, ReadError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    Value,
    Error,
    StepLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub kind: OutcomeKind,
    pub repr: String,
}

/// Everything a viewer needs: the program, the settings it ran under, all
/// states in order and how the run ended.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub version: u32,
    pub source: String,
    pub config: MachineConfig,
    pub states: Vec<StateSnapshot>,
    pub outcome: Outcome,
}

impl TraceDocument {
    /// Canonical serialization: pretty-printed JSON with fields in
    /// declaration order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace documents always serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<TraceDocument> {
        serde_json::from_str(text)
    }
}

/// Parse `source` and record its run.
pub fn record(source: &str, config: MachineConfig) -> Result<TraceDocument, ReadError> {
    let program = parse_program(source)?;
    Ok(record_program(source, &program, config))
}

/// Record a snapshot of every state until the run finishes, fails, or hits
/// the state limit. A failing run keeps every state up to the one the error
/// was raised from.
pub fn record_program(source: &str, program: &[Arc<Expr>], config: MachineConfig) -> TraceDocument {
    let mut state = inject(program, config);
    let mut states = vec![snapshot(&state)];
    let outcome = loop {
        if let Some(v) = state.final_value() {
            break Outcome {
                kind: OutcomeKind::Value,
                repr: state.repr(&v),
            };
        }
        match state.step_within_limit() {
            Ok(_) => states.push(snapshot(&state)),
            Err(e) => {
                let kind = match e.kind {
                    ErrorKind::StepLimitExceeded(_) => OutcomeKind::StepLimit,
                    _ => OutcomeKind::Error,
                };
                break Outcome {
                    kind,
                    repr: e.to_string(),
                };
            }
        }
    };
    TraceDocument {
        version: FORMAT_VERSION,
        source: source.to_string(),
        config,
        states,
        outcome,
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("state {requested} is out of range: the run has {available} state(s)")]
pub struct ReplayError {
    pub requested: u64,
    pub available: u64,
}

/// Recompute the state numbered `k` by running from the initial state.
pub fn replay_to(
    program: &[Arc<Expr>],
    config: MachineConfig,
    k: u64,
) -> Result<State, ReplayError> {
    let mut state = inject(program, config);
    while state.step_number < k {
        if state.is_final() || state.step_within_limit().is_err() {
            return Err(ReplayError {
                requested: k,
                available: state.states_generated(),
            });
        }
    }
    Ok(state)
}
