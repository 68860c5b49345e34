use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::machine::{ControlItem, Instruction, Rule, State, Value};
use crate::reader::{sequence_text, SourceSpan};

/// One rendered control item. Expressions carry their canonical text and
/// the source region they came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ControlDescriptor {
    Expr {
        source_text: String,
        span: SourceSpan,
    },
    Sequence {
        source_text: String,
        span: SourceSpan,
    },
    Instruction {
        opcode: String,
        params: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        env_ref: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueDescriptor {
    pub kind: String,
    pub repr: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_ref: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure_ref: Option<usize>,
    /// Captured frame of a closure or continuation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env_ref: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<String>,
    /// Captured control of a continuation, top first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<Vec<ControlDescriptor>>,
    /// Captured stash of a continuation, top first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stash: Option<Vec<ValueDescriptor>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameDescriptor {
    pub id: usize,
    pub name: String,
    pub parent: Option<usize>,
    pub bindings: IndexMap<String, ValueDescriptor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDescriptor {
    pub id: usize,
    pub car: ValueDescriptor,
    pub cdr: ValueDescriptor,
}

/// A full, self-contained rendering of one machine state. Control and stash
/// are listed top first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub step_number: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_applied: Option<Rule>,
    pub control: Vec<ControlDescriptor>,
    pub stash: Vec<ValueDescriptor>,
    pub current_env: usize,
    pub frames: Vec<FrameDescriptor>,
    pub pairs: Vec<PairDescriptor>,
    pub output_so_far: String,
}

/// Render `state`. Frames and pairs are listed in creation order, bindings
/// in insertion order.
pub fn snapshot(state: &State) -> StateSnapshot {
    StateSnapshot {
        step_number: state.step_number,
        rule_applied: state.last_rule,
        control: describe_control(&state.control),
        stash: describe_stash(state, &state.stash),
        current_env: state.env.0,
        frames: state
            .envs
            .iter()
            .map(|(id, frame)| FrameDescriptor {
                id: id.0,
                name: id.to_string(),
                parent: frame.parent.map(|p| p.0),
                bindings: frame
                    .bindings
                    .iter()
                    .map(|(k, v)| (k.clone(), describe_value(state, v)))
                    .collect(),
            })
            .collect(),
        pairs: state
            .heap
            .iter()
            .map(|(id, (car, cdr))| PairDescriptor {
                id: id.0,
                car: describe_value(state, car),
                cdr: describe_value(state, cdr),
            })
            .collect(),
        output_so_far: state.output.clone(),
    }
}

pub(crate) fn describe_control(control: &[ControlItem]) -> Vec<ControlDescriptor> {
    control.iter().rev().map(describe_control_item).collect()
}

fn describe_stash(state: &State, stash: &[Value]) -> Vec<ValueDescriptor> {
    stash
        .iter()
        .rev()
        .map(|v| describe_value(state, v))
        .collect()
}

fn describe_control_item(item: &ControlItem) -> ControlDescriptor {
    match item {
        ControlItem::Expr(e) => ControlDescriptor::Expr {
            source_text: e.to_string(),
            span: e.span,
        },
        ControlItem::Seq(body) => ControlDescriptor::Sequence {
            source_text: sequence_text(body),
            span: item.span().unwrap_or_default(),
        },
        ControlItem::Instr(instr) => {
            let (params, env_ref) = match instr {
                Instruction::Asgn(name) => (vec![name.clone()], None),
                Instruction::Call { arity, .. } => (vec![arity.to_string()], None),
                Instruction::Env(env) => (vec![env.to_string()], Some(env.0)),
                Instruction::Branch {
                    consequent,
                    alternative,
                } => (vec![consequent.to_string(), alternative.to_string()], None),
                Instruction::Pop => (Vec::new(), None),
            };
            ControlDescriptor::Instruction {
                opcode: instr.opcode().to_string(),
                params,
                env_ref,
            }
        }
    }
}

pub(crate) fn describe_value(state: &State, v: &Value) -> ValueDescriptor {
    let mut d = ValueDescriptor {
        kind: v.kind_name().to_string(),
        repr: state.repr(v),
        pair_ref: None,
        closure_ref: None,
        env_ref: None,
        params: None,
        body: None,
        control: None,
        stash: None,
    };
    match v {
        Value::Pair(id) => d.pair_ref = Some(id.0),
        Value::Closure(id) => {
            let clo = state.closures.get(*id);
            d.closure_ref = Some(id.0);
            d.env_ref = Some(clo.env.0);
            d.params = Some(clo.lambda.params.clone());
            d.body = Some(sequence_text(&clo.lambda.body));
        }
        Value::Continuation(cont) => {
            d.env_ref = Some(cont.env.0);
            d.control = Some(describe_control(&cont.control));
            d.stash = Some(describe_stash(state, &cont.stash));
        }
        _ => {}
    }
    d
}
