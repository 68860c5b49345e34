use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::value::Value;
use crate::reader::LambdaExpr;
use std::sync::Arc;

/// Index of a frame in the [`EnvStore`]. Allocated in creation order and
/// never reused within a run; `EnvId(0)` is the global frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EnvId(pub usize);

impl EnvId {
    pub const GLOBAL: EnvId = EnvId(0);
}

impl std::fmt::Display for EnvId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "E{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClosureId(pub usize);

#[derive(Clone, Debug, Default)]
pub struct Frame {
    pub bindings: IndexMap<String, Value>,
    pub parent: Option<EnvId>,
}

/// Every frame created during a run. Frames are shared by identity: a
/// closure, an `ENV` instruction or a continuation holding an [`EnvId`]
/// sees every later assignment into that frame.
#[derive(Clone, Debug, Default)]
pub struct EnvStore {
    frames: Vec<Frame>,
}

impl EnvStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn alloc(&mut self, frame: Frame) -> EnvId {
        self.frames.push(frame);
        EnvId(self.frames.len() - 1)
    }

    pub fn frame(&self, id: EnvId) -> &Frame {
        &self.frames[id.0]
    }

    pub fn frame_mut(&mut self, id: EnvId) -> &mut Frame {
        &mut self.frames[id.0]
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EnvId, &Frame)> {
        self.frames.iter().enumerate().map(|(i, f)| (EnvId(i), f))
    }

    /// `E.x`: walk the parent chain from `env`.
    pub fn lookup(&self, env: EnvId, name: &str) -> Option<&Value> {
        let mut cur = Some(env);
        while let Some(id) = cur {
            let frame = self.frame(id);
            if let Some(v) = frame.bindings.get(name) {
                return Some(v);
            }
            cur = frame.parent;
        }
        None
    }

    /// `E[x ← v]`: overwrite the nearest binding of `name`, or create it in
    /// `env` itself when no frame on the chain binds it.
    pub fn assign(&mut self, env: EnvId, name: &str, value: Value) {
        let mut cur = Some(env);
        while let Some(id) = cur {
            let frame = self.frame_mut(id);
            if let Some(slot) = frame.bindings.get_mut(name) {
                *slot = value;
                return;
            }
            cur = frame.parent;
        }
        self.frame_mut(env).bindings.insert(name.to_string(), value);
    }
}

#[derive(Clone, Debug, Default)]
pub struct PairHeap {
    cells: Vec<(Value, Value)>,
}

impl PairHeap {
    pub fn cons(&mut self, car: Value, cdr: Value) -> PairId {
        self.cells.push((car, cdr));
        PairId(self.cells.len() - 1)
    }

    pub fn get(&self, id: PairId) -> &(Value, Value) {
        &self.cells[id.0]
    }

    pub fn car(&self, id: PairId) -> &Value {
        &self.cells[id.0].0
    }

    pub fn cdr(&self, id: PairId) -> &Value {
        &self.cells[id.0].1
    }

    pub fn set_car(&mut self, id: PairId, v: Value) {
        self.cells[id.0].0 = v;
    }

    pub fn set_cdr(&mut self, id: PairId, v: Value) {
        self.cells[id.0].1 = v;
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PairId, &(Value, Value))> {
        self.cells.iter().enumerate().map(|(i, c)| (PairId(i), c))
    }

    /// Build a proper list from `items`.
    pub fn list(
        &mut self,
        items: impl IntoIterator<Item = Value, IntoIter: DoubleEndedIterator>,
    ) -> Value {
        let mut acc = Value::Nil;
        for v in items.into_iter().rev() {
            acc = Value::Pair(self.cons(v, acc));
        }
        acc
    }
}

/// `CLO (x₁ … xₙ) B E`
#[derive(Clone, Debug)]
pub struct Closure {
    pub lambda: Arc<LambdaExpr>,
    pub env: EnvId,
}

/// Closures get identities so the same procedure object can be drawn once
/// however many bindings or stash slots refer to it.
#[derive(Clone, Debug, Default)]
pub struct ClosureStore {
    closures: Vec<Closure>,
}

impl ClosureStore {
    pub fn alloc(&mut self, closure: Closure) -> ClosureId {
        self.closures.push(closure);
        ClosureId(self.closures.len() - 1)
    }

    pub fn get(&self, id: ClosureId) -> &Closure {
        &self.closures[id.0]
    }

    pub fn len(&self) -> usize {
        self.closures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closures.is_empty()
    }
}
