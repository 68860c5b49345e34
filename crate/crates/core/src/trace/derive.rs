use super::{ControlDescriptor, OutcomeKind, TraceDocument, ValueDescriptor};

/// Plain-text derivation: one `(control, stash, env)` line per state with
/// `↓` between them, then the frames and the outcome.
pub fn derivation(doc: &TraceDocument) -> String {
    let mut out = String::new();
    for (i, s) in doc.states.iter().enumerate() {
        if i > 0 {
            out.push_str("↓\n");
        }
        out.push_str(&format!(
            "({}, {}, E{})\n",
            control_text(&s.control),
            stash_text(&s.stash),
            s.current_env
        ));
    }
    out.push('\n');
    if let Some(last) = doc.states.last() {
        for f in &last.frames {
            let bindings: Vec<String> = f
                .bindings
                .iter()
                .filter(|(_, v)| f.parent.is_some() || v.kind != "primitive")
                .map(|(k, v)| format!("{k} = {}", value_text(v)))
                .collect();
            let parent = match f.parent {
                Some(p) => format!("parent E{p}"),
                None => "global".to_string(),
            };
            out.push_str(&format!("{} [{}]", f.name, parent));
            if !bindings.is_empty() {
                out.push_str(&format!(": {}", bindings.join(", ")));
            }
            out.push('\n');
        }
    }
    let label = match doc.outcome.kind {
        OutcomeKind::Value => "value",
        OutcomeKind::Error => "error",
        OutcomeKind::StepLimit => "stopped",
    };
    out.push_str(&format!("{label}: {}\n", doc.outcome.repr));
    out
}

fn control_item_text(c: &ControlDescriptor) -> String {
    match c {
        ControlDescriptor::Expr { source_text, .. } => source_text.clone(),
        ControlDescriptor::Sequence { source_text, .. } => source_text.clone(),
        ControlDescriptor::Instruction { opcode, params, .. } => {
            if params.is_empty() {
                opcode.clone()
            } else {
                format!("{opcode} {}", params.join(" "))
            }
        }
    }
}

pub(crate) fn control_text(items: &[ControlDescriptor]) -> String {
    let mut parts: Vec<String> = items.iter().map(control_item_text).collect();
    parts.push("ε".into());
    parts.join(":")
}

pub(crate) fn stash_text(items: &[ValueDescriptor]) -> String {
    let mut parts: Vec<String> = items.iter().map(value_text).collect();
    parts.push("ε".into());
    parts.join(":")
}

fn value_text(v: &ValueDescriptor) -> String {
    match v.kind.as_str() {
        "closure" => format!(
            "CLO ({}) {} E{}",
            v.params.clone().unwrap_or_default().join(" "),
            v.body.clone().unwrap_or_default(),
            v.env_ref.unwrap_or(0)
        ),
        "continuation" => format!(
            "CONT {} {} E{}",
            control_text(v.control.as_deref().unwrap_or(&[])),
            stash_text(v.stash.as_deref().unwrap_or(&[])),
            v.env_ref.unwrap_or(0)
        ),
        _ => v.repr.clone(),
    }
}
