#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use std::path::PathBuf;

use cse_core::{parse_program, run, MachineConfig};

/// `(name, source)` for every program in the shared corpus, sorted by name.
pub fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .expect("corpus directory")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "scm"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

/// What a run produced, in a form both evaluators can be compared on.
#[derive(Debug, PartialEq)]
pub enum Observed {
    Value { repr: String, output: String },
    Error,
}

pub fn machine_result(source: &str) -> Observed {
    let program = parse_program(source).expect("program parses");
    match run(&program, MachineConfig::default()) {
        Ok(o) => Observed::Value {
            repr: o.final_state.repr(&o.value),
            output: o.final_state.output.clone(),
        },
        Err(_) => Observed::Error,
    }
}

pub fn oracle_result(source: &str) -> Observed {
    let program = parse_program(source).expect("program parses");
    let mut o = oracle::Oracle::new();
    match o.run(&program) {
        Ok(repr) => Observed::Value {
            repr,
            output: o.output,
        },
        Err(_) => Observed::Error,
    }
}

/// Run the machine on `source`, panicking on any failure.
pub fn eval(source: &str) -> String {
    match machine_result(source) {
        Observed::Value { repr, .. } => repr,
        Observed::Error => panic!("program failed: {source}"),
    }
}
