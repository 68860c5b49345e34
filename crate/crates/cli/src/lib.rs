//! Command-line driver: `run`, `trace`, `derive` and `serve`.
//!
//! Every command reads one program from a file or stdin. The commands are
//! plain functions over writers so they can be driven in-process.

use std::io::{self, Read, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use clap::{Args, Parser, Subcommand};
use cse_core::machine::DEFAULT_STEP_LIMIT;
use cse_core::trace::OutcomeKind;
use cse_core::{derivation, inject, parse_program, record, ErrorKind, MachineConfig, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_STEP_LIMIT: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

pub const DEFAULT_PORT: u16 = 8731;

#[derive(Debug, Parser)]
#[command(
    name = "cse",
    version,
    about = "Run SICP Scheme programs on the CSE machine"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a program and print its value.
    Run(CommonArgs),
    /// Write the full state trace as JSON.
    Trace(CommonArgs),
    /// Print the derivation, one state per line.
    Derive(CommonArgs),
    /// Serve the trace over HTTP for the stepper UI.
    Serve(ServeArgs),
}

#[derive(Clone, Debug, Args)]
pub struct CommonArgs {
    /// Program file, or `-` for stdin.
    pub input: String,
    /// Maximum number of states, counting the initial one.
    #[arg(long, default_value_t = DEFAULT_STEP_LIMIT, value_parser = clap::value_parser!(u64).range(1..))]
    pub step_limit: u64,
    /// Skip redundant `ENV` pushes for calls in tail position.
    #[arg(long)]
    pub proper_tail_calls: bool,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = DEFAULT_PORT, value_parser = clap::value_parser!(u16).range(1..))]
    pub port: u16,
}

impl CommonArgs {
    pub fn config(&self) -> MachineConfig {
        MachineConfig {
            step_limit: self.step_limit,
            proper_tail_calls: self.proper_tail_calls,
        }
    }

    pub fn read_source(&self) -> io::Result<String> {
        if self.input == "-" {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        } else {
            std::fs::read_to_string(&self.input)
        }
    }
}

/// Parse `args` (including the program name) and run the chosen command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let common = match &cli.command {
        Command::Run(a) | Command::Trace(a) | Command::Derive(a) => a,
        Command::Serve(s) => &s.common,
    };
    let source = match common.read_source() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.input);
            return EXIT_USAGE;
        }
    };
    let stderr = &mut io::stderr();
    match &cli.command {
        Command::Serve(s) => cmd_serve(s, &source, stderr),
        Command::Run(a) | Command::Trace(a) | Command::Derive(a) => {
            let mut sink: Box<dyn Write> = match &a.output {
                Some(path) => match std::fs::File::create(path) {
                    Ok(f) => Box::new(io::BufWriter::new(f)),
                    Err(e) => {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return EXIT_USAGE;
                    }
                },
                None => Box::new(io::stdout().lock()),
            };
            let code = match &cli.command {
                Command::Run(_) => cmd_run(a.config(), &source, &mut sink, stderr),
                Command::Trace(_) => cmd_trace(a.config(), &source, &mut sink, stderr),
                _ => cmd_derive(a.config(), &source, &mut sink, stderr),
            };
            if let Err(e) = sink.flush() {
                eprintln!("error: {e}");
                return EXIT_RUNTIME;
            }
            code
        }
    }
}

/// Evaluate `source`, streaming program output to `out` as it happens,
/// then the value. `steps: N` goes to `diag`.
pub fn cmd_run(
    config: MachineConfig,
    source: &str,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> i32 {
    let program = match parse_program(source) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(diag, "parse error: {e}");
            return EXIT_PARSE;
        }
    };
    let mut state = inject(&program, config);
    let mut written = 0;
    let result = loop {
        if let Some(v) = state.final_value() {
            break Ok(v);
        }
        let step = state.step_within_limit();
        if state.output.len() > written {
            let _ = out.write_all(&state.output.as_bytes()[written..]);
            let _ = out.flush();
            written = state.output.len();
        }
        if let Err(e) = step {
            break Err(e);
        }
    };
    let _ = writeln!(diag, "steps: {}", state.step_number);
    match result {
        Ok(v) => {
            if !matches!(v, Value::Unspecified) {
                if !state.output.is_empty() && !state.output.ends_with('\n') {
                    let _ = writeln!(out);
                }
                let _ = writeln!(out, "{}", state.repr(&v));
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            match e.kind {
                ErrorKind::StepLimitExceeded(_) => EXIT_STEP_LIMIT,
                _ => EXIT_RUNTIME,
            }
        }
    }
}

/// Write the trace document. It is written even when the run fails.
pub fn cmd_trace(
    config: MachineConfig,
    source: &str,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> i32 {
    match record(source, config) {
        Ok(doc) => {
            let _ = out.write_all(doc.to_json().as_bytes());
            report(doc.outcome.kind, &doc.outcome.repr, diag)
        }
        Err(e) => {
            let _ = writeln!(diag, "parse error: {e}");
            EXIT_PARSE
        }
    }
}

pub fn cmd_derive(
    config: MachineConfig,
    source: &str,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> i32 {
    match record(source, config) {
        Ok(doc) => {
            let _ = out.write_all(derivation(&doc).as_bytes());
            report(doc.outcome.kind, &doc.outcome.repr, diag)
        }
        Err(e) => {
            let _ = writeln!(diag, "parse error: {e}");
            EXIT_PARSE
        }
    }
}

fn report(kind: OutcomeKind, repr: &str, diag: &mut dyn Write) -> i32 {
    match kind {
        OutcomeKind::Value => EXIT_OK,
        OutcomeKind::Error => {
            let _ = writeln!(diag, "error: {repr}");
            EXIT_RUNTIME
        }
        OutcomeKind::StepLimit => {
            let _ = writeln!(diag, "error: {repr}");
            EXIT_STEP_LIMIT
        }
    }
}

/// Record the trace once and serve it until interrupted.
pub fn cmd_serve(args: &ServeArgs, source: &str, diag: &mut dyn Write) -> i32 {
    let doc = match record(source, args.common.config()) {
        Ok(doc) => doc,
        Err(e) => {
            let _ = writeln!(diag, "parse error: {e}");
            return EXIT_PARSE;
        }
    };
    let json = Arc::new(doc.to_json());
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            return EXIT_RUNTIME;
        }
    };
    let addr = SocketAddr::from(([127, 0, 0, 1], args.port));
    runtime.block_on(async move {
        let listener = match tokio::net::TcpListener::bind(addr).await {
            Ok(l) => l,
            Err(e) => {
                let _ = writeln!(diag, "error: cannot listen on {addr}: {e}");
                return EXIT_RUNTIME;
            }
        };
        let _ = writeln!(diag, "serving http://{addr}/trace");
        match axum::serve(listener, router(json)).await {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(diag, "error: {e}");
                EXIT_RUNTIME
            }
        }
    })
}

/// `GET /trace`, `GET /health`, 404 for anything else. Every response
/// allows any origin.
pub fn router(trace_json: Arc<String>) -> Router {
    Router::new()
        .route(
            "/trace",
            get(move || {
                let body = trace_json.clone();
                async move {
                    (
                        [(header::CONTENT_TYPE, "application/json")],
                        body.as_str().to_owned(),
                    )
                }
            }),
        )
        .route("/health", get(|| async { "ok" }))
        .fallback(|| async { (StatusCode::NOT_FOUND, "not found") })
        .layer(axum::middleware::map_response(allow_any_origin))
}

async fn allow_any_origin(mut res: Response) -> impl IntoResponse {
    res.headers_mut().insert(
        header::ACCESS_CONTROL_ALLOW_ORIGIN,
        HeaderValue::from_static("*"),
    );
    res
}
