use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use gcfg::cli::{self, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    if let Ok(t) = std::env::var("GCFG_THREADS") {
        match t.parse() {
            Ok(n) => gcfg::sweep::configure_threads(n),
            Err(_) => {
                eprintln!("error: GCFG_THREADS must be a positive integer, got `{t}`");
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
    }
    let parsed = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(parsed) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}

fn run(parsed: Cli) -> anyhow::Result<i32> {
    let outcome = cli::run(parsed)?;
    let mut out = std::io::stdout().lock();
    let written = match &outcome.document {
        Some(doc) => out.write_all(doc.as_bytes()),
        None => writeln!(out, "{}", serde_json::to_string_pretty(&outcome.report)?),
    };
    match written {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
        other => other.context("writing to stdout")?,
    }
    Ok(outcome.code)
}
