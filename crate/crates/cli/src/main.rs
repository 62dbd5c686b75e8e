use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod adapter;
mod metrics;
mod pipeline;
mod refocus;
mod stats;

/// Re-rooted AMR paraphrases and paraphrase diversity metrics.
#[derive(Debug, Parser)]
#[command(name = "reroot", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Re-root PENMAN graphs at sampled or chosen foci.
    Refocus(refocus::Args),
    /// Score paraphrase pairs for semantic, lexical and syntactic diversity.
    Metrics(metrics::Args),
    /// Build a filtered paraphrase dataset from raw sentences.
    Pipeline(pipeline::Args),
    /// Summarize a dataset produced by `pipeline`.
    Stats(stats::Args),
    /// Serve the built-in mock adapter over stdin and stdout.
    #[command(hide = true)]
    MockAdapter(adapter::Args),
}

/// Process exit status classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Usage = 1,
    Data = 2,
    Adapter = 3,
}

/// An error tagged with the exit status it should produce.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub error: anyhow::Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl std::error::Error for Failure {}

pub fn fail(status: Status, error: impl Into<anyhow::Error>) -> anyhow::Error {
    Failure {
        status,
        error: error.into(),
    }
    .into()
}

/// Reads a file, or standard input for `None` or `-`.
pub fn read_input(path: Option<&Path>) -> anyhow::Result<String> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p)
            .map_err(|e| fail(Status::Data, anyhow::anyhow!("{}: {e}", p.display()))),
        _ => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| fail(Status::Data, anyhow::anyhow!("stdin: {e}")))?;
            Ok(text)
        }
    }
}

/// Writes to a file, or standard output for `None` or `-`.
pub fn write_output(path: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) if p.as_path() != Path::new("-") => fs::write(p, text)
            .map_err(|e| fail(Status::Data, anyhow::anyhow!("{}: {e}", p.display()))),
        _ => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| fail(Status::Data, e))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(Status::Usage as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Refocus(args) => refocus::run(args),
        Command::Metrics(args) => metrics::run(args),
        Command::Pipeline(args) => pipeline::run(args),
        Command::Stats(args) => stats::run(args),
        Command::MockAdapter(args) => adapter::run(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let status = e.downcast_ref::<Failure>().map_or(Status::Data, |f| f.status);
            eprintln!("reroot: {e:#}");
            ExitCode::from(status as u8)
        }
    }
}
