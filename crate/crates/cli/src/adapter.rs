//! A line-oriented server around the mock adapter. Besides answering
//! requests it can misbehave on purpose, which is how the restart and
//! timeout handling of the stdio transport gets exercised end to end.

use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use reroot::pipeline::{Kind, MockAdapter, Request, Response};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Refuse requests of any other kind.
    #[arg(long)]
    kind: Option<Kind>,
    /// If MARKER does not exist, create it and exit on the first request
    /// without answering.
    #[arg(long, value_name = "MARKER")]
    crash_once: Option<PathBuf>,
    /// Exit without answering once N requests have been answered.
    #[arg(long, value_name = "N")]
    exit_after: Option<usize>,
    /// Fixed perplexity for one exact text, as TEXT=VALUE.
    #[arg(long, value_name = "TEXT=VALUE", value_parser = parse_override)]
    perplexity: Vec<(String, f64)>,
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (text, value) = s.rsplit_once('=').ok_or("expected TEXT=VALUE")?;
    Ok((text.to_owned(), value.parse().map_err(|e| format!("{e}"))?))
}

pub fn run(args: Args) -> anyhow::Result<ExitCode> {
    let mock = args
        .perplexity
        .iter()
        .fold(MockAdapter::new(), |m, (t, v)| m.with_perplexity(t.clone(), *v));
    let stdin = io::stdin().lock();
    let mut stdout = io::stdout().lock();
    let mut answered = 0;
    for line in stdin.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if let Some(marker) = &args.crash_once {
            if !marker.exists() {
                std::fs::write(marker, b"")?;
                return Ok(ExitCode::from(101));
            }
        }
        if args.exit_after.is_some_and(|n| answered >= n) {
            return Ok(ExitCode::SUCCESS);
        }
        let reply = match (args.kind, Request::parse_line(&line)) {
            (Some(want), Ok(req)) if req.kind != want => {
                Response::error(req.id, format!("this adapter serves {want} only")).to_line()
            }
            _ => mock.handle_line(&line),
        };
        writeln!(stdout, "{reply}")?;
        stdout.flush()?;
        answered += 1;
    }
    Ok(ExitCode::SUCCESS)
}
