use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::ValueEnum;
use reroot::metrics::{corpus_report, Scale};
use reroot::ParaphraseRecord;

use crate::{fail, read_input, write_output, Status};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Dataset JSON lines as written by `pipeline` (stdin if omitted).
    input: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Show similarity and lexical means as percentages in the table.
    #[arg(long)]
    percent: bool,
}

pub fn run(args: Args) -> anyhow::Result<ExitCode> {
    let text = read_input(args.input.as_deref())?;
    let records: Vec<ParaphraseRecord> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("line {}", i + 1)))
        .collect::<anyhow::Result<_>>()
        .map_err(|e| fail(Status::Data, e))?;
    let report = corpus_report(&records);
    let out = match args.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Table => report.render(if args.percent { Scale::Percent } else { Scale::Raw }),
    };
    write_output(args.output.as_ref(), &out)?;
    Ok(ExitCode::SUCCESS)
}
