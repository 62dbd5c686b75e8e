use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::ValueEnum;
use reroot::penman::{parse_document, Style, Variable};
use reroot::refocus::{enumerate_foci_indexed, linearize, variants_for, DEFAULT_FOCI};
use serde_json::json;

use crate::{fail, read_input, write_output, Status};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    /// PENMAN blocks with `# ::id` and `# ::focus` comment lines.
    Penman,
    /// One JSON object per variant.
    Jsonl,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// PENMAN file holding one or more blank-line-separated graphs (stdin if omitted).
    #[arg(short, long)]
    input: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Foci sampled per graph.
    #[arg(short = 'k', long, default_value_t = DEFAULT_FOCI)]
    foci: usize,
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
    /// Re-root at this variable instead of sampling.
    #[arg(long, value_name = "VAR")]
    focus: Option<String>,
    /// Spaces per nesting level.
    #[arg(long, default_value_t = 2, conflicts_with = "compact")]
    indent: usize,
    /// Write each graph on a single line.
    #[arg(long)]
    compact: bool,
    #[arg(long, value_enum, default_value_t = Format::Penman)]
    format: Format,
}

pub fn run(args: Args) -> anyhow::Result<ExitCode> {
    let focus = args
        .focus
        .as_deref()
        .map(Variable::new)
        .transpose()
        .map_err(|e| fail(Status::Usage, e))?;
    let style = if args.compact {
        Style::single_line()
    } else {
        Style {
            indent: Some(args.indent),
        }
    };
    let text = read_input(args.input.as_deref())?;
    let source = args
        .input
        .as_ref()
        .map_or_else(|| "<stdin>".to_owned(), |p| p.display().to_string());

    let mut blocks = Vec::new();
    let mut failed = 0;
    for (index, entry) in parse_document(&text).into_iter().enumerate() {
        let annotated = match entry.result {
            Ok(a) => a,
            Err(e) => {
                eprintln!("{source}: graph starting at line {}: {e}", entry.line);
                failed += 1;
                continue;
            }
        };
        let graph = &annotated.graph;
        let id = annotated
            .metadata("id")
            .map_or_else(|| format!("g{}", index + 1), str::to_owned);
        let result = match &focus {
            Some(v) => linearize(graph, v, style).map(|v| vec![v]),
            None => {
                let foci = enumerate_foci_indexed(graph, args.foci, args.seed, index as u64);
                variants_for(graph, &foci, style)
            }
        };
        let variants = match result {
            Ok(v) => v,
            Err(e) => {
                eprintln!("{source}: graph {id} (line {}): {e}", entry.line);
                failed += 1;
                continue;
            }
        };
        for v in variants {
            blocks.push(match args.format {
                Format::Penman => format!(
                    "# ::id {id}\n# ::focus {} {}\n{}\n",
                    v.focus, v.concept, v.linearized
                ),
                Format::Jsonl => format!(
                    "{}\n",
                    json!({
                        "id": id,
                        "focus": v.focus.to_string(),
                        "concept": v.concept,
                        "linearized": v.linearized,
                    })
                ),
            });
        }
    }
    let separator = match args.format {
        Format::Penman => "\n",
        Format::Jsonl => "",
    };
    write_output(args.output.as_ref(), &blocks.join(separator))?;
    if failed > 0 {
        return Err(fail(Status::Data, anyhow!("{failed} graph(s) could not be processed")));
    }
    Ok(ExitCode::SUCCESS)
}
