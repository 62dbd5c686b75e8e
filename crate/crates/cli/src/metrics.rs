use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::ValueEnum;
use reroot::metrics::{parse_bracketed, report_from, score_pair, ConstituencyTree, PairScores, Scale};
use serde::{Deserialize, Serialize};

use crate::{fail, read_input, write_output, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON object of scores per pair.
    Jsonl,
    /// Corpus-level means only.
    Table,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Pairs as JSON lines with `source` and `paraphrase` keys, or as
    /// tab-separated `source<TAB>paraphrase` lines (stdin if omitted).
    #[arg(short, long)]
    pairs: Option<PathBuf>,
    /// Bracketed constituency parses, two lines per pair: source, then paraphrase.
    #[arg(long)]
    parses: Option<PathBuf>,
    /// Sentence embeddings as JSON arrays, two lines per pair.
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
    /// Show similarity and lexical means as percentages.
    #[arg(long)]
    percent: bool,
}

#[derive(Debug, Deserialize)]
struct PairLine {
    #[serde(default)]
    source_id: Option<String>,
    source: String,
    paraphrase: String,
}

#[derive(Serialize)]
struct ScoredLine<'a> {
    index: usize,
    source: &'a str,
    paraphrase: &'a str,
    #[serde(flatten)]
    scores: &'a PairScores,
}

fn data(e: impl Into<anyhow::Error>) -> anyhow::Error {
    fail(Status::Data, e)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn read_pairs(text: &str) -> anyhow::Result<Vec<PairLine>> {
    content_lines(text)
        .map(|(n, line)| {
            if line.trim_start().starts_with('{') {
                serde_json::from_str(line).with_context(|| format!("pairs line {n}"))
            } else {
                let (source, paraphrase) = line
                    .split_once('\t')
                    .ok_or_else(|| anyhow!("pairs line {n}: expected a JSON object or two tab-separated fields"))?;
                Ok(PairLine {
                    source_id: None,
                    source: source.to_owned(),
                    paraphrase: paraphrase.to_owned(),
                })
            }
        })
        .collect::<anyhow::Result<_>>()
        .map_err(data)
}

fn read_paired<T>(
    text: &str,
    what: &str,
    expected: usize,
    parse: impl Fn(&str) -> anyhow::Result<T>,
) -> anyhow::Result<Vec<(T, T)>> {
    let items: Vec<T> = content_lines(text)
        .map(|(n, l)| parse(l).with_context(|| format!("{what} line {n}")))
        .collect::<anyhow::Result<_>>()
        .map_err(data)?;
    if items.len() != 2 * expected {
        return Err(data(anyhow!(
            "{what}: expected {} lines for {expected} pairs, found {}",
            2 * expected,
            items.len()
        )));
    }
    let mut it = items.into_iter();
    let mut out = Vec::with_capacity(expected);
    while let (Some(a), Some(b)) = (it.next(), it.next()) {
        out.push((a, b));
    }
    Ok(out)
}

pub fn run(args: Args) -> anyhow::Result<ExitCode> {
    let pairs = read_pairs(&read_input(args.pairs.as_deref())?)?;
    let parses: Option<Vec<(ConstituencyTree, ConstituencyTree)>> = args
        .parses
        .as_deref()
        .map(|p| {
            read_paired(&read_input(Some(p))?, "parses", pairs.len(), |l| {
                Ok(parse_bracketed(l)?)
            })
        })
        .transpose()?;
    let embeddings: Option<Vec<(Vec<f64>, Vec<f64>)>> = args
        .embeddings
        .as_deref()
        .map(|p| {
            read_paired(&read_input(Some(p))?, "embeddings", pairs.len(), |l| {
                Ok(serde_json::from_str(l)?)
            })
        })
        .transpose()?;

    let mut scores = Vec::with_capacity(pairs.len());
    for (i, pair) in pairs.iter().enumerate() {
        let parse = parses.as_ref().map(|p| (&p[i].0, &p[i].1));
        let emb = embeddings
            .as_ref()
            .map(|e| (e[i].0.as_slice(), e[i].1.as_slice()));
        let s = score_pair(&pair.source, &pair.paraphrase, parse, emb)
            .with_context(|| format!("pair {}", i + 1))
            .map_err(data)?;
        scores.push(s);
    }

    let report = report_from(pairs.iter().zip(&scores).map(|(p, s)| {
        (
            p.source_id.as_deref().unwrap_or(p.source.as_str()),
            p.paraphrase.as_str(),
            Some(s),
        )
    }));
    let scale = if args.percent { Scale::Percent } else { Scale::Raw };
    let text = match args.format {
        Format::Table => report.render(scale),
        Format::Jsonl => {
            let mut out = String::new();
            for (i, (p, s)) in pairs.iter().zip(&scores).enumerate() {
                let line = ScoredLine {
                    index: i + 1,
                    source: &p.source,
                    paraphrase: &p.paraphrase,
                    scores: s,
                };
                out.push_str(&serde_json::to_string(&line)?);
                out.push('\n');
            }
            eprint!("{}", report.render(scale));
            out
        }
    };
    write_output(args.output.as_ref(), &text)?;
    Ok(ExitCode::SUCCESS)
}
