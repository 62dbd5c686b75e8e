//! End-to-end corpus construction: parse each source sentence to AMR,
//! re-root it at sampled foci, realize each variant as text, score it with
//! a language model, filter by perplexity, and drop duplicates.
//!
//! Sources are processed in input order and every stage is batched across
//! all sources. The run is sequential, so with deterministic adapters the
//! dataset and manifest are byte-identical from one run to the next.

mod adapter;
mod config;
pub mod mock;
pub mod protocol;
pub mod transport;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use adapter::{call_adapter, call_batched, Endpoint, ItemError, ItemResult};
pub use config::{AdapterSpec, Adapters, PipelineConfig, Profile, DEFAULT_THRESHOLD};
pub use mock::MockAdapter;
pub use protocol::{Kind, Request, RequestPayload, Response, ResponsePayload};
pub use transport::{HttpTransport, InProcess, StdioTransport, Transport, TransportError};

use crate::metrics::{corpus_report, score_pair, tokenize, DiversityReport};
use crate::penman::{parse_penman, AmrGraph, Style, Variable};
use crate::record::{Focus, ParaphraseRecord};
use crate::refocus::{enumerate_foci_indexed, variants_for, FocusVariant};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no {0} adapter configured")]
    MissingAdapter(Kind),
    #[error(transparent)]
    Adapter(TransportError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// The adapters a run talks to.
pub struct Endpoints {
    pub text_to_amr: Endpoint,
    pub amr_to_text: Endpoint,
    pub perplexity: Endpoint,
    pub embed: Option<Endpoint>,
}

impl Endpoints {
    /// All four kinds served in-process by `adapter`.
    pub fn mock(adapter: MockAdapter) -> Self {
        let ep = |kind| {
            Endpoint::new(
                kind,
                Box::new(InProcess::new(adapter.clone())),
                std::time::Duration::from_secs(1),
            )
        };
        Endpoints {
            text_to_amr: ep(Kind::TextToAmr),
            amr_to_text: ep(Kind::AmrToText),
            perplexity: ep(Kind::Perplexity),
            embed: Some(ep(Kind::Embed)),
        }
    }

    pub fn open(config: &PipelineConfig) -> Result<Self, PipelineError> {
        let required = |kind| config.endpoint(kind)?.ok_or(PipelineError::MissingAdapter(kind));
        Ok(Endpoints {
            text_to_amr: required(Kind::TextToAmr)?,
            amr_to_text: required(Kind::AmrToText)?,
            perplexity: required(Kind::Perplexity)?,
            embed: config.endpoint(Kind::Embed)?,
        })
    }
}

/// Item counts for one stage. `input = kept + dropped + skipped`: dropped
/// items were rejected on purpose, skipped ones failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCount {
    pub stage: String,
    pub input: usize,
    pub kept: usize,
    pub dropped: usize,
    pub skipped: usize,
}

impl StageCount {
    fn new(stage: &str, input: usize) -> Self {
        StageCount {
            stage: stage.to_owned(),
            input,
            kept: 0,
            dropped: 0,
            skipped: 0,
        }
    }

    pub fn balanced(&self) -> bool {
        self.input == self.kept + self.dropped + self.skipped
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Dropped,
    Skipped,
}

/// A source or variant that did not reach the dataset, and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub source_id: String,
    pub stage: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focus: Option<Variable>,
    pub outcome: Outcome,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: PipelineConfig,
    pub threshold: f64,
    pub adapters: Vec<(Kind, String)>,
    pub stages: Vec<StageCount>,
    pub excluded: Vec<Exclusion>,
    pub report: DiversityReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub records: Vec<ParaphraseRecord>,
    pub manifest: Manifest,
}

impl PipelineOutput {
    /// One compact JSON record per line.
    pub fn dataset_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn manifest_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// Source sentences with stable ids: `s<line>` for each non-blank line.
pub fn read_sources(text: &str) -> Vec<(String, String)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (format!("s{}", i + 1), l.trim().to_owned()))
        .collect()
}

/// Splits records into those with perplexity at or below `threshold` and
/// the rest, preserving order.
pub fn filter_by_perplexity(
    records: Vec<ParaphraseRecord>,
    threshold: f64,
) -> (Vec<ParaphraseRecord>, Vec<ParaphraseRecord>) {
    records.into_iter().partition(|r| r.perplexity <= threshold)
}

/// Like [`dedupe`], but also returns the removed records.
pub fn split_duplicates(records: Vec<ParaphraseRecord>) -> (Vec<ParaphraseRecord>, Vec<ParaphraseRecord>) {
    let mut seen: std::collections::HashSet<(String, Vec<String>)> = Default::default();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for r in records {
        let source_key = (r.source_id.clone(), tokenize(&r.source));
        let key = (r.source_id.clone(), tokenize(&r.paraphrase));
        if key == source_key || !seen.insert(key) {
            dropped.push(r);
        } else {
            kept.push(r);
        }
    }
    (kept, dropped)
}

/// Drops paraphrases that, after tokenization, repeat their source or an
/// earlier paraphrase of the same source.
pub fn dedupe(records: Vec<ParaphraseRecord>) -> Vec<ParaphraseRecord> {
    split_duplicates(records).0
}

struct Candidate {
    source: usize,
    variant: FocusVariant,
    text: Option<String>,
}

struct Run<'a> {
    config: &'a PipelineConfig,
    sources: &'a [(String, String)],
    stages: Vec<StageCount>,
    excluded: Vec<Exclusion>,
}

impl Run<'_> {
    fn exclude(&mut self, source: usize, stage: &str, focus: Option<&Variable>, outcome: Outcome, reason: String) {
        let count = self.stages.last_mut().expect("a stage is open");
        match outcome {
            Outcome::Dropped => count.dropped += 1,
            Outcome::Skipped => count.skipped += 1,
        }
        self.excluded.push(Exclusion {
            source_id: self.sources[source].0.clone(),
            stage: stage.to_owned(),
            focus: focus.cloned(),
            outcome,
            reason,
        });
    }

    fn keep(&mut self) {
        self.stages.last_mut().expect("a stage is open").kept += 1;
    }

    fn parse(&mut self, ep: &mut Endpoint) -> Vec<(usize, AmrGraph)> {
        self.stages.push(StageCount::new("parse", self.sources.len()));
        let requests: Vec<Request> = self
            .sources
            .iter()
            .map(|(id, text)| Request::new(format!("{id}:amr"), Kind::TextToAmr, text.clone()))
            .collect();
        let replies = call_batched(ep, &requests, self.config.batch_size);
        let mut graphs = Vec::new();
        for (i, reply) in replies.into_iter().enumerate() {
            let parsed = match reply {
                Ok(ResponsePayload::Text(amr)) => parse_penman(&amr).map_err(|e| format!("unusable AMR: {e}")),
                Ok(_) => unreachable!("payload kind is checked"),
                Err(e) => Err(format!("text_to_amr: {e}")),
            };
            match parsed {
                Ok(g) => {
                    self.keep();
                    graphs.push((i, g));
                }
                Err(reason) => self.exclude(i, "parse", None, Outcome::Skipped, reason),
            }
        }
        graphs
    }

    fn refocus(&mut self, graphs: Vec<(usize, AmrGraph)>) -> Vec<Candidate> {
        self.stages.push(StageCount::new("refocus", graphs.len()));
        let mut out = Vec::new();
        for (i, graph) in graphs {
            let foci = enumerate_foci_indexed(&graph, self.config.foci, self.config.seed, i as u64);
            match variants_for(&graph, &foci, Style::default()) {
                Ok(vs) if vs.is_empty() => {
                    self.exclude(i, "refocus", None, Outcome::Dropped, "no eligible focus".into())
                }
                Ok(vs) => {
                    self.keep();
                    out.extend(vs.into_iter().map(|variant| Candidate {
                        source: i,
                        variant,
                        text: None,
                    }));
                }
                Err(e) => self.exclude(i, "refocus", None, Outcome::Skipped, e.to_string()),
            }
        }
        out
    }

    fn item_id(&self, c: &Candidate, suffix: &str) -> String {
        format!("{}:{}:{suffix}", self.sources[c.source].0, c.variant.focus)
    }

    fn realize(&mut self, ep: &mut Endpoint, candidates: Vec<Candidate>) -> Vec<Candidate> {
        self.stages.push(StageCount::new("realize", candidates.len()));
        let requests: Vec<Request> = candidates
            .iter()
            .map(|c| Request::new(self.item_id(c, "text"), Kind::AmrToText, c.variant.linearized.clone()))
            .collect();
        let replies = call_batched(ep, &requests, self.config.batch_size);
        let mut out = Vec::new();
        for (mut c, reply) in candidates.into_iter().zip(replies) {
            let text = match reply {
                Ok(ResponsePayload::Text(t)) if !t.trim().is_empty() => Ok(t.trim().to_owned()),
                Ok(_) => Err("empty realization".to_owned()),
                Err(e) => Err(format!("amr_to_text: {e}")),
            };
            match text {
                Ok(t) => {
                    self.keep();
                    c.text = Some(t);
                    out.push(c);
                }
                Err(reason) => self.exclude(c.source, "realize", Some(&c.variant.focus), Outcome::Skipped, reason),
            }
        }
        out
    }

    fn score(&mut self, ep: &mut Endpoint, candidates: Vec<Candidate>) -> Vec<ParaphraseRecord> {
        self.stages.push(StageCount::new("perplexity", candidates.len()));
        let requests: Vec<Request> = candidates
            .iter()
            .map(|c| {
                let text = c.text.clone().expect("realized");
                Request::new(self.item_id(c, "ppl"), Kind::Perplexity, text)
            })
            .collect();
        let replies = call_batched(ep, &requests, self.config.batch_size);
        let mut out = Vec::new();
        for (c, reply) in candidates.into_iter().zip(replies) {
            match reply {
                Ok(ResponsePayload::Number(p)) => {
                    self.keep();
                    let (source_id, source) = self.sources[c.source].clone();
                    out.push(ParaphraseRecord {
                        source_id,
                        source,
                        focus: Focus {
                            variable: c.variant.focus,
                            concept: c.variant.concept,
                        },
                        linearized: c.variant.linearized,
                        paraphrase: c.text.expect("realized"),
                        perplexity: p,
                        scores: None,
                    });
                }
                Ok(_) => unreachable!("payload kind is checked"),
                Err(e) => self.exclude(
                    c.source,
                    "perplexity",
                    Some(&c.variant.focus),
                    Outcome::Skipped,
                    format!("perplexity: {e}"),
                ),
            }
        }
        out
    }

    fn index_of(&self, r: &ParaphraseRecord) -> usize {
        self.sources
            .iter()
            .position(|(id, _)| *id == r.source_id)
            .expect("record comes from a source")
    }

    fn filter(&mut self, records: Vec<ParaphraseRecord>) -> Vec<ParaphraseRecord> {
        let threshold = self.config.effective_threshold();
        self.stages.push(StageCount::new("filter", records.len()));
        let (kept, dropped) = filter_by_perplexity(records, threshold);
        self.stages.last_mut().expect("open").kept = kept.len();
        for r in dropped {
            let i = self.index_of(&r);
            let reason = format!("perplexity {} above threshold {threshold}", r.perplexity);
            self.exclude(i, "filter", Some(&r.focus.variable), Outcome::Dropped, reason);
        }
        kept
    }

    fn dedupe(&mut self, records: Vec<ParaphraseRecord>) -> Vec<ParaphraseRecord> {
        self.stages.push(StageCount::new("dedupe", records.len()));
        let (kept, dropped) = split_duplicates(records);
        self.stages.last_mut().expect("open").kept = kept.len();
        for r in dropped {
            let i = self.index_of(&r);
            self.exclude(i, "dedupe", Some(&r.focus.variable), Outcome::Dropped, "duplicate paraphrase".into());
        }
        kept
    }

    /// Attaches scores. A record whose embeddings fail keeps its lexical
    /// scores and simply lacks a semantic one; it is not removed.
    fn attach_scores(&mut self, embed: Option<&mut Endpoint>, records: &mut [ParaphraseRecord]) {
        let mut embeddings: Vec<Option<(Vec<f64>, Vec<f64>)>> = vec![None; records.len()];
        if let Some(ep) = embed {
            self.stages.push(StageCount::new("embed", records.len()));
            let mut requests = Vec::new();
            for r in records.iter() {
                requests.push(Request::new(format!("{}:{}:emb-src", r.source_id, r.focus.variable), Kind::Embed, r.source.clone()));
                requests.push(Request::new(format!("{}:{}:emb", r.source_id, r.focus.variable), Kind::Embed, r.paraphrase.clone()));
            }
            let mut replies = call_batched(ep, &requests, self.config.batch_size).into_iter();
            for (k, r) in records.iter().enumerate() {
                let pair = (replies.next().expect("one reply per request"), replies.next().expect("one reply per request"));
                match pair {
                    (Ok(ResponsePayload::Vector(u)), Ok(ResponsePayload::Vector(v))) if u.len() == v.len() => {
                        self.keep();
                        embeddings[k] = Some((u, v));
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        let i = self.index_of(r);
                        self.exclude(i, "embed", Some(&r.focus.variable), Outcome::Skipped, format!("embed: {e}"));
                    }
                    _ => {
                        let i = self.index_of(r);
                        self.exclude(i, "embed", Some(&r.focus.variable), Outcome::Skipped, "embedding sizes differ".into());
                    }
                }
            }
        }
        for (r, emb) in records.iter_mut().zip(embeddings) {
            let emb = emb.as_ref().map(|(u, v)| (u.as_slice(), v.as_slice()));
            r.scores = score_pair(&r.source, &r.paraphrase, None, emb).ok();
        }
    }
}

/// Runs every stage over `sources` (id, sentence) with the given adapters.
pub fn run_with(
    config: &PipelineConfig,
    sources: &[(String, String)],
    endpoints: &mut Endpoints,
) -> PipelineOutput {
    let mut run = Run {
        config,
        sources,
        stages: Vec::new(),
        excluded: Vec::new(),
    };
    let graphs = run.parse(&mut endpoints.text_to_amr);
    let candidates = run.refocus(graphs);
    let realized = run.realize(&mut endpoints.amr_to_text, candidates);
    let scored = run.score(&mut endpoints.perplexity, realized);
    let filtered = run.filter(scored);
    let mut records = run.dedupe(filtered);
    if config.scores {
        run.attach_scores(endpoints.embed.as_mut(), &mut records);
    }

    let mut adapters = vec![
        (Kind::TextToAmr, endpoints.text_to_amr.identity()),
        (Kind::AmrToText, endpoints.amr_to_text.identity()),
        (Kind::Perplexity, endpoints.perplexity.identity()),
    ];
    if let Some(e) = &endpoints.embed {
        adapters.push((Kind::Embed, e.identity()));
    }
    let report = corpus_report(&records);
    PipelineOutput {
        manifest: Manifest {
            config: config.clone(),
            threshold: config.effective_threshold(),
            adapters,
            stages: run.stages,
            excluded: run.excluded,
            report,
        },
        records,
    }
}

fn read(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), PipelineError> {
    fs::write(path, text).map_err(|source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads `config.input`, runs the pipeline against the configured
/// adapters, and writes the dataset and manifest to their configured paths.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineOutput, PipelineError> {
    config.validate()?;
    let input = config
        .input
        .as_deref()
        .ok_or_else(|| PipelineError::Config("no input file given".into()))?;
    let sources = read_sources(&read(input)?);
    let mut endpoints = Endpoints::open(config)?;
    let out = run_with(config, &sources, &mut endpoints);
    if let Some(path) = &config.output {
        write(path, &out.dataset_jsonl())?;
    }
    if let Some(path) = &config.manifest {
        write(path, &out.manifest_json())?;
    }
    Ok(out)
}
