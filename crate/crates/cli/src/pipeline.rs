use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use reroot::pipeline::{
    read_sources, run_with, AdapterSpec, Adapters, Endpoints, Kind, PipelineConfig, PipelineError,
    Profile,
};

use crate::{fail, read_input, write_output, Status};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// TOML run configuration. Flags given here override its values.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Named threshold preset: dataset, embeddings, generation or fewshot.
    #[arg(long)]
    profile: Option<Profile>,
    /// Perplexity threshold; takes precedence over the profile.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(short, long)]
    seed: Option<u64>,
    /// Foci sampled per source sentence.
    #[arg(short = 'k', long)]
    foci: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    /// Per-batch adapter timeout in milliseconds.
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Sentences, one per line (stdin if neither this nor the config names a file).
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Dataset JSON lines (stdout if neither this nor the config names a file).
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(short, long)]
    manifest: Option<PathBuf>,
    /// Serve every adapter kind from the built-in mock.
    #[arg(long)]
    mock: bool,
    /// Adapter process for one kind, e.g. `perplexity="python -m lm_score"`.
    #[arg(long = "adapter", value_name = "KIND=COMMAND", value_parser = parse_assignment)]
    adapters: Vec<(Kind, String)>,
    /// HTTP adapter for one kind, e.g. `embed=http://localhost:8080/`.
    #[arg(long = "adapter-url", value_name = "KIND=URL", value_parser = parse_assignment)]
    adapter_urls: Vec<(Kind, String)>,
    /// Leave metric scores off the records.
    #[arg(long)]
    no_scores: bool,
}

fn parse_assignment(s: &str) -> Result<(Kind, String), String> {
    let (kind, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected KIND=VALUE, got {s:?}"))?;
    if value.is_empty() {
        return Err(format!("empty value for {kind}"));
    }
    Ok((kind.parse()?, value.to_owned()))
}

fn status_of(e: &PipelineError) -> Status {
    match e {
        PipelineError::Config(_) => Status::Usage,
        PipelineError::MissingAdapter(_) | PipelineError::Adapter(_) => Status::Adapter,
        PipelineError::Io { .. } => Status::Data,
    }
}

fn lift(e: PipelineError) -> anyhow::Error {
    fail(status_of(&e), e)
}

fn build_config(args: &Args) -> anyhow::Result<PipelineConfig> {
    let mut config = match &args.config {
        Some(path) => PipelineConfig::from_toml(&read_input(Some(path))?).map_err(lift)?,
        None => PipelineConfig::default(),
    };
    if let Some(p) = args.profile {
        config.apply_profile(p);
    }
    if args.threshold.is_some() {
        config.threshold = args.threshold;
    }
    config.seed = args.seed.unwrap_or(config.seed);
    config.foci = args.foci.unwrap_or(config.foci);
    config.batch_size = args.batch_size.unwrap_or(config.batch_size);
    config.timeout_ms = args.timeout_ms.unwrap_or(config.timeout_ms);
    config.scores &= !args.no_scores;
    for (slot, flag) in [
        (&mut config.input, &args.input),
        (&mut config.output, &args.output),
        (&mut config.manifest, &args.manifest),
    ] {
        if flag.is_some() {
            slot.clone_from(flag);
        }
    }
    if args.mock {
        config.adapters = Adapters::all_mock();
    }
    for (kind, command) in &args.adapters {
        config.adapters.set(*kind, AdapterSpec::Command(command.clone()));
    }
    for (kind, url) in &args.adapter_urls {
        config.adapters.set(*kind, AdapterSpec::Url(url.clone()));
    }
    config.validate().map_err(lift)?;
    Ok(config)
}

pub fn run(args: Args) -> anyhow::Result<ExitCode> {
    let config = build_config(&args)?;
    let sources = read_sources(&read_input(config.input.as_deref())?);
    let mut endpoints = Endpoints::open(&config).map_err(lift)?;
    let out = run_with(&config, &sources, &mut endpoints);

    write_output(config.output.as_ref(), &out.dataset_jsonl())?;
    if let Some(path) = &config.manifest {
        std::fs::write(path, out.manifest_json())
            .map_err(|e| fail(Status::Data, anyhow!("{}: {e}", path.display())))?;
    }
    for stage in &out.manifest.stages {
        eprintln!(
            "{:<10} in {:>5}  kept {:>5}  dropped {:>5}  skipped {:>5}",
            stage.stage, stage.input, stage.kept, stage.dropped, stage.skipped
        );
    }
    eprintln!("threshold {}", out.manifest.threshold);
    eprint!("{}", out.manifest.report);
    Ok(ExitCode::SUCCESS)
}
