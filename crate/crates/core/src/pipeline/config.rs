use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::adapter::Endpoint;
use super::mock::MockAdapter;
use super::protocol::Kind;
use super::transport::{HttpTransport, InProcess, StdioTransport, Transport};
use super::PipelineError;

/// Perplexity threshold used when neither a profile nor a threshold is given.
pub const DEFAULT_THRESHOLD: f64 = 120.0;

/// Named perplexity thresholds for the corpus's intended use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// Building the paraphrase corpus itself.
    Dataset,
    /// Training data for sentence embeddings.
    Embeddings,
    /// Training data for syntactically controlled generation.
    Generation,
    /// Few-shot data augmentation.
    Fewshot,
}

impl Profile {
    pub const ALL: [Profile; 4] = [
        Profile::Dataset,
        Profile::Embeddings,
        Profile::Generation,
        Profile::Fewshot,
    ];

    pub fn threshold(self) -> f64 {
        match self {
            Profile::Dataset => 120.0,
            Profile::Embeddings => 110.0,
            Profile::Generation => 85.0,
            Profile::Fewshot => 110.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Profile::Dataset => "dataset",
            Profile::Embeddings => "embeddings",
            Profile::Generation => "generation",
            Profile::Fewshot => "fewshot",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Profile::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown profile {s:?} (expected dataset, embeddings, generation or fewshot)"))
    }
}

/// Where an adapter lives. In a config file this is written as
/// `{ command = "..." }`, `{ url = "..." }`, or the string `"mock"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdapterSpec {
    /// A process started from this command line, spoken to over stdio.
    Command(String),
    /// An HTTP endpoint taking POSTed request lines.
    Url(String),
    /// The built-in deterministic mock.
    Mock,
}

impl AdapterSpec {
    pub fn connect(&self) -> Result<Box<dyn Transport>, PipelineError> {
        Ok(match self {
            AdapterSpec::Command(c) => Box::new(StdioTransport::spawn(c).map_err(PipelineError::Adapter)?),
            AdapterSpec::Url(u) => Box::new(HttpTransport::new(u.clone())),
            AdapterSpec::Mock => Box::new(InProcess::new(MockAdapter::new())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Adapters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text_to_amr: Option<AdapterSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amr_to_text: Option<AdapterSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perplexity: Option<AdapterSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none", alias = "embedding")]
    pub embed: Option<AdapterSpec>,
}

impl Adapters {
    pub fn all_mock() -> Self {
        Adapters {
            text_to_amr: Some(AdapterSpec::Mock),
            amr_to_text: Some(AdapterSpec::Mock),
            perplexity: Some(AdapterSpec::Mock),
            embed: Some(AdapterSpec::Mock),
        }
    }

    pub fn get(&self, kind: Kind) -> Option<&AdapterSpec> {
        match kind {
            Kind::TextToAmr => self.text_to_amr.as_ref(),
            Kind::AmrToText => self.amr_to_text.as_ref(),
            Kind::Perplexity => self.perplexity.as_ref(),
            Kind::Embed => self.embed.as_ref(),
        }
    }

    pub fn set(&mut self, kind: Kind, spec: AdapterSpec) {
        let slot = match kind {
            Kind::TextToAmr => &mut self.text_to_amr,
            Kind::AmrToText => &mut self.amr_to_text,
            Kind::Perplexity => &mut self.perplexity,
            Kind::Embed => &mut self.embed,
        };
        *slot = Some(spec);
    }
}

fn default_foci() -> usize {
    crate::refocus::DEFAULT_FOCI
}
fn default_batch() -> usize {
    16
}
fn default_timeout() -> u64 {
    30_000
}
fn yes() -> bool {
    true
}

/// Everything a pipeline run depends on. Loaded from TOML; every field
/// except the adapters has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// Foci sampled per source graph.
    #[serde(default = "default_foci")]
    pub foci: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Profile>,
    /// Overrides the profile's threshold when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default = "default_batch")]
    pub batch_size: usize,
    #[serde(default = "default_timeout")]
    pub timeout_ms: u64,
    /// Attach metric scores to every record.
    #[serde(default = "yes")]
    pub scores: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<PathBuf>,
    #[serde(default)]
    pub adapters: Adapters,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            foci: default_foci(),
            seed: 0,
            profile: None,
            threshold: None,
            batch_size: default_batch(),
            timeout_ms: default_timeout(),
            scores: true,
            input: None,
            output: None,
            manifest: None,
            adapters: Adapters::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        let config: PipelineConfig =
            toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// The threshold in force: an explicit one, else the profile's, else 120.
    pub fn effective_threshold(&self) -> f64 {
        self.threshold
            .or(self.profile.map(Profile::threshold))
            .unwrap_or(DEFAULT_THRESHOLD)
    }

    /// Selects a profile, discarding any explicit threshold.
    pub fn apply_profile(&mut self, profile: Profile) {
        self.profile = Some(profile);
        self.threshold = None;
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_millis(self.timeout_ms)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let fail = |m: &str| Err(PipelineError::Config(m.to_owned()));
        let t = self.effective_threshold();
        if !(t.is_finite() && t > 0.0) {
            return fail("threshold must be a positive number");
        }
        if self.foci == 0 {
            return fail("foci must be at least 1");
        }
        if self.batch_size == 0 {
            return fail("batch_size must be at least 1");
        }
        if self.timeout_ms == 0 {
            return fail("timeout_ms must be positive");
        }
        Ok(())
    }

    pub(crate) fn endpoint(&self, kind: Kind) -> Result<Option<Endpoint>, PipelineError> {
        self.adapters
            .get(kind)
            .map(|spec| Ok(Endpoint::new(kind, spec.connect()?, self.timeout())))
            .transpose()
    }
}
