use serde::{Deserialize, Serialize};

use crate::metrics::PairScores;
use crate::penman::Variable;

/// The node a paraphrase was generated from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Focus {
    pub variable: Variable,
    pub concept: String,
}

/// One paraphrase in a generated corpus, serialized as a single JSON line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParaphraseRecord {
    pub source_id: String,
    pub source: String,
    pub focus: Focus,
    pub linearized: String,
    pub paraphrase: String,
    pub perplexity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scores: Option<PairScores>,
}
