//! Diversity metrics for sentence pairs and paraphrase corpora.
//!
//! Lexical diversity is reported as `1 - BLEU` and as `1 - |A ∩ B| / |A ∪ B|`
//! over token types. Syntactic diversity is the tree edit distance between
//! constituency parses, either truncated to the top three layers or in full.
//! Semantic similarity is the cosine of two sentence embeddings.

mod constituency;
mod lexical;
mod report;
mod ted;

use thiserror::Error;

pub use constituency::{parse_bracketed, truncate_depth, Constituent, ConstituencyTree};
pub use lexical::{bleu, jaccard_diversity, tokenize};
pub use report::{corpus_report, report_from, DiversityReport, Scale};
pub use ted::{ted, ted3, tedf};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("embedding dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cosine similarity is undefined for a zero vector")]
    ZeroVector,
    #[error("bracketed tree, offset {offset}: {message}")]
    Bracket { offset: usize, message: String },
}

/// Cosine of the angle between two embeddings, clamped to `[-1, 1]`.
pub fn cosine_similarity(u: &[f64], v: &[f64]) -> Result<f64, MetricsError> {
    if u.len() != v.len() {
        return Err(MetricsError::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu: f64 = u.iter().map(|a| a * a).sum();
    let nv: f64 = v.iter().map(|a| a * a).sum();
    if nu == 0.0 || nv == 0.0 {
        return Err(MetricsError::ZeroVector);
    }
    Ok((dot / (nu * nv).sqrt()).clamp(-1.0, 1.0))
}

/// Metric values for one (source, paraphrase) pair. The lexical fields hold
/// diversities, so identical sentences score 0. Fields whose inputs were
/// not supplied are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairScores {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub semantic: Option<f64>,
    /// `1 - BLEU`.
    pub lex_bleu: f64,
    /// `1 - |A ∩ B| / |A ∪ B|`.
    pub lex_jaccard: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ted3: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tedf: Option<usize>,
}

/// Scores a pair of sentences. BLEU treats the paraphrase as the candidate
/// and the source as the reference.
pub fn score_pair(
    source: &str,
    paraphrase: &str,
    parses: Option<(&ConstituencyTree, &ConstituencyTree)>,
    embeddings: Option<(&[f64], &[f64])>,
) -> Result<PairScores, MetricsError> {
    let src = tokenize(source);
    let para = tokenize(paraphrase);
    let semantic = embeddings
        .map(|(u, v)| cosine_similarity(u, v))
        .transpose()?;
    Ok(PairScores {
        semantic,
        lex_bleu: 1.0 - bleu(&para, &src),
        lex_jaccard: jaccard_diversity(&src, &para),
        ted3: parses.map(|(a, b)| ted3(a, b)),
        tedf: parses.map(|(a, b)| tedf(a, b)),
    })
}
