//! Paraphrase construction by re-rooting AMR graphs, plus the diversity
//! metrics used to evaluate paraphrase corpora.

pub mod fixtures;
pub mod metrics;
pub mod penman;
pub mod pipeline;
pub mod record;
pub mod refocus;

pub use record::{Focus, ParaphraseRecord};
