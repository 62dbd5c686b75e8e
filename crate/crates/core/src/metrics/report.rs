use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{tokenize, PairScores};
use crate::record::ParaphraseRecord;

/// Corpus statistics and metric means. Means cover only the records that
/// carry the metric; a metric no record carries is `None`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DiversityReport {
    /// Distinct source sentences.
    pub instances: usize,
    pub paraphrases: usize,
    pub avg_paraphrases: f64,
    /// Mean paraphrase length in tokens.
    pub avg_length: f64,
    pub semantic: Option<f64>,
    pub lex_bleu: Option<f64>,
    pub lex_jaccard: Option<f64>,
    pub ted3: Option<f64>,
    pub tedf: Option<f64>,
}

/// How the similarity and lexical columns are printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Raw,
    /// Multiplied by 100, as corpus comparison tables usually show them.
    Percent,
}

#[derive(Default)]
struct Mean {
    sum: f64,
    n: usize,
}

impl Mean {
    fn add(&mut self, v: Option<f64>) {
        if let Some(v) = v {
            self.sum += v;
            self.n += 1;
        }
    }

    fn get(&self) -> Option<f64> {
        (self.n > 0).then(|| self.sum / self.n as f64)
    }
}

pub fn corpus_report(records: &[ParaphraseRecord]) -> DiversityReport {
    report_from(
        records
            .iter()
            .map(|r| (r.source_id.as_str(), r.paraphrase.as_str(), r.scores.as_ref())),
    )
}

/// Builds a report from `(source id, paraphrase, scores)` triples.
pub fn report_from<'a>(
    items: impl IntoIterator<Item = (&'a str, &'a str, Option<&'a PairScores>)>,
) -> DiversityReport {
    let mut sources: HashSet<&str> = HashSet::new();
    let mut count = 0;
    let mut length = Mean::default();
    let (mut sem, mut bleu, mut jac, mut t3, mut tf) = Default::default();
    for (source, paraphrase, scores) in items {
        sources.insert(source);
        count += 1;
        length.add(Some(tokenize(paraphrase).len() as f64));
        if let Some(s) = scores {
            Mean::add(&mut sem, s.semantic);
            Mean::add(&mut bleu, Some(s.lex_bleu));
            Mean::add(&mut jac, Some(s.lex_jaccard));
            Mean::add(&mut t3, s.ted3.map(|v| v as f64));
            Mean::add(&mut tf, s.tedf.map(|v| v as f64));
        }
    }
    let instances = sources.len();
    DiversityReport {
        instances,
        paraphrases: count,
        avg_paraphrases: if instances == 0 {
            0.0
        } else {
            count as f64 / instances as f64
        },
        avg_length: length.get().unwrap_or(0.0),
        semantic: Mean::get(&sem),
        lex_bleu: Mean::get(&bleu),
        lex_jaccard: Mean::get(&jac),
        ted3: Mean::get(&t3),
        tedf: Mean::get(&tf),
    }
}

impl DiversityReport {
    /// Two aligned tables: corpus statistics, then diversity metrics.
    /// Absent metrics print as `-`.
    pub fn render(&self, scale: Scale) -> String {
        let pct = |v: Option<f64>| match (v, scale) {
            (None, _) => "-".to_owned(),
            (Some(v), Scale::Raw) => format!("{v:.4}"),
            (Some(v), Scale::Percent) => format!("{:.2}", v * 100.0),
        };
        let plain = |v: Option<f64>| v.map_or_else(|| "-".to_owned(), |v| format!("{v:.2}"));
        let mut out = table(&[
            ("#Instances", self.instances.to_string()),
            ("Avg. #Para.", format!("{:.2}", self.avg_paraphrases)),
            ("Avg. Len.", format!("{:.2}", self.avg_length)),
        ]);
        out.push('\n');
        out.push_str(&table(&[
            ("Semantic Similarity", pct(self.semantic)),
            ("1 - BLEU", pct(self.lex_bleu)),
            ("1 - ∩/∪", pct(self.lex_jaccard)),
            ("TED-3", plain(self.ted3)),
            ("TED-F", plain(self.tedf)),
        ]));
        out
    }
}

impl fmt::Display for DiversityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Scale::Raw))
    }
}

fn table(cols: &[(&str, String)]) -> String {
    let widths: Vec<usize> = cols
        .iter()
        .map(|(h, v)| h.chars().count().max(v.chars().count()))
        .collect();
    let row = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        parts.join("  ")
    };
    format!(
        "{}\n{}\n",
        row(cols.iter().map(|(h, _)| *h).collect()),
        row(cols.iter().map(|(_, v)| v.as_str()).collect())
    )
}
