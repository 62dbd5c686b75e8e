use std::collections::{HashMap, HashSet};

/// Lowercases `text`, splits on whitespace, and makes every character that
/// is neither alphanumeric nor whitespace a token of its own.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for c in text.chars().flat_map(char::to_lowercase) {
        if c.is_alphanumeric() {
            word.push(c);
            continue;
        }
        if !word.is_empty() {
            tokens.push(std::mem::take(&mut word));
        }
        if !c.is_whitespace() {
            tokens.push(c.to_string());
        }
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    tokens
}

fn ngram_counts<T: AsRef<str>>(tokens: &[T], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for window in tokens.windows(n) {
            let key: Vec<&str> = window.iter().map(AsRef::as_ref).collect();
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    counts
}

/// Sentence-level BLEU-4 of `candidate` against a single `reference`.
///
/// Modified n-gram precisions for n = 1..4 are combined by geometric mean.
/// A zero match count for n ≥ 2 is smoothed to `1 / (total + 1)`; no unigram
/// overlap, or an empty candidate, scores 0. The brevity penalty is
/// `exp(1 - r/c)` when the candidate is shorter than the reference.
pub fn bleu<T: AsRef<str>, U: AsRef<str>>(candidate: &[T], reference: &[U]) -> f64 {
    let c = candidate.len();
    if c == 0 {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for n in 1..=4 {
        let cand = ngram_counts(candidate, n);
        let refs = ngram_counts(reference, n);
        let total = c.saturating_sub(n - 1);
        let matched: usize = cand
            .iter()
            .map(|(gram, &k)| k.min(refs.get(gram).copied().unwrap_or(0)))
            .sum();
        let precision = if matched > 0 {
            matched as f64 / total as f64
        } else if n == 1 {
            return 0.0;
        } else {
            1.0 / (total as f64 + 1.0)
        };
        log_sum += precision.ln();
    }
    let r = reference.len();
    let penalty = if c < r {
        (1.0 - r as f64 / c as f64).exp()
    } else {
        1.0
    };
    penalty * (log_sum / 4.0).exp()
}

/// `1 - |types(a) ∩ types(b)| / |types(a) ∪ types(b)|`; 0 when both are empty.
pub fn jaccard_diversity<T: AsRef<str>, U: AsRef<str>>(a: &[T], b: &[U]) -> f64 {
    let a: HashSet<&str> = a.iter().map(AsRef::as_ref).collect();
    let b: HashSet<&str> = b.iter().map(AsRef::as_ref).collect();
    let union = a.union(&b).count();
    if union == 0 {
        return 0.0;
    }
    1.0 - a.intersection(&b).count() as f64 / union as f64
}
