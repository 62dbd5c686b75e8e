//! A deterministic stand-in for the four model adapters, used by tests and
//! by `reroot mock-adapter`.
//!
//! * `text_to_amr` echoes PENMAN input, knows the graph of
//!   [`fixtures::SENTENCE`], and otherwise builds a star graph whose root is
//!   the first word and whose `ARGn` children are the remaining words.
//! * `amr_to_text` reads concepts in preorder, writing `:mod` dependents
//!   before their head, and ends the sentence with a period.
//! * `perplexity` is ten times the token count unless overridden.
//! * `embed` is a 16-dimensional hashed bag of words.

use std::collections::HashMap;

use serde_json::Value;

use super::protocol::{Kind, Request, Response, ResponsePayload};
use crate::fixtures;
use crate::metrics::tokenize;
use crate::penman::{
    graph_equal, parse_penman, parse_tree, write_tree, Branch, BranchTarget, PenmanNode,
    PenmanTree, Role, Style, Variable,
};

pub const EMBEDDING_DIM: usize = 16;

/// Realization the mock gives the worked example focused on `need`.
pub const NEED_REALIZATION: &str = "They need statistical documentation to approve these prices, I know.";

#[derive(Debug, Clone, Default)]
pub struct MockAdapter {
    perplexity: HashMap<String, f64>,
}

impl MockAdapter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Makes `perplexity` return `value` for exactly `text`.
    pub fn with_perplexity(mut self, text: impl Into<String>, value: f64) -> Self {
        self.perplexity.insert(text.into(), value);
        self
    }

    pub fn handle(&self, request: &Request) -> Response {
        let text = request.payload.text();
        let result = match request.kind {
            Kind::TextToAmr => text_to_amr(&text).map(ResponsePayload::Text),
            Kind::AmrToText => amr_to_text(&text).map(ResponsePayload::Text),
            Kind::Perplexity => self.score(&text).map(ResponsePayload::Number),
            Kind::Embed => embed(&text).map(ResponsePayload::Vector),
        };
        Response {
            id: request.id.clone(),
            result,
        }
    }

    /// Answers one request line. Unreadable requests get an error response
    /// carrying whatever id could be recovered.
    pub fn handle_line(&self, line: &str) -> String {
        match Request::parse_line(line) {
            Ok(req) => self.handle(&req).to_line(),
            Err(e) => {
                let id = serde_json::from_str::<Value>(line)
                    .ok()
                    .and_then(|v| v.get("id").and_then(Value::as_str).map(str::to_owned))
                    .unwrap_or_default();
                Response::error(id, format!("bad request: {e}")).to_line()
            }
        }
    }

    fn score(&self, text: &str) -> Result<f64, String> {
        if let Some(&v) = self.perplexity.get(text) {
            return Ok(v);
        }
        match tokenize(text).len() {
            0 => Err("cannot score empty text".into()),
            n => Ok(10.0 * n as f64),
        }
    }
}

fn same_text(a: &str, b: &str) -> bool {
    tokenize(a) == tokenize(b)
}

fn text_to_amr(text: &str) -> Result<String, String> {
    let trimmed = text.trim();
    if trimmed.starts_with('(') {
        parse_penman(trimmed).map_err(|e| e.to_string())?;
        return Ok(trimmed.to_owned());
    }
    if same_text(trimmed, fixtures::SENTENCE) {
        return Ok(fixtures::KNOW_ROOTED.to_owned());
    }
    let words: Vec<String> = tokenize(trimmed)
        .into_iter()
        .filter(|t| t.chars().next().is_some_and(char::is_alphanumeric))
        .collect();
    let (head, rest) = words
        .split_first()
        .ok_or_else(|| "no words to parse".to_owned())?;
    let var = |i: usize| Variable::new(format!("z{i}")).expect("generated names are valid");
    let mut root = PenmanNode::new(var(1), head.clone());
    for (i, w) in rest.iter().enumerate() {
        root.children.push(Branch {
            role: Role::new(format!("ARG{i}")),
            target: BranchTarget::Node(PenmanNode::new(var(i + 2), w.clone())),
        });
    }
    Ok(write_tree(&PenmanTree::new(root), Style::default()))
}

fn strip_sense(concept: &str) -> &str {
    match concept.rsplit_once('-') {
        Some((stem, sense)) if !stem.is_empty() && sense.chars().all(|c| c.is_ascii_digit()) => stem,
        _ => concept,
    }
}

fn realize(node: &PenmanNode, words: &mut Vec<String>) {
    let modifiers = node
        .children
        .iter()
        .filter(|b| b.role.as_str() == "mod");
    for b in modifiers {
        if let BranchTarget::Node(child) = &b.target {
            realize(child, words);
        }
    }
    words.push(strip_sense(&node.concept).to_owned());
    for b in node.children.iter().filter(|b| b.role.as_str() != "mod") {
        if let BranchTarget::Node(child) = &b.target {
            realize(child, words);
        }
    }
}

fn amr_to_text(text: &str) -> Result<String, String> {
    let tree = parse_tree(text).map_err(|e| e.to_string())?;
    let graph = tree.to_graph().map_err(|e| e.to_string())?;
    let example = parse_penman(fixtures::KNOW_ROOTED).expect("fixture parses");
    if graph_equal(&graph, &example) && tree.top().as_str() == "z3" {
        return Ok(NEED_REALIZATION.to_owned());
    }
    let mut words = Vec::new();
    realize(&tree.root, &mut words);
    let mut sentence = words.join(" ");
    if let Some(first) = sentence.chars().next() {
        let upper: String = first.to_uppercase().collect();
        sentence.replace_range(..first.len_utf8(), &upper);
    }
    sentence.push('.');
    Ok(sentence)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn embed(text: &str) -> Result<Vec<f64>, String> {
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return Err("cannot embed empty text".into());
    }
    let mut v = vec![0.0; EMBEDDING_DIM];
    for t in &tokens {
        v[(fnv1a(t) % EMBEDDING_DIM as u64) as usize] += 1.0;
    }
    Ok(v)
}
