use std::collections::HashMap;
use std::time::Duration;

use thiserror::Error;

use super::protocol::{Kind, ProtocolError, Request, Response, ResponsePayload};
use super::transport::{Transport, TransportError};

/// Why a single request produced no usable answer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ItemError {
    #[error("adapter reported: {0}")]
    Adapter(String),
    #[error("invalid response: {0}")]
    Schema(String),
    #[error("no response within {0} ms")]
    Missing(u128),
    #[error("adapter unavailable after restart: {0}")]
    Transport(String),
}

pub type ItemResult = Result<ResponsePayload, ItemError>;

/// One adapter of one kind.
pub struct Endpoint {
    kind: Kind,
    transport: Box<dyn Transport>,
    timeout: Duration,
}

impl Endpoint {
    pub fn new(kind: Kind, transport: Box<dyn Transport>, timeout: Duration) -> Self {
        Endpoint {
            kind,
            transport,
            timeout,
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn identity(&self) -> String {
        self.transport.identity()
    }
}

fn check_payload(kind: Kind, payload: ResponsePayload) -> ItemResult {
    let bad = |what: &str| Err(ItemError::Schema(format!("{kind} expects {what}")));
    match (kind, payload) {
        (Kind::TextToAmr | Kind::AmrToText, p @ ResponsePayload::Text(_)) => Ok(p),
        (Kind::TextToAmr | Kind::AmrToText, _) => bad("a string payload"),
        (Kind::Perplexity, ResponsePayload::Number(x)) if x.is_finite() && x > 0.0 => {
            Ok(ResponsePayload::Number(x))
        }
        (Kind::Perplexity, _) => bad("a positive number"),
        (Kind::Embed, ResponsePayload::Vector(v))
            if !v.is_empty() && v.iter().all(|x| x.is_finite()) =>
        {
            Ok(ResponsePayload::Vector(v))
        }
        (Kind::Embed, _) => bad("a non-empty list of numbers"),
    }
}

/// Sends one batch and matches responses to requests by id.
///
/// Per-request problems (an `ok:false` answer, a schema violation, a
/// missing or late answer) come back as item errors. If the transport
/// itself fails, the adapter is restarted and the batch sent once more;
/// a second failure is returned as `Err`.
pub fn call_adapter(
    endpoint: &mut Endpoint,
    requests: &[Request],
) -> Result<Vec<ItemResult>, TransportError> {
    let lines: Vec<String> = requests.iter().map(Request::to_line).collect();
    let replies = match endpoint.transport.exchange(&lines, endpoint.timeout) {
        Ok(r) => r,
        Err(_) => {
            endpoint.transport.restart()?;
            endpoint.transport.exchange(&lines, endpoint.timeout)?
        }
    };

    let index: HashMap<&str, usize> = requests
        .iter()
        .enumerate()
        .map(|(i, r)| (r.id.as_str(), i))
        .collect();
    let mut results: Vec<Option<ItemResult>> = vec![None; requests.len()];
    for line in &replies {
        let (id, outcome) = match Response::parse_line(line) {
            Ok(Response { id, result }) => {
                let outcome = result
                    .map_err(ItemError::Adapter)
                    .and_then(|p| check_payload(endpoint.kind, p));
                (id, outcome)
            }
            Err(ProtocolError::Schema { id, message }) => (id, Err(ItemError::Schema(message))),
            // Without an id the line cannot be attributed; its request ends
            // up reported as unanswered.
            Err(ProtocolError::Malformed(_)) => continue,
        };
        if let Some(&i) = index.get(id.as_str()) {
            results[i].get_or_insert(outcome);
        }
    }
    Ok(requests
        .iter()
        .zip(results)
        .map(|(req, r)| {
            if req.kind != endpoint.kind {
                return Err(ItemError::Schema(format!(
                    "{} request sent to a {} adapter",
                    req.kind, endpoint.kind
                )));
            }
            r.unwrap_or(Err(ItemError::Missing(endpoint.timeout.as_millis())))
        })
        .collect())
}

/// Splits `requests` into batches of at most `batch_size`. A batch whose
/// transport fails twice marks all of its items as failed.
pub fn call_batched(endpoint: &mut Endpoint, requests: &[Request], batch_size: usize) -> Vec<ItemResult> {
    let mut out = Vec::with_capacity(requests.len());
    for chunk in requests.chunks(batch_size.max(1)) {
        match call_adapter(endpoint, chunk) {
            Ok(results) => out.extend(results),
            Err(e) => out.extend(chunk.iter().map(|_| Err(ItemError::Transport(e.to_string())))),
        }
    }
    out
}
