//! Line-delimited JSON messages exchanged with model adapters.
//!
//! Requests look like `{"id":"s1/amr","kind":"text_to_amr","payload":"..."}`.
//! Responses are either `{"id":..,"ok":true,"payload":..}` or
//! `{"id":..,"ok":false,"error":".."}`. Every line is one compact JSON object.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    TextToAmr,
    AmrToText,
    Perplexity,
    #[serde(alias = "embedding")]
    Embed,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::TextToAmr, Kind::AmrToText, Kind::Perplexity, Kind::Embed];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::TextToAmr => "text_to_amr",
            Kind::AmrToText => "amr_to_text",
            Kind::Perplexity => "perplexity",
            Kind::Embed => "embed",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text_to_amr" => Ok(Kind::TextToAmr),
            "amr_to_text" => Ok(Kind::AmrToText),
            "perplexity" => Ok(Kind::Perplexity),
            "embed" | "embedding" => Ok(Kind::Embed),
            other => Err(format!("unknown adapter kind {other:?}")),
        }
    }
}

/// A request payload: one text, or a pre-tokenized text as a list of tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RequestPayload {
    Text(String),
    Tokens(Vec<String>),
}

impl RequestPayload {
    /// The payload as one string, tokens joined by single spaces.
    pub fn text(&self) -> String {
        match self {
            RequestPayload::Text(s) => s.clone(),
            RequestPayload::Tokens(t) => t.join(" "),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Request {
    pub id: String,
    pub kind: Kind,
    pub payload: RequestPayload,
}

impl Request {
    pub fn new(id: impl Into<String>, kind: Kind, text: impl Into<String>) -> Self {
        Request {
            id: id.into(),
            kind,
            payload: RequestPayload::Text(text.into()),
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("requests always serialize")
    }

    pub fn parse_line(line: &str) -> Result<Request, ProtocolError> {
        serde_json::from_str(line).map_err(|e| ProtocolError::Malformed(e.to_string()))
    }
}

/// A successful response payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResponsePayload {
    Text(String),
    Number(f64),
    Vector(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Response {
    pub id: String,
    pub result: Result<ResponsePayload, String>,
}

#[derive(Serialize)]
struct WireResponse<'a> {
    id: &'a str,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    payload: Option<&'a ResponsePayload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("malformed line: {0}")]
    Malformed(String),
    /// The line is JSON with a usable id but breaks the response schema.
    #[error("response {id}: {message}")]
    Schema { id: String, message: String },
}

impl Response {
    pub fn ok(id: impl Into<String>, payload: ResponsePayload) -> Self {
        Response {
            id: id.into(),
            result: Ok(payload),
        }
    }

    pub fn error(id: impl Into<String>, message: impl Into<String>) -> Self {
        Response {
            id: id.into(),
            result: Err(message.into()),
        }
    }

    pub fn to_line(&self) -> String {
        let wire = match &self.result {
            Ok(p) => WireResponse {
                id: &self.id,
                ok: true,
                payload: Some(p),
                error: None,
            },
            Err(e) => WireResponse {
                id: &self.id,
                ok: false,
                payload: None,
                error: Some(e),
            },
        };
        serde_json::to_string(&wire).expect("responses always serialize")
    }

    pub fn parse_line(line: &str) -> Result<Response, ProtocolError> {
        let value: Value =
            serde_json::from_str(line).map_err(|e| ProtocolError::Malformed(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| ProtocolError::Malformed("not a JSON object".into()))?;
        let id = match obj.get("id") {
            Some(Value::String(s)) => s.clone(),
            _ => return Err(ProtocolError::Malformed("missing string \"id\"".into())),
        };
        let schema = |message: &str| ProtocolError::Schema {
            id: id.clone(),
            message: message.to_owned(),
        };
        match obj.get("ok") {
            Some(Value::Bool(true)) => {
                let payload = obj.get("payload").ok_or_else(|| schema("ok response without payload"))?;
                let payload: ResponsePayload = serde_json::from_value(payload.clone())
                    .map_err(|_| schema("payload must be a string, number, or number list"))?;
                Ok(Response::ok(id, payload))
            }
            Some(Value::Bool(false)) => match obj.get("error") {
                Some(Value::String(e)) => Ok(Response::error(id, e.clone())),
                _ => Err(schema("failed response without an error string")),
            },
            _ => Err(schema("missing boolean \"ok\"")),
        }
    }
}
