//! Scripted, deterministic stand-in for an LLM provider.
//!
//! A script is a JSON document:
//!
//! ```json
//! {
//!   "by_digest": { "<sha256 of request>": { "text": "yes" } },
//!   "ordered":   [ { "fail": "Timeout" }, "VERDICT: CORRECT" ],
//!   "rules":     [ { "when": ["Answer with only"], "reply": "yes" } ],
//!   "fallback":  { "text": "...", "input_tokens": 900, "output_tokens": 700 },
//!   "latency":   { "base_ms": 50.0, "per_max_output_token_ms": 0.5 }
//! }
//! ```
//!
//! Lookup order per call: digest match, then the next unused `ordered`
//! entry, then the first rule whose `when` substrings all occur in the
//! request's system or user text, then `fallback`. A reply is either a bare
//! string or an object. Reported output tokens never exceed the request's
//! `max_output_tokens`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{approximate_tokens, GatewayErrorKind, LlmRequest, Provider, ProviderError, ProviderReply};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "ReplyRepr")]
pub struct MockReply {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_tokens: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_tokens: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fail: Option<GatewayErrorKind>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ReplyRepr {
    Text(String),
    Full {
        #[serde(default)]
        text: Option<String>,
        #[serde(default)]
        input_tokens: Option<u64>,
        #[serde(default)]
        output_tokens: Option<u64>,
        #[serde(default)]
        fail: Option<GatewayErrorKind>,
    },
}

impl From<ReplyRepr> for MockReply {
    fn from(repr: ReplyRepr) -> Self {
        match repr {
            ReplyRepr::Text(text) => MockReply::text(text),
            ReplyRepr::Full {
                text,
                input_tokens,
                output_tokens,
                fail,
            } => MockReply {
                text,
                input_tokens,
                output_tokens,
                fail,
            },
        }
    }
}

impl MockReply {
    pub fn text(text: impl Into<String>) -> Self {
        Self {
            text: Some(text.into()),
            ..Self::default()
        }
    }

    pub fn failure(kind: GatewayErrorKind) -> Self {
        Self {
            fail: Some(kind),
            ..Self::default()
        }
    }

    pub fn with_tokens(mut self, input: u64, output: u64) -> Self {
        self.input_tokens = Some(input);
        self.output_tokens = Some(output);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MockRule {
    pub when: Vec<String>,
    pub reply: MockReply,
}

impl MockRule {
    pub fn new<S: Into<String>>(when: impl IntoIterator<Item = S>, reply: MockReply) -> Self {
        Self {
            when: when.into_iter().map(Into::into).collect(),
            reply,
        }
    }

    fn matches(&self, req: &LlmRequest) -> bool {
        self.when
            .iter()
            .all(|needle| req.user_text.contains(needle) || req.system_text.contains(needle))
    }
}

/// Simulated latency: `base_ms + per_max_output_token_ms * max_output_tokens`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyModel {
    pub base_ms: f64,
    pub per_max_output_token_ms: f64,
}

impl LatencyModel {
    pub fn latency_ms(&self, req: &LlmRequest) -> f64 {
        self.base_ms + self.per_max_output_token_ms * f64::from(req.max_output_tokens)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MockScript {
    #[serde(default)]
    pub by_digest: BTreeMap<String, MockReply>,
    #[serde(default)]
    pub ordered: Vec<MockReply>,
    #[serde(default)]
    pub rules: Vec<MockRule>,
    #[serde(default)]
    pub fallback: Option<MockReply>,
    #[serde(default)]
    pub latency: Option<LatencyModel>,
}

#[derive(Debug, thiserror::Error)]
pub enum MockScriptError {
    #[error("cannot read mock script {path}: {source}")]
    Unreadable { path: String, source: std::io::Error },
    #[error("malformed mock script {path}: {reason}")]
    Malformed { path: String, reason: String },
}

impl MockScript {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MockScriptError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| MockScriptError::Unreadable {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| MockScriptError::Malformed {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }
}

#[derive(Debug)]
pub struct MockProvider {
    script: MockScript,
    next_ordered: AtomicUsize,
    log: Mutex<Vec<LlmRequest>>,
}

impl MockProvider {
    pub fn new(script: MockScript) -> Self {
        Self {
            script,
            next_ordered: AtomicUsize::new(0),
            log: Mutex::new(Vec::new()),
        }
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, MockScriptError> {
        MockScript::load(path).map(Self::new)
    }

    /// Every request seen so far, failed attempts included, in call order.
    pub fn call_log(&self) -> Vec<LlmRequest> {
        self.log.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn call_count(&self) -> usize {
        self.log.lock().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn clear_log(&self) {
        self.log.lock().unwrap_or_else(|e| e.into_inner()).clear();
    }

    fn lookup(&self, req: &LlmRequest) -> Option<&MockReply> {
        if let Some(reply) = self.script.by_digest.get(&req.digest()) {
            return Some(reply);
        }
        if !self.script.ordered.is_empty() {
            let idx = self.next_ordered.fetch_add(1, Ordering::SeqCst);
            if let Some(reply) = self.script.ordered.get(idx) {
                return Some(reply);
            }
        }
        self.script
            .rules
            .iter()
            .find(|rule| rule.matches(req))
            .map(|rule| &rule.reply)
            .or(self.script.fallback.as_ref())
    }
}

impl Provider for MockProvider {
    fn complete(&self, req: &LlmRequest) -> Result<ProviderReply, ProviderError> {
        self.log.lock().unwrap_or_else(|e| e.into_inner()).push(req.clone());

        let reply = self
            .lookup(req)
            .ok_or_else(|| ProviderError::new(GatewayErrorKind::Protocol, "mock script has no reply for request"))?;
        if let Some(kind) = reply.fail {
            return Err(ProviderError::new(kind, "scripted failure"));
        }
        let text = reply.text.clone().unwrap_or_default();
        let input = reply
            .input_tokens
            .unwrap_or_else(|| approximate_tokens(&req.system_text) + approximate_tokens(&req.user_text));
        let output = reply
            .output_tokens
            .unwrap_or_else(|| approximate_tokens(&text))
            .min(u64::from(req.max_output_tokens));
        Ok(ProviderReply {
            text,
            input_tokens: Some(input),
            output_tokens: Some(output),
            simulated_latency_ms: self.script.latency.map(|m| m.latency_ms(req)),
        })
    }

    fn is_mock(&self) -> bool {
        true
    }
}
