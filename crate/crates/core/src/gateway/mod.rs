//! Provider-agnostic LLM access.
//!
//! [`Gateway`] wraps a [`Provider`] (live HTTP or the scripted mock) and adds
//! what every caller needs: request validation, retries with exponential
//! backoff, latency measurement and token accounting.

mod cost;
mod live;
mod mock;

use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use cost::{estimate_cost, CostError, CostEstimate, ModelPrice, PricingTable};
pub use live::{LiveConfig, LiveProvider};
pub use mock::{LatencyModel, MockProvider, MockReply, MockRule, MockScript, MockScriptError};

pub const DEFAULT_MODEL: &str = "gpt-4";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlmRequest {
    pub system_text: String,
    pub user_text: String,
    pub max_output_tokens: u32,
    pub temperature: f64,
    pub top_p: f64,
    pub model_id: String,
}

impl LlmRequest {
    pub fn check(&self) -> Result<(), String> {
        if self.max_output_tokens < 1 {
            return Err("max_output_tokens must be at least 1".into());
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(format!("temperature {} outside [0, 2]", self.temperature));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(format!("top_p {} outside (0, 1]", self.top_p));
        }
        Ok(())
    }

    /// SHA-256 over a canonical encoding of every request field, hex encoded.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("request is always serializable");
        hex::encode(Sha256::digest(&canonical))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LlmUsage {
    pub input_tokens: u64,
    pub output_tokens: u64,
    pub latency_ms: f64,
    pub call_count: u64,
}

impl std::ops::Add for LlmUsage {
    type Output = LlmUsage;

    fn add(self, rhs: LlmUsage) -> LlmUsage {
        LlmUsage {
            input_tokens: self.input_tokens + rhs.input_tokens,
            output_tokens: self.output_tokens + rhs.output_tokens,
            latency_ms: self.latency_ms + rhs.latency_ms,
            call_count: self.call_count + rhs.call_count,
        }
    }
}

impl std::ops::AddAssign for LlmUsage {
    fn add_assign(&mut self, rhs: LlmUsage) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for LlmUsage {
    fn sum<I: Iterator<Item = LlmUsage>>(iter: I) -> Self {
        iter.fold(LlmUsage::default(), |a, b| a + b)
    }
}

/// Rough token count for text the provider did not meter: one token per four
/// bytes of UTF-8, rounded up.
pub fn approximate_tokens(text: &str) -> u64 {
    (text.len() as u64).div_ceil(4)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GatewayErrorKind {
    Timeout,
    Auth,
    RateLimit,
    Protocol,
}

impl GatewayErrorKind {
    pub fn is_transient(self) -> bool {
        !matches!(self, GatewayErrorKind::Auth)
    }
}

/// A single failed attempt, as reported by a provider.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{kind:?}: {message}")]
pub struct ProviderError {
    pub kind: GatewayErrorKind,
    pub message: String,
}

impl ProviderError {
    pub fn new(kind: GatewayErrorKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("LLM call failed after {attempts} attempt(s): {kind:?}: {message}")]
pub struct GatewayError {
    pub kind: GatewayErrorKind,
    pub attempts: u32,
    pub message: String,
}

/// What a provider returns for one successful attempt.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProviderReply {
    pub text: String,
    pub input_tokens: Option<u64>,
    pub output_tokens: Option<u64>,
    /// Set by simulating providers; replaces the measured wall-clock latency.
    pub simulated_latency_ms: Option<f64>,
}

pub trait Provider: Send + Sync + std::fmt::Debug {
    fn complete(&self, req: &LlmRequest) -> Result<ProviderReply, ProviderError>;

    fn is_mock(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_retries: 2,
            base_delay: Duration::from_millis(250),
        }
    }
}

impl RetryPolicy {
    pub fn no_delay() -> Self {
        Self {
            base_delay: Duration::ZERO,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LlmExchange {
    pub text: String,
    pub usage: LlmUsage,
    pub attempts: u32,
}

#[derive(Debug, thiserror::Error)]
pub enum GatewayConfigError {
    #[error(transparent)]
    MockScript(#[from] MockScriptError),
}

/// Cheap to clone; clones share the provider.
#[derive(Debug, Clone)]
pub struct Gateway {
    provider: Arc<dyn Provider>,
    model_id: String,
    retry: RetryPolicy,
}

impl Gateway {
    pub fn new(provider: Arc<dyn Provider>, model_id: impl Into<String>) -> Self {
        Self {
            provider,
            model_id: model_id.into(),
            retry: RetryPolicy::default(),
        }
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    /// Builds a gateway from `LLM_MOCK_SCRIPT`, `LLM_API_KEY`, `LLM_MODEL`
    /// and `LLM_BASE_URL`. A mock script path switches to mock mode.
    pub fn from_env() -> Result<Self, GatewayConfigError> {
        let model = std::env::var("LLM_MODEL").unwrap_or_else(|_| DEFAULT_MODEL.to_string());
        if let Ok(path) = std::env::var("LLM_MOCK_SCRIPT") {
            let mock = MockProvider::from_path(path)?;
            return Ok(Self::new(Arc::new(mock), model).with_retry(RetryPolicy::no_delay()));
        }
        let live = LiveProvider::new(LiveConfig {
            api_key: std::env::var("LLM_API_KEY").ok().filter(|k| !k.is_empty()),
            base_url: std::env::var("LLM_BASE_URL").unwrap_or_else(|_| live::DEFAULT_BASE_URL.to_string()),
            ..LiveConfig::default()
        });
        Ok(Self::new(Arc::new(live), model))
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn is_mock(&self) -> bool {
        self.provider.is_mock()
    }

    /// Builds a request for this gateway's model.
    pub fn request(
        &self,
        system_text: impl Into<String>,
        user_text: impl Into<String>,
        max_output_tokens: u32,
        temperature: f64,
        top_p: f64,
    ) -> LlmRequest {
        LlmRequest {
            system_text: system_text.into(),
            user_text: user_text.into(),
            max_output_tokens,
            temperature,
            top_p,
            model_id: self.model_id.clone(),
        }
    }

    pub fn send(&self, req: &LlmRequest) -> Result<LlmExchange, GatewayError> {
        req.check().map_err(|message| GatewayError {
            kind: GatewayErrorKind::Protocol,
            attempts: 0,
            message,
        })?;

        let started = Instant::now();
        let mut attempts = 0;
        loop {
            attempts += 1;
            match self.provider.complete(req) {
                Ok(reply) => {
                    let wall_ms = started.elapsed().as_secs_f64() * 1000.0;
                    let usage = LlmUsage {
                        input_tokens: reply.input_tokens.unwrap_or_else(|| {
                            approximate_tokens(&req.system_text) + approximate_tokens(&req.user_text)
                        }),
                        output_tokens: reply.output_tokens.unwrap_or_else(|| approximate_tokens(&reply.text)),
                        latency_ms: reply.simulated_latency_ms.unwrap_or(wall_ms),
                        call_count: 1,
                    };
                    return Ok(LlmExchange {
                        text: reply.text,
                        usage,
                        attempts,
                    });
                }
                Err(err) if err.kind.is_transient() && attempts <= self.retry.max_retries => {
                    log::debug!("attempt {attempts} failed ({err}), retrying");
                    let delay = self.retry.base_delay * 2u32.pow(attempts - 1);
                    if !delay.is_zero() {
                        std::thread::sleep(delay);
                    }
                }
                Err(err) => {
                    return Err(GatewayError {
                        kind: err.kind,
                        attempts,
                        message: err.message,
                    })
                }
            }
        }
    }
}
