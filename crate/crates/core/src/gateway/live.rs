//! OpenAI-compatible chat-completion provider.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{GatewayErrorKind, LlmRequest, Provider, ProviderError, ProviderReply};

pub const DEFAULT_BASE_URL: &str = "https://api.openai.com/v1";

#[derive(Debug, Clone)]
pub struct LiveConfig {
    pub api_key: Option<String>,
    pub base_url: String,
    pub timeout: Duration,
}

impl Default for LiveConfig {
    fn default() -> Self {
        Self {
            api_key: None,
            base_url: DEFAULT_BASE_URL.to_string(),
            timeout: Duration::from_secs(60),
        }
    }
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: [ChatMessage<'a>; 2],
    max_tokens: u32,
    temperature: f64,
    top_p: f64,
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'static str,
    content: &'a str,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
    #[serde(default)]
    usage: Option<Usage>,
}

#[derive(Deserialize)]
struct Choice {
    message: ReplyMessage,
}

#[derive(Deserialize)]
struct ReplyMessage {
    #[serde(default)]
    content: Option<String>,
}

#[derive(Deserialize)]
struct Usage {
    prompt_tokens: Option<u64>,
    completion_tokens: Option<u64>,
}

pub struct LiveProvider {
    config: LiveConfig,
    agent: ureq::Agent,
}

impl std::fmt::Debug for LiveProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LiveProvider")
            .field("base_url", &self.config.base_url)
            .field("has_api_key", &self.config.api_key.is_some())
            .finish()
    }
}

impl LiveProvider {
    pub fn new(config: LiveConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        Self { config, agent }
    }
}

fn status_error(status: u16) -> ProviderError {
    let kind = match status {
        401 | 403 => GatewayErrorKind::Auth,
        408 => GatewayErrorKind::Timeout,
        429 => GatewayErrorKind::RateLimit,
        _ => GatewayErrorKind::Protocol,
    };
    ProviderError::new(kind, format!("provider answered HTTP {status}"))
}

impl Provider for LiveProvider {
    fn complete(&self, req: &LlmRequest) -> Result<ProviderReply, ProviderError> {
        let Some(key) = &self.config.api_key else {
            return Err(ProviderError::new(GatewayErrorKind::Auth, "LLM_API_KEY is not set"));
        };
        let body = ChatRequest {
            model: &req.model_id,
            messages: [
                ChatMessage {
                    role: "system",
                    content: &req.system_text,
                },
                ChatMessage {
                    role: "user",
                    content: &req.user_text,
                },
            ],
            max_tokens: req.max_output_tokens,
            temperature: req.temperature,
            top_p: req.top_p,
        };
        let url = format!("{}/chat/completions", self.config.base_url.trim_end_matches('/'));
        let mut response = self
            .agent
            .post(&url)
            .header("Authorization", &format!("Bearer {key}"))
            .send_json(&body)
            .map_err(|e| match e {
                ureq::Error::Timeout(_) => ProviderError::new(GatewayErrorKind::Timeout, e.to_string()),
                other => ProviderError::new(GatewayErrorKind::Protocol, other.to_string()),
            })?;

        let status = response.status().as_u16();
        if !(200..300).contains(&status) {
            return Err(status_error(status));
        }
        let parsed: ChatResponse = response
            .body_mut()
            .read_json()
            .map_err(|e| ProviderError::new(GatewayErrorKind::Protocol, e.to_string()))?;
        let text = parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| ProviderError::new(GatewayErrorKind::Protocol, "response has no choices"))?;
        Ok(ProviderReply {
            text,
            input_tokens: parsed.usage.as_ref().and_then(|u| u.prompt_tokens),
            output_tokens: parsed.usage.as_ref().and_then(|u| u.completion_tokens),
            simulated_latency_ms: None,
        })
    }
}
