use std::thread;
use std::time::Duration;

use serde_json::{json, Value};
use ureq::Agent;

use super::{GatewayError, GenerationRequest, Generator};

pub const DEFAULT_API_KEY_ENV: &str = "OPENAI_API_KEY";

const EXCERPT_CHARS: usize = 300;

/// OpenAI-style chat completions over blocking HTTP.
pub struct HttpGenerator {
    endpoint: String,
    api_key: String,
    max_retries: u32,
    backoff: Duration,
    agent: Agent,
}

impl HttpGenerator {
    pub fn new(
        base_url: &str,
        api_key: String,
        max_retries: u32,
        timeout_secs: u64,
    ) -> Result<Self, GatewayError> {
        if !(base_url.starts_with("http://") || base_url.starts_with("https://")) {
            return Err(GatewayError::BadConfig(format!("not an http(s) url: {base_url}")));
        }
        let agent: Agent = Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(timeout_secs.max(1))))
            .build()
            .into();
        Ok(HttpGenerator {
            endpoint: format!("{}/chat/completions", base_url.trim_end_matches('/')),
            api_key,
            max_retries,
            backoff: Duration::from_millis(500),
            agent,
        })
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    fn attempt(&self, body: &Value) -> Result<String, (bool, GatewayError)> {
        let mut resp = self
            .agent
            .post(&self.endpoint)
            .header("Authorization", &format!("Bearer {}", self.api_key))
            .send_json(body)
            .map_err(|e| (true, GatewayError::Transport(e.to_string())))?;
        let status = resp.status().as_u16();
        let text = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| (true, GatewayError::Transport(e.to_string())))?;
        if status == 429 || status >= 500 {
            return Err((true, http_error(status, &text)));
        }
        if !(200..300).contains(&status) {
            return Err((false, http_error(status, &text)));
        }
        extract_content(&text).map_err(|e| (false, e))
    }
}

fn http_error(status: u16, body: &str) -> GatewayError {
    GatewayError::Http {
        status,
        excerpt: body.chars().take(EXCERPT_CHARS).collect(),
    }
}

/// The JSON body sent for a request.
pub fn request_body(req: &GenerationRequest) -> Value {
    let mut body = json!({
        "model": req.model,
        "messages": req.messages,
        "temperature": req.temperature,
    });
    if let Some(n) = req.max_tokens {
        body["max_tokens"] = json!(n);
    }
    body
}

/// `choices[0].message.content` of a completion response.
pub fn extract_content(text: &str) -> Result<String, GatewayError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| GatewayError::Malformed(e.to_string()))?;
    value
        .pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| GatewayError::Malformed("no choices[0].message.content".into()))
}

impl Generator for HttpGenerator {
    fn complete(&self, req: &GenerationRequest) -> Result<String, GatewayError> {
        let body = request_body(req);
        let mut delay = self.backoff;
        let mut tries = 0;
        loop {
            match self.attempt(&body) {
                Ok(text) => return Ok(text),
                Err((retryable, err)) => {
                    if !retryable || tries >= self.max_retries {
                        return Err(err);
                    }
                    tries += 1;
                    thread::sleep(delay);
                    delay = (delay * 2).min(Duration::from_secs(30));
                }
            }
        }
    }
}
