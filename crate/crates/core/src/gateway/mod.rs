//! Text generators: a live chat-completions client, a scripted queue for
//! tests, a content-addressed cache and a transcript recorder.

mod cache;
mod http;
mod scripted;

use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use cache::CacheGenerator;
pub use http::{HttpGenerator, DEFAULT_API_KEY_ENV};
pub use scripted::{load_script, ScriptFile, ScriptedGenerator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GatewayError {
    #[error("HTTP {status}: {excerpt}")]
    Http { status: u16, excerpt: String },
    #[error("transport error: {0}")]
    Transport(String),
    #[error("malformed completion: {0}")]
    Malformed(String),
    #[error("script exhausted after {0} responses")]
    ScriptExhausted(usize),
    #[error("scripted generator used by more than one caller at once")]
    ConcurrentScriptUse,
    #[error("no cached response for request {0}")]
    CacheMiss(String),
    #[error("cache entry {0} holds a different request")]
    CacheCollision(String),
    #[error("environment variable {0} holding the API key is not set")]
    MissingApiKey(String),
    #[error("bad backend config: {0}")]
    BadConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GatewayError {
    fn from(e: std::io::Error) -> Self {
        GatewayError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRequest {
    pub messages: Vec<ChatMessage>,
    pub model: String,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_tokens: Option<u32>,
}

impl GenerationRequest {
    /// A whole prompt sent as one user message at temperature 0.
    pub fn from_prompt(prompt: impl Into<String>, model: impl Into<String>) -> Self {
        GenerationRequest {
            messages: vec![ChatMessage {
                role: Role::User,
                content: prompt.into(),
            }],
            model: model.into(),
            temperature: 0.0,
            max_tokens: None,
        }
    }

    /// SHA-256 over the canonical JSON form (object keys sorted).
    pub fn hash(&self) -> String {
        let value = serde_json::to_value(self).expect("request serializes");
        let canonical = value.to_string();
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    /// The prompt text of the last user message.
    pub fn prompt(&self) -> &str {
        self.messages
            .iter()
            .rev()
            .find(|m| m.role == Role::User)
            .map(|m| m.content.as_str())
            .unwrap_or("")
    }
}

/// Anything that turns a request into completion text. Shared across loop
/// executions, so implementations must be thread safe.
pub trait Generator: Send + Sync {
    fn complete(&self, req: &GenerationRequest) -> Result<String, GatewayError>;
}

impl<G: Generator + ?Sized> Generator for Box<G> {
    fn complete(&self, req: &GenerationRequest) -> Result<String, GatewayError> {
        (**self).complete(req)
    }
}

impl<G: Generator + ?Sized> Generator for std::sync::Arc<G> {
    fn complete(&self, req: &GenerationRequest) -> Result<String, GatewayError> {
        (**self).complete(req)
    }
}

/// `complete` through any backend.
pub fn complete(backend: &dyn Generator, req: &GenerationRequest) -> Result<String, GatewayError> {
    backend.complete(req)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub hash: String,
    pub request: GenerationRequest,
    pub response: String,
    pub latency_ms: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GeneratorTranscript {
    pub entries: Vec<TranscriptEntry>,
}

/// Wraps a generator and keeps an append-only log of its calls.
pub struct RecordingGenerator<G> {
    inner: G,
    log: Mutex<GeneratorTranscript>,
}

impl<G: Generator> RecordingGenerator<G> {
    pub fn new(inner: G) -> Self {
        RecordingGenerator {
            inner,
            log: Mutex::new(GeneratorTranscript::default()),
        }
    }

    pub fn transcript(&self) -> GeneratorTranscript {
        self.log.lock().map(|t| t.clone()).unwrap_or_default()
    }
}

impl<G: Generator> Generator for RecordingGenerator<G> {
    fn complete(&self, req: &GenerationRequest) -> Result<String, GatewayError> {
        let started = Instant::now();
        let response = self.inner.complete(req)?;
        let entry = TranscriptEntry {
            hash: req.hash(),
            request: req.clone(),
            response: response.clone(),
            latency_ms: started.elapsed().as_millis() as u64,
        };
        if let Ok(mut log) = self.log.lock() {
            log.entries.push(entry);
        }
        Ok(response)
    }
}

/// Backend description as it appears in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BackendSpec {
    Http {
        url: String,
        #[serde(default = "default_key_env")]
        api_key_env: String,
        #[serde(default = "default_retries")]
        max_retries: u32,
        #[serde(default = "default_timeout")]
        timeout_secs: u64,
    },
    Scripted {
        script: PathBuf,
    },
    Cache {
        dir: PathBuf,
        #[serde(default)]
        read_only: bool,
        #[serde(default)]
        inner: Option<Box<BackendSpec>>,
    },
}

fn default_key_env() -> String {
    DEFAULT_API_KEY_ENV.to_string()
}

fn default_retries() -> u32 {
    4
}

fn default_timeout() -> u64 {
    120
}

/// Builds a backend. Scripted files keyed by instance id are rejected here;
/// use [`load_script`] and build one queue per instance instead.
pub fn make_backend(spec: &BackendSpec) -> Result<Box<dyn Generator>, GatewayError> {
    match spec {
        BackendSpec::Http {
            url,
            api_key_env,
            max_retries,
            timeout_secs,
        } => {
            let key = std::env::var(api_key_env)
                .ok()
                .filter(|k| !k.trim().is_empty())
                .ok_or_else(|| GatewayError::MissingApiKey(api_key_env.clone()))?;
            Ok(Box::new(HttpGenerator::new(url, key, *max_retries, *timeout_secs)?))
        }
        BackendSpec::Scripted { script } => match load_script(script)? {
            ScriptFile::Shared(responses) => Ok(Box::new(ScriptedGenerator::new(responses))),
            ScriptFile::PerInstance(_) => Err(GatewayError::BadConfig(format!(
                "{} is keyed by instance id; it needs one backend per instance",
                script.display()
            ))),
        },
        BackendSpec::Cache {
            dir,
            read_only,
            inner,
        } => {
            let inner = match inner {
                Some(spec) if !*read_only => Some(make_backend(spec)?),
                Some(_) | None => None,
            };
            if inner.is_none() && !*read_only {
                return Err(GatewayError::BadConfig(
                    "a writable cache needs an inner backend".into(),
                ));
            }
            Ok(Box::new(CacheGenerator::new(dir, inner, *read_only)?))
        }
    }
}
